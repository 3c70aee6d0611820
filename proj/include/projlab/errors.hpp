#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace projlab {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceCapError : std::runtime_error {
  std::size_t partial_count = 0;
  ResourceCapError(const std::string& msg, std::size_t n)
      : std::runtime_error(msg), partial_count(n) {}
};

}  // namespace projlab
