#pragma once

#include <cstdint>

namespace projlab {

// Counter-based random stream: value k of stream `seed` is a pure function of
// (seed, k), so truncating a materialization never changes earlier draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

// uniform in [0,1), 53-bit resolution
inline double keyed_unit(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(keyed_u64(seed, counter) >> 11) * 0x1.0p-53;
}

inline std::uint64_t key_pair(std::int64_t a, std::int64_t b) {
  return splitmix64(static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ULL) ^
         static_cast<std::uint64_t>(b);
}

}  // namespace projlab
