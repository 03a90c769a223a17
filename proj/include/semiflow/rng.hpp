#pragma once

#include <cstdint>
#include <random>

namespace semiflow {

// SplitMix64 step; used both as a generator and to derive independent streams
// from one user seed, so every random choice in the tool chain is a pure
// function of (--seed, stream label).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t label) {
  std::uint64_t s = seed ^ (0x517cc1b727220a95ull * (label + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t label = 0) {
  return std::mt19937_64(derive_stream(seed, label));
}

}  // namespace semiflow
