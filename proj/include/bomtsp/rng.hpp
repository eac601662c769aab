#pragma once

#include <cstdint>
#include <random>

namespace bomtsp {

// SplitMix64: one fixed-cost step; used to derive independent substreams so
// results do not depend on how work is sliced across threads.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a) {
  return splitmix64(seed ^ splitmix64(a + 0x632be59bd9b4e019ULL));
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

// Deterministic substream: the k-th stream of a given seed is the same no
// matter which worker draws it.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t index) {
  return std::mt19937_64(mix_seed(seed, index));
}

inline double uniform01(std::mt19937_64& gen) {
  return (gen() >> 11) * 0x1.0p-53;
}

}  // namespace bomtsp
