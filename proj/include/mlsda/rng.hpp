// Deterministic seed derivation for independent, reproducible streams.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace mlsda {

// Finalizer with full avalanche; every output bit depends on every input bit.
constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Stream seed for a master seed and an index path such as (kind, point,
// trial). Paths of different lengths or contents give unrelated seeds.
constexpr uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> path) {
  constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  uint64_t h = mix64(master + kGamma);
  for (const uint64_t v : path) h = mix64(h + kGamma * (v + 1));
  return h;
}

}  // namespace mlsda
