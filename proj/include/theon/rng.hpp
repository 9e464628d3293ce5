#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace theon::rng {

// Counter-based generator: every random quantity is a pure function of a
// 64-bit key chain, so parallel draws are race-free and reproducible by
// construction. Keys are built by chaining the root seed with coordinate
// identities (hashed labels, component indices, trial counters).

std::uint64_t mix(std::uint64_t x);                         // splitmix64 finalizer
std::uint64_t chain(std::uint64_t key, std::uint64_t v);    // extend a key
std::uint64_t hash_bytes(std::string_view s);               // FNV-1a

inline std::uint64_t key_of(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t k = 0x9e3779b97f4a7c15ULL;
  for (auto p : parts) k = chain(k, p);
  return k;
}

// Uniform on the 2^53 grid of [0,1).
double u01(std::uint64_t key);

// Uniform integer in [0, n), n >= 1.
std::uint32_t below(std::uint64_t key, std::uint32_t n);

}  // namespace theon::rng
