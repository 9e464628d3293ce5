#include "theon/rng.hpp"

namespace theon::rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chain(std::uint64_t key, std::uint64_t v) {
  return mix(key ^ mix(v));
}

std::uint64_t hash_bytes(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double u01(std::uint64_t key) {
  return static_cast<double>(mix(key) >> 11) * 0x1.0p-53;
}

std::uint32_t below(std::uint64_t key, std::uint32_t n) {
  // multiply-shift; bias is 2^-64 per draw, far below anything observable
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(mix(key)) * n) >> 64);
}

}  // namespace theon::rng
