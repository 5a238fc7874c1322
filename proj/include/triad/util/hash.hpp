#pragma once

#include <cstdint>
#include <string_view>

namespace triad {

// FNV-1a, fixed here (not std::hash) so derived seeds are identical on every
// platform and standard library.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-(seed, instance, check, repetition) stream seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view instance,
                                 std::string_view check, std::uint64_t repetition) {
  std::uint64_t h = fnv1a64(instance);
  h = fnv1a64(check, h);
  h ^= splitmix64(base);
  h ^= splitmix64(repetition + 0x51ed2701);
  return splitmix64(h);
}

}  // namespace triad
