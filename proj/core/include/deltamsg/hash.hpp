#pragma once

#include <cstdint>
#include <string_view>

namespace deltamsg {

// splitmix64 finalizer; a good bit mixer for seeds and combined hashes.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t state = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

// Hash of a seed and a sequence of strings; each piece is terminated so that
// ("ab","c") and ("a","bc") differ.
template <typename... Parts>
constexpr std::uint64_t seeded_hash(std::uint64_t seed, const Parts&... parts) {
  std::uint64_t h = mix64(seed);
  ((h = fnv1a64(std::string_view(parts), h), h = fnv1a64(std::string_view("\x1f", 1), h)), ...);
  return mix64(h);
}

}  // namespace deltamsg
