#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace isl {

using Rng = std::mt19937_64;

// Stream purposes, folded into seed derivation so every consumer of
// randomness in a run draws from its own independent stream.
namespace stream {
inline constexpr std::uint64_t init = 0x1a17;
inline constexpr std::uint64_t eval = 0x3e7a;
inline constexpr std::uint64_t style = 0x57a1;
inline constexpr std::uint64_t test = 0x7e57;
} // namespace stream

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed for a sub-stream addressed by a path of indices,
// e.g. derive_seed(root, {stream::eval, generation, agent}).
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t part : path)
    h = splitmix64(h ^ splitmix64(part));
  return h;
}

inline Rng make_stream(std::uint64_t root,
                       std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(root, path));
}

} // namespace isl
