#pragma once

#include <cstdint>
#include <random>

namespace metabalance {

/// SplitMix64 output function. A fast, high-quality bit mixer used to
/// derive decorrelated child seeds from a base seed plus integer tags.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive a child seed from a base seed and one tag. Distinct (base, a)
/// pairs map to distinct-looking seeds; the map is pure and portable.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
  std::uint64_t state = base;
  std::uint64_t h = splitmix64(state);
  state += a;
  h ^= splitmix64(state);
  return h;
}

/// Derive a child seed from a base seed and two tags (e.g. matchup index
/// and game index). Order matters: (a, b) and (b, a) give different seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t state = base;
  std::uint64_t h = splitmix64(state);
  state += a;
  h ^= splitmix64(state);
  state += b;
  h ^= splitmix64(state);
  return h;
}

/// The engine used everywhere randomness is needed. One engine per logical
/// stream (per trial, per game, per agent) keeps results independent of
/// scheduling order.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace metabalance
