#pragma once

#include <cstdint>
#include <span>

namespace qpm::rng {

// splitmix64 finalizer: a bijective 64-bit mix with good avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Counter-based draw addressed by (seed, trial, layer). Any draw in a run is
// computable without sequential generator state, so the engine is
// deterministic for every worker count and common-random-number comparisons
// can replay the exact stream. Two chained splitmix64 stages: the first keys
// a per-trial stream off the seed, the second indexes the layer within it.
inline constexpr std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t trial,
                                         std::uint64_t layer) {
  const std::uint64_t stream = mix64(seed + kGolden + trial * kGolden);
  return mix64(stream + layer * kGolden);
}

// Uniform double in [0, 1), 53 mantissa bits.
inline constexpr double uniform_draw(std::uint64_t seed, std::uint64_t trial,
                                     std::uint64_t layer) {
  return static_cast<double>(draw_bits(seed, trial, layer) >> 11) * 0x1.0p-53;
}

// Pairwise (tree) summation with a fixed association order. Used for every
// cross-trial reduction so results do not depend on scheduling.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace qpm::rng
