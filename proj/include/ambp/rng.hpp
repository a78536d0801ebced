#pragma once
/**
 * @file rng.hpp
 * @brief Reproducible random numbers for the path simulator.
 *
 * Generator: SplitMix64 (Steele, Lea & Flood's fixed-increment variant of
 * the mix64 finalizer). Each path derives an independent stream from
 * (seed, path index) by running the parent state forward, so path i's
 * draws never depend on how many threads simulate the bundle.
 *
 * Normal draws use the inverse CDF (Wichura's AS 241 / PPND16 rational
 * approximation, |error| < 1e-15) rather than Box-Muller or ziggurat:
 * identical bits in, identical doubles out, on every platform.
 */

#include <cstdint>

namespace ambp {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform on (0, 1), never returning an endpoint
  double next_uniform() {
    // 53 random mantissa bits, shifted into (0,1); +0.5 keeps it off 0
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal();

  /// Stream for one path: scramble the seed with the path index through an
  /// extra SplitMix64 round so neighbouring indices decorrelate.
  static SplitMix64 path_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 parent(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    return SplitMix64(parent.next_u64());
  }

private:
  std::uint64_t state_;
};

/// Inverse standard normal CDF, Wichura's PPND16 (AS 241).
double normal_icdf(double p);

}  // namespace ambp
