#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace maxstable {

// SplitMix64 finalizer; used for seeding and for deriving stream keys.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// xoshiro256++ generator. All variates are produced by the methods below
// rather than <random> distributions, so sample values do not depend on the
// standard library implementation.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open();

  // Standard normal via Box-Muller; the second variate is cached.
  double standard_normal();

  // Exponential with unit rate.
  double exponential();

 private:
  std::array<std::uint64_t, 4> s_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Stream for work item `index` under `master_seed`. `purpose` separates
// independent uses of the same index (e.g. paths vs Monte-Carlo probes).
[[nodiscard]] RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index,
                                         std::uint64_t purpose = 0);

}  // namespace maxstable
