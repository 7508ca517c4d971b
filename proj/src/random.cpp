#include "maxstable/random.hpp"

#include <cmath>
#include <numbers>

namespace maxstable {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9E3779B97F4A7C15ULL;
    word = splitmix64(x);
  }
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform_open() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  const std::uint64_t k = (*this)() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double RandomStream::exponential() { return -std::log(uniform_open()); }

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index,
                           std::uint64_t purpose) {
  std::uint64_t key = splitmix64(master_seed);
  key = splitmix64(key ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  key = splitmix64(key ^ splitmix64(purpose + 0x85157AF5ULL));
  return RandomStream(key);
}

}  // namespace maxstable
