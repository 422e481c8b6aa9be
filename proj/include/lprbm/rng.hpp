#pragma once

#include <cstdint>
#include <span>

namespace lprbm {

// Self-contained xoshiro256++ engine. Keeps sampling reproducible across
// standard-library versions; streams derived from (seed, stream_id) are
// independent, so chain results do not depend on thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    Rng r(seed);
    // fold the stream id through splitmix before state init
    r.reseed(splitmix(seed ^ splitmix(stream_id + 0x9e3779b97f4a7c15ull)));
    return r;
  }

  std::uint64_t next_u64() {
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

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint32_t uniform_below(std::uint32_t n) {
    // Lemire's multiply-shift with rejection
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * n;
    std::uint32_t l = static_cast<std::uint32_t>(m);
    if (l < n) {
      std::uint32_t t = (0u - n) % n;
      while (l < t) {
        x = next_u64() >> 32;
        m = x * n;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // standard normal, Marsaglia polar method
  double normal();

  // exponential with rate 1
  double exponential();

  // draw index with probability softmax(logits)
  int categorical_from_logits(std::span<const double> logits);

 private:
  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix(x += 0x9e3779b97f4a7c15ull);
    have_spare_ = false;
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Sample u ~ N(mu, 1) conditioned on u > 0.
// Plain rejection when the constraint is weak, Robert's shifted-exponential
// rejection in the tail regime.
double truncated_normal_positive(Rng& rng, double mu);

}  // namespace lprbm
