#pragma once

#include <cmath>
#include <cstdint>

namespace famscan {

// splitmix64; used to expand seeds into xoshiro state and to derive
// independent substreams from (seed, tag, index...) tuples.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with a portable inline uniform/normal layer so simulated
// cohorts are byte-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
    have_spare_ = false;
  }

  std::uint64_t next() {
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

  // uniform on [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // standard normal via polar Box-Muller with one cached deviate
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // HWE genotype draw: count of the risk allele, freq p
  int hwe_genotype(double p) { return int(bernoulli(p)) + int(bernoulli(p)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic substream derivation: independent of thread scheduling, so
// parallel generation is reproducible at any worker count.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                      std::uint64_t b = 0) {
  std::uint64_t sm = seed;
  std::uint64_t h = splitmix64(sm);
  sm = h ^ (tag * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
  h = splitmix64(sm);
  sm = h ^ (a * 0xd1b54a32d192ed03ULL + 0x452821e638d01377ULL);
  h = splitmix64(sm);
  sm = h ^ (b * 0x8cb92ba72f3d8dd7ULL + 0x13198a2e03707344ULL);
  return Rng(splitmix64(sm));
}

}  // namespace famscan
