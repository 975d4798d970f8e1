#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cooprpl::rng {

// Stream tags keep independent draws (fading, success, traffic, ...) from
// sharing counter space.
enum class Tag : std::uint64_t {
  Placement = 1,
  Fading = 2,
  Success = 3,
  Control = 4,
  Traffic = 5,
  Cooperation = 6,
  Trickle = 7,
  Interference = 8,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, Tag tag, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
  for (std::uint64_t k : keys) h = splitmix64(h ^ k);
  return h;
}

// Maps 64 random bits to [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based uniform in [0, 1): a pure function of (seed, tag, keys).
inline double uniform(std::uint64_t seed, Tag tag, std::initializer_list<std::uint64_t> keys) noexcept {
  return to_unit(hash(seed, tag, keys));
}

// Sequential generator for draws whose count is data dependent (placement,
// traffic). Integer and real draws avoid std distributions so results do
// not depend on the standard library's distribution algorithms.
class Stream {
 public:
  Stream(std::uint64_t seed, Tag tag, std::uint64_t sub = 0) : gen_(hash(seed, tag, {sub})) {}

  double uniform() { return to_unit(gen_()); }

  // Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(gen_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(gen_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Knuth's multiplication method for small means, normal-approximation
  // free inversion by sequential search for larger ones.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double prod = uniform();
      while (prod > limit) {
        ++k;
        prod *= uniform();
      }
      return k;
    }
    // Inversion starting at the mode keeps the loop short for large means.
    const double u = uniform();
    const auto mode = static_cast<std::uint64_t>(std::floor(mean));
    double pmf_mode = std::exp(-mean + static_cast<double>(mode) * std::log(mean) - std::lgamma(static_cast<double>(mode) + 1.0));
    double cdf_below_mode = 0.0;
    {
      double p = pmf_mode;
      for (std::uint64_t k = mode; k > 0; --k) {
        p *= static_cast<double>(k) / mean;
        cdf_below_mode += p;
        if (p < 1e-300) break;
      }
    }
    double cdf = cdf_below_mode;
    if (u < cdf) {
      double p = pmf_mode;
      for (std::uint64_t k = mode; k > 0; --k) {
        p *= static_cast<double>(k) / mean;
        cdf -= p;
        if (u >= cdf) return k - 1;
      }
      return 0;
    }
    double p = pmf_mode;
    std::uint64_t k = mode;
    cdf += p;
    while (u >= cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cooprpl::rng
