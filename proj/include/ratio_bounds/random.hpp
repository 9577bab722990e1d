#pragma once

// Philox4x64-10 counter-based generator (Salmon et al., Random123) and the
// few variate generators the sampler needs.
//
// Key = (seed, stream), so independent streams come from distinct stream
// ids rather than from jumping. Known-answer vectors are in the tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ratio_bounds::random {

class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  explicit Philox4x64(std::uint64_t seed = 0, std::uint64_t stream = 0) : key_{seed, stream} {}

  /// One application of the 10-round bijection.
  static Counter block(Counter ctr, Key key) {
    ctr = round(ctr, key);
    for (int r = 1; r < 10; ++r) {
      key[0] += kW0;
      key[1] += kW1;
      ctr = round(ctr, key);
    }
    return ctr;
  }

  result_type operator()() {
    if (index_ == 4) {
      buffer_ = block(counter_, key_);
      increment();
      index_ = 0;
    }
    return buffer_[index_++];
  }

  const Key& key() const { return key_; }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static Counter round(const Counter& c, const Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  void increment() {
    for (auto& w : counter_)
      if (++w != 0) break;
  }

  Key key_;
  Counter counter_{0, 0, 0, 0};
  Counter buffer_{};
  int index_ = 4;
};

/// Uniform on (0, 1] with 53-bit resolution.
template <class Engine>
double uniform_open_closed(Engine& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal variates by the Marsaglia polar method (pairs cached).
class NormalGenerator {
 public:
  template <class Engine>
  double operator()(Engine& eng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform_open_closed(eng) - 1.0;
      v = 2.0 * uniform_open_closed(eng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

template <class Engine>
double exponential(Engine& eng) {
  return -std::log(uniform_open_closed(eng));
}

/// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via the U^{1/shape} boost.
template <class Engine>
double standard_gamma(Engine& eng, NormalGenerator& normal, double shape) {
  if (shape < 1.0) {
    const double g = standard_gamma(eng, normal, shape + 1.0);
    return g * std::exp(std::log(uniform_open_closed(eng)) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open_closed(eng);
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

/// Student t with r degrees of freedom: Z / sqrt(chi^2_r / r).
template <class Engine>
double student_t(Engine& eng, NormalGenerator& normal, double r) {
  const double z = normal(eng);
  const double chi2 = 2.0 * standard_gamma(eng, normal, 0.5 * r);
  return z / std::sqrt(chi2 / r);
}

}  // namespace ratio_bounds::random
