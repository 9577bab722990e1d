#pragma once

// Log-mass and log-density evaluators for the families compared in this
// library. Discrete masses follow Loader's saddle-point form
//   log f = -stirlerr terms - bd0 terms + log normaliser,
// where stirlerr(k) is exactly the Binet remainder R(k), so no factorial
// or large log Gamma value is ever formed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/specfun.hpp"

namespace ratio_bounds::dist {

// ---------------------------------------------------------------------------
// Discrete families on the non-negative integers.

struct Hypergeometric {
  std::int64_t N = 1;  // population
  std::int64_t L = 0;  // marked items
  std::int64_t n = 1;  // draws

  Hypergeometric() = default;
  Hypergeometric(std::int64_t N_, std::int64_t L_, std::int64_t n_) : N(N_), L(L_), n(n_) {
    require(N >= 1, "Hypergeometric: N must be >= 1");
    require(L >= 0 && L <= N, "Hypergeometric: need 0 <= L <= N");
    require(n >= 1 && n <= N, "Hypergeometric: need 1 <= n <= N");
  }
};

struct Binomial {
  std::int64_t n = 1;
  double p = 0.0;

  Binomial() = default;
  Binomial(std::int64_t n_, double p_) : n(n_), p(p_) {
    require(n >= 0, "Binomial: n must be >= 0");
    require(p >= 0.0 && p <= 1.0, "Binomial: p must lie in [0, 1]");
  }
};

struct Poisson {
  double lambda = 0.0;

  Poisson() = default;
  explicit Poisson(double lambda_) : lambda(lambda_) {
    require(std::isfinite(lambda) && lambda >= 0.0, "Poisson: lambda must be >= 0");
  }
};

/// Sum of independent Bernoulli(p_i). The pmf is built once by O(n^2)
/// convolution and kept with the value.
class PoissonBinomial {
 public:
  explicit PoissonBinomial(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    require(!p_.empty(), "PoissonBinomial: need at least one probability");
    for (double pi : p_) require(pi > 0.0 && pi < 1.0, "PoissonBinomial: each p_i must lie in (0, 1)");
    pmf_.assign(p_.size() + 1, 0.0);
    pmf_[0] = 1.0;
    std::size_t len = 1;
    for (double pi : p_) {
      const double qi = 1.0 - pi;
      pmf_[len] = pmf_[len - 1] * pi;
      for (std::size_t k = len - 1; k > 0; --k) pmf_[k] = pmf_[k] * qi + pmf_[k - 1] * pi;
      pmf_[0] *= qi;
      ++len;
    }
  }

  const std::vector<double>& probabilities() const { return p_; }
  const std::vector<double>& pmf() const { return pmf_; }
  std::int64_t size() const { return static_cast<std::int64_t>(p_.size()); }
  double mean() const {
    double s = 0.0;
    for (double pi : p_) s += pi;
    return s;
  }

 private:
  std::vector<double> p_;
  std::vector<double> pmf_;
};

using DiscreteFamily = std::variant<Hypergeometric, Binomial, Poisson, PoissonBinomial>;

namespace detail {

inline constexpr double kLog2Pi = 1.83787706640934548356065947281123;

// x log(x/np) + np - x without cancellation when x ~ np.
inline double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

inline double stirlerr(double k) { return specfun::binet_remainder(k); }

}  // namespace detail

/// log Bin(n, p)({k}).
inline double log_binomial_mass(std::int64_t n, double p, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  if (k == 0) return static_cast<double>(n) * std::log1p(-p);
  if (k == n) return static_cast<double>(n) * std::log(p);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double lc = detail::stirlerr(nd) - detail::stirlerr(kd) - detail::stirlerr(nd - kd) -
                    detail::bd0(kd, nd * p) - detail::bd0(nd - kd, nd * (1.0 - p));
  return lc + 0.5 * (std::log(nd / (kd * (nd - kd))) - detail::kLog2Pi);
}

/// log Poiss(lambda)({k}).
inline double log_poisson_mass(double lambda, std::int64_t k) {
  if (k < 0) return kNegInf;
  if (lambda == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (k == 0) return -lambda;
  const double kd = static_cast<double>(k);
  return -detail::stirlerr(kd) - detail::bd0(kd, lambda) - 0.5 * (detail::kLog2Pi + std::log(kd));
}

/// log Hyp(N, L, n)({k}) as Bin(L,q)(k) Bin(N-L,q)(n-k) / Bin(N,q)(n), q = n/N.
inline double log_hypergeometric_mass(std::int64_t N, std::int64_t L, std::int64_t n, std::int64_t k) {
  if (k < std::max<std::int64_t>(0, n - (N - L)) || k > std::min(n, L)) return kNegInf;
  const double q = static_cast<double>(n) / static_cast<double>(N);
  return log_binomial_mass(L, q, k) + log_binomial_mass(N - L, q, n - k) - log_binomial_mass(N, q, n);
}

/// Last index of the support; nullopt for the Poisson family.
inline std::optional<std::int64_t> support_end(const DiscreteFamily& family) {
  return std::visit(
      [](const auto& f) -> std::optional<std::int64_t> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Hypergeometric>) return std::min(f.n, f.L);
        else if constexpr (std::is_same_v<T, Binomial>) return f.n;
        else if constexpr (std::is_same_v<T, PoissonBinomial>) return f.size();
        else return std::nullopt;
      },
      family);
}

inline std::int64_t support_begin(const DiscreteFamily& family) {
  if (const auto* h = std::get_if<Hypergeometric>(&family)) return std::max<std::int64_t>(0, h->n - (h->N - h->L));
  return 0;
}

/// Index K with P(X > K) < 1e-16 (Poisson) or the true support end.
inline std::int64_t effective_support_end(const DiscreteFamily& family) {
  if (auto end = support_end(family)) return *end;
  const double lambda = std::get<Poisson>(family).lambda;
  if (lambda == 0.0) return 0;
  // Tail beyond K is at most pmf(K+1) / (1 - lambda/(K+2)) once K+2 > lambda.
  auto k = static_cast<std::int64_t>(std::floor(lambda)) + 1;
  const double log_cut = std::log(1e-16);
  for (;; ++k) {
    const double ratio = lambda / static_cast<double>(k + 2);
    if (ratio < 1.0 && log_poisson_mass(lambda, k + 1) - std::log1p(-ratio) < log_cut) return k;
  }
}

/// Upper tail mass of a Poisson law beyond index k, P(X > k).
inline double poisson_upper_tail(double lambda, std::int64_t k) {
  if (k < 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(k) + 1.0, lambda);
}

/// Natural log of the probability mass at k; -inf off the support.
inline double log_mass(const DiscreteFamily& family, std::int64_t k) {
  return std::visit(
      [k](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Hypergeometric>) return log_hypergeometric_mass(f.N, f.L, f.n, k);
        else if constexpr (std::is_same_v<T, Binomial>) return log_binomial_mass(f.n, f.p, k);
        else if constexpr (std::is_same_v<T, Poisson>) return log_poisson_mass(f.lambda, k);
        else {
          if (k < 0 || k > f.size()) return kNegInf;
          const double m = f.pmf()[static_cast<std::size_t>(k)];
          return m > 0.0 ? std::log(m) : kNegInf;
        }
      },
      family);
}

/// Right-closed CDF P(X <= x).
inline double cdf(const DiscreteFamily& family, double x) {
  if (x < 0.0) return 0.0;
  if (const auto* pois = std::get_if<Poisson>(&family)) {
    if (!std::isfinite(x)) return 1.0;
    if (pois->lambda == 0.0) return 1.0;
    return boost::math::gamma_q(std::floor(x) + 1.0, pois->lambda);
  }
  const std::int64_t end = *support_end(family);
  if (x >= static_cast<double>(end)) return 1.0;
  const auto top = static_cast<std::int64_t>(std::floor(x));
  double acc = 0.0;
  for (std::int64_t k = support_begin(family); k <= top; ++k) acc += std::exp(log_mass(family, k));
  return std::clamp(acc, 0.0, 1.0);
}

inline std::string name(const DiscreteFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Hypergeometric>)
          return "Hyp(" + std::to_string(f.N) + "," + std::to_string(f.L) + "," + std::to_string(f.n) + ")";
        else if constexpr (std::is_same_v<T, Binomial>)
          return "Bin(" + std::to_string(f.n) + "," + std::to_string(f.p) + ")";
        else if constexpr (std::is_same_v<T, Poisson>)
          return "Poiss(" + std::to_string(f.lambda) + ")";
        else
          return "PoissonBinomial(n=" + std::to_string(f.size()) + ")";
      },
      family);
}

// ---------------------------------------------------------------------------
// Continuous families.

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Beta(a, b) seen as a law on (0, inf) with zero density beyond 1.
struct Beta {
  double a = 1.0;
  double b = 1.0;
  Beta() = default;
  Beta(double a_, double b_) : a(a_), b(b_) {
    require(is_positive_finite(a) && is_positive_finite(b), "Beta: a, b must be positive");
  }
};

/// Gamma with shape a and rate c.
struct Gamma {
  double a = 1.0;
  double c = 1.0;
  Gamma() = default;
  Gamma(double a_, double c_) : a(a_), c(c_) {
    require(is_positive_finite(a) && is_positive_finite(c), "Gamma: shape and rate must be positive");
  }
};

struct Normal01 {};

struct StudentT {
  double r = 1.0;
  StudentT() = default;
  explicit StudentT(double r_) : r(r_) { require(is_positive_finite(r), "StudentT: r must be positive"); }
};

/// Law of radius * U_1, U uniform on the unit sphere of R^n.
struct SphereCoord {
  std::int64_t n = 2;
  double radius = 1.0;
  SphereCoord() = default;
  SphereCoord(std::int64_t n_, double radius_) : n(n_), radius(radius_) {
    require(n >= 2, "SphereCoord: n must be >= 2");
    require(is_positive_finite(radius), "SphereCoord: radius must be positive");
  }
};

enum class Centering { exact, tilde };

struct NormalMaxScaling {
  double a = 1.0;  // scale a_n = 1 / b_n
  double b = 0.0;  // location b_n
  double log_residual = 0.0;  // residual of b^2 + 2 log b + log(2 pi) - 2 log n
};

/// b_n > 0 with 2 pi b_n^2 exp(b_n^2) = n^2 (exact) or the explicit
/// sqrt(2 log n) - (log log n + log 4 pi) / (2 sqrt(2 log n)) (tilde).
inline NormalMaxScaling normal_max_scaling(std::int64_t n, Centering centering) {
  require(n >= 2, "normal max: n must be >= 2");
  const double log_n = std::log(static_cast<double>(n));
  NormalMaxScaling s;
  if (centering == Centering::tilde) {
    const double root = std::sqrt(2.0 * log_n);
    s.b = root - 0.5 * (std::log(log_n) + std::log(4.0 * std::numbers::pi)) / root;
    require(s.b > 0.0, "normal max: tilde centering is not positive for this n");
    s.a = 1.0 / s.b;
    return s;
  }
  const double target = 2.0 * log_n - std::log(2.0 * std::numbers::pi);
  auto g = [target](double b) { return b * b + 2.0 * std::log(b) - target; };
  // g is increasing on (0, inf); keep a bracket for the bisection fallback.
  double lo = 1e-8, hi = std::max(2.0, std::sqrt(2.0 * log_n) + 2.0);
  double b = std::sqrt(2.0 * log_n);
  for (int it = 0; it < 200; ++it) {
    const double gb = g(b);
    if (gb > 0.0) hi = std::min(hi, b); else lo = std::max(lo, b);
    if (std::fabs(gb) < 1e-15) break;
    double next = b - gb / (2.0 * b + 2.0 / b);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == b) break;
    b = next;
  }
  s.b = b;
  s.a = 1.0 / b;
  s.log_residual = g(b);
  if (!(std::fabs(s.log_residual) < 1e-12)) throw numerical_error("normal max: b_n did not converge");
  return s;
}

/// Law of (max of n standard normals - b_n) / a_n.
struct NormalMax {
  std::int64_t n = 2;
  Centering centering = Centering::exact;
  NormalMaxScaling scaling;
  NormalMax() = default;
  NormalMax(std::int64_t n_, Centering c) : n(n_), centering(c), scaling(normal_max_scaling(n_, c)) {}
};

struct Gumbel {};

using ContinuousFamily = std::variant<Beta, Gamma, Normal01, StudentT, SphereCoord, NormalMax, Gumbel>;

/// log Phi(z), accurate in both tails.
inline double log_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > -35.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - 945/z^10 + ...)
  const double w = 1.0 / (z * z);
  const double series = 1.0 - w * (1.0 - w * (3.0 - w * (15.0 - w * (105.0 - w * 945.0))));
  return -0.5 * z * z - kLogSqrt2Pi - std::log(-z) + std::log(series);
}

inline double log_normal_density(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

inline Interval support(const ContinuousFamily& family) {
  return std::visit(
      [](const auto& f) -> Interval {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Beta>) return {0.0, 1.0};
        else if constexpr (std::is_same_v<T, Gamma>) return {0.0, std::numeric_limits<double>::infinity()};
        else if constexpr (std::is_same_v<T, SphereCoord>) return {-f.radius, f.radius};
        else return {};
      },
      family);
}

/// Normalised log density; -inf outside the support.
inline double log_density(const ContinuousFamily& family, double x) {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Beta>) {
          if (!(x > 0.0 && x < 1.0)) return kNegInf;
          const double tail = f.b == 1.0 ? 0.0 : (f.b - 1.0) * std::log1p(-x);
          const double head = f.a == 1.0 ? 0.0 : (f.a - 1.0) * std::log(x);
          return specfun::log_gamma_ratio(f.a + f.b, f.b) - specfun::log_gamma(f.a).log_gamma + head + tail;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          if (!(x > 0.0)) return kNegInf;
          const double head = f.a == 1.0 ? 0.0 : (f.a - 1.0) * std::log(x);
          return f.a * std::log(f.c) - specfun::log_gamma(f.a).log_gamma + head - f.c * x;
        } else if constexpr (std::is_same_v<T, Normal01>) {
          return log_normal_density(x);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const double r = f.r;
          return specfun::log_gamma_ratio(0.5 * (r + 1.0), 0.5 * r) - 0.5 * (std::log(r) + kLogPi) -
                 0.5 * (r + 1.0) * std::log1p(x * x / r);
        } else if constexpr (std::is_same_v<T, SphereCoord>) {
          const double u = x / f.radius;
          if (!(std::fabs(u) < 1.0)) return kNegInf;
          const double nd = static_cast<double>(f.n);
          const double shape = 0.5 * (nd - 3.0);
          const double body = shape == 0.0 ? 0.0 : shape * std::log1p(-u * u);
          return specfun::log_gamma_ratio(0.5 * nd, 0.5 * (nd - 1.0)) - 0.5 * kLogPi - std::log(f.radius) + body;
        } else if constexpr (std::is_same_v<T, NormalMax>) {
          const double z = f.scaling.a * x + f.scaling.b;
          return std::log(static_cast<double>(f.n)) + std::log(f.scaling.a) + log_normal_density(z) +
                 static_cast<double>(f.n - 1) * log_normal_cdf(z);
        } else {
          if (-x > 709.0) return kNegInf;
          return -x - std::exp(-x);
        }
      },
      family);
}

inline double density(const ContinuousFamily& family, double x) { return std::exp(log_density(family, x)); }

/// f_n(x) for the centred and scaled maximum of n standard normals.
inline double normal_max_density(std::int64_t n, Centering centering, double x) {
  return density(NormalMax(n, centering), x);
}

inline double cdf(const ContinuousFamily& family, double x) {
  const double v = std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Beta>) {
          if (x <= 0.0) return 0.0;
          if (x >= 1.0) return 1.0;
          return boost::math::ibeta(f.a, f.b, x);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          if (x <= 0.0) return 0.0;
          if (!std::isfinite(x)) return 1.0;
          return boost::math::gamma_p(f.a, f.c * x);
        } else if constexpr (std::is_same_v<T, Normal01>) {
          return 0.5 * std::erfc(-x / std::numbers::sqrt2);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
          return boost::math::cdf(boost::math::students_t_distribution<double>(f.r), x);
        } else if constexpr (std::is_same_v<T, SphereCoord>) {
          const double u = x / f.radius;
          if (u <= -1.0) return 0.0;
          if (u >= 1.0) return 1.0;
          const double half = 0.5 * boost::math::ibeta(0.5, 0.5 * (static_cast<double>(f.n) - 1.0), u * u);
          return u < 0.0 ? 0.5 - half : 0.5 + half;
        } else if constexpr (std::is_same_v<T, NormalMax>) {
          const double z = f.scaling.a * x + f.scaling.b;
          return std::exp(static_cast<double>(f.n) * log_normal_cdf(z));
        } else {
          if (-x > 709.0) return 0.0;
          return std::exp(-std::exp(-x));
        }
      },
      family);
  return std::clamp(v, 0.0, 1.0);
}

inline std::string name(const ContinuousFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Beta>) return "Beta(" + std::to_string(f.a) + "," + std::to_string(f.b) + ")";
        else if constexpr (std::is_same_v<T, Gamma>) return "Gamma(" + std::to_string(f.a) + "," + std::to_string(f.c) + ")";
        else if constexpr (std::is_same_v<T, Normal01>) return "N(0,1)";
        else if constexpr (std::is_same_v<T, StudentT>) return "t(" + std::to_string(f.r) + ")";
        else if constexpr (std::is_same_v<T, SphereCoord>) return "SphereCoord(" + std::to_string(f.n) + ")";
        else if constexpr (std::is_same_v<T, NormalMax>) return "NormalMax(" + std::to_string(f.n) + ")";
        else return "Gumbel";
      },
      family);
}

// ---------------------------------------------------------------------------
// Multinomial / Poisson-product masses used by the reduction identity.

/// log Mult(n; p_0, p_1..p_K)({x_1..x_K}) with p_0 = 1 - sum p_i, x_0 = n - sum x_i.
inline double log_multinomial_mass(std::int64_t n, const std::vector<double>& p, const std::vector<std::int64_t>& x) {
  require(p.size() == x.size(), "multinomial: size mismatch");
  double p_plus = 0.0;
  std::int64_t x_plus = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0, "multinomial: p_i must be positive");
    p_plus += p[i];
    if (x[i] < 0) return kNegInf;
    x_plus += x[i];
  }
  require(p_plus < 1.0, "multinomial: sum of p_i must be < 1");
  if (x_plus > n) return kNegInf;
  double acc = specfun::log_gamma(static_cast<double>(n) + 1.0).log_gamma -
               specfun::log_gamma(static_cast<double>(n - x_plus) + 1.0).log_gamma +
               static_cast<double>(n - x_plus) * std::log1p(-p_plus);
  for (std::size_t i = 0; i < p.size(); ++i)
    acc += static_cast<double>(x[i]) * std::log(p[i]) - specfun::log_gamma(static_cast<double>(x[i]) + 1.0).log_gamma;
  return acc;
}

/// log prod_i Poiss(n p_i)({x_i}).
inline double log_poisson_product_mass(std::int64_t n, const std::vector<double>& p, const std::vector<std::int64_t>& x) {
  require(p.size() == x.size(), "poisson product: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += log_poisson_mass(static_cast<double>(n) * p[i], x[i]);
  return acc;
}

}  // namespace ratio_bounds::dist
