#pragma once

// The maximal density ratio rho(Q, P) = ess sup q/p, carried as log rho.
//
// Closed forms are provided for every pair with a known worst-case point;
// rho_discrete_exhaustive() and rho_continuous_search() are the brute-force
// oracles they are checked against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/distributions.hpp"
#include "ratio_bounds/specfun.hpp"

namespace ratio_bounds::ratio {

enum class Method { closed_form, exhaustive, continuous_search };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::exhaustive: return "exhaustive";
    case Method::continuous_search: return "continuous_search";
  }
  return "?";
}

struct RatioReport {
  ExtendedReal log_rho;
  std::optional<double> argmax;  // empty when the maximiser is a set, see argmax_note
  std::string argmax_note;
  Method method = Method::closed_form;
  double mixture_index = 0.0;     // 1 - 1/rho

  double rho() const { return std::exp(log_rho.as_double()); }
};

inline RatioReport make_report(double log_rho, std::optional<double> argmax, Method method,
                               std::string note = {}) {
  RatioReport r;
  // Tiny negative values from rounding are clamped; rho >= 1 always.
  r.log_rho = ExtendedReal(std::max(0.0, log_rho));
  r.argmax = argmax;
  r.argmax_note = std::move(note);
  r.method = method;
  r.mixture_index = -std::expm1(-r.log_rho.value());
  return r;
}

inline RatioReport make_infinite_report(std::optional<double> where, Method method, std::string note = {}) {
  RatioReport r;
  r.log_rho = ExtendedReal::infinity();
  r.argmax = where;
  r.argmax_note = std::move(note);
  r.method = method;
  r.mixture_index = 1.0;
  return r;
}

// ---------------------------------------------------------------------------
// Sampling with vs without replacement: rho = N^n / [N]_n.

inline RatioReport rho_sampling(std::int64_t N, std::int64_t n) {
  require(N >= 1 && n >= 1 && n <= N, "rho_sampling: need 1 <= n <= N");
  const double log_rho = -specfun::log_falling_ratio(static_cast<double>(N), n);
  return make_report(log_rho, std::nullopt, Method::closed_form, "any sample with distinct components");
}

/// d_TV = 1 - [N]_n / N^n.
inline double sampling_tv(std::int64_t N, std::int64_t n) {
  require(N >= 1 && n >= 1 && n <= N, "sampling_tv: need 1 <= n <= N");
  return -std::expm1(specfun::log_falling_ratio(static_cast<double>(N), n));
}

// ---------------------------------------------------------------------------
// Hypergeometric vs binomial.

/// log r(k) = log h(k) - log b(k) for Hyp(N, L, n) against Bin(n, L/N).
inline double log_hyp_bin_ratio(std::int64_t N, std::int64_t L, std::int64_t n, std::int64_t k) {
  if (L == 0 || L == N) return (k == (L == 0 ? 0 : n)) ? 0.0 : kNegInf;
  if (k < 0 || k > n) return kNegInf;
  const double a = specfun::log_falling_ratio(static_cast<double>(L), k);
  const double b = specfun::log_falling_ratio(static_cast<double>(N - L), n - k);
  if (a == kNegInf || b == kNegInf) return kNegInf;
  return a + b - specfun::log_falling_ratio(static_cast<double>(N), n);
}

/// Worst-case index ceil((n-1) L / N) for L <= N/2, clamped into the
/// support of Hyp(N, L, n); the mirror r_{N,N-L,n}(n-k) = r_{N,L,n}(k)
/// handles L > N/2.
inline std::int64_t hyp_bin_argmax(std::int64_t N, std::int64_t L, std::int64_t n) {
  if (L == 0) return 0;
  if (L == N) return n;
  if (2 * L > N) return n - hyp_bin_argmax(N, N - L, n);
  std::int64_t k = ((n - 1) * L + N - 1) / N;
  const std::int64_t lo = std::max<std::int64_t>(0, n - (N - L));
  const std::int64_t hi = std::min(n, L);
  return std::clamp(k, lo, hi);
}

inline RatioReport rho_hyp_bin(std::int64_t N, std::int64_t L, std::int64_t n) {
  require(N >= 1, "rho_hyp_bin: N must be >= 1");
  require(L >= 0 && L <= N, "rho_hyp_bin: need 0 <= L <= N");
  require(n >= 1 && n <= N, "rho_hyp_bin: need 1 <= n <= N");
  if (L == 0 || L == N || n == 1) {
    const double where = L == N ? static_cast<double>(n) : 0.0;
    return make_report(0.0, n == 1 ? std::nullopt : std::optional<double>(where), Method::closed_form,
                       "identical laws");
  }
  const std::int64_t k = hyp_bin_argmax(N, L, n);
  return make_report(log_hyp_bin_ratio(N, L, n, k), static_cast<double>(k), Method::closed_form);
}

// ---------------------------------------------------------------------------
// Binomial vs Poisson.

/// lambda_{n,p}(k) = log([n]_k / n^k) + n p + (n - k) log(1 - p), written
/// through the saddle-point forms of both masses so that no large terms
/// cancel:
///   R(n) - R(n-k) - bd0(n-k, n(1-p)) + log(n / (n-k)) / 2.
inline double log_bin_poiss_ratio(std::int64_t n, double p, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  const double nd = static_cast<double>(n);
  if (k == n) return 0.5 * std::log(2.0 * std::numbers::pi * nd) - nd + specfun::binet_remainder(nd) + nd * p;
  const double m = nd - static_cast<double>(k);
  return specfun::binet_remainder(nd) - specfun::binet_remainder(m) - dist::detail::bd0(m, nd * (1.0 - p)) +
         0.5 * std::log(nd / m);
}

/// ceil(n p). Products within a few ulps of an integer are snapped to it,
/// so a decimal p such as 0.2 with n = 40 gives k = 8; exact integer
/// products resolve ties to the smaller index.
inline std::int64_t ceil_np(std::int64_t n, double p) {
  const double np = static_cast<double>(n) * p;
  const double nearest = std::round(np);
  if (std::fabs(np - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, np))
    return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(np));
}

/// Lambda_n(p) = log rho(Bin(n, p), Poiss(n p)), attained at k = ceil(n p).
inline RatioReport lambda_bin_poiss(std::int64_t n, double p) {
  require(n >= 1, "lambda_bin_poiss: n must be >= 1");
  require(p >= 0.0 && p < 1.0, "lambda_bin_poiss: p must lie in [0, 1)");
  if (p == 0.0) return make_report(0.0, 0.0, Method::closed_form);
  const std::int64_t k = ceil_np(n, p);
  return make_report(log_bin_poiss_ratio(n, p, k), static_cast<double>(k), Method::closed_form);
}

struct CapitalLambdaScan {
  double value = 0.0;              // max over n <= 1/(1-p)
  std::int64_t argmax_n = 1;
  double extended_value = 0.0;     // max over n <= 4/(1-p)
  std::int64_t extended_argmax_n = 1;
  bool moved = false;              // extended scan found a strictly larger value
};

inline CapitalLambdaScan capital_lambda_scan(double p) {
  require(p > 0.0 && p < 1.0, "capital_lambda: p must lie in (0, 1)");
  CapitalLambdaScan s;
  const auto n_max = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / (1.0 - p))));
  const auto n_ext = std::max<std::int64_t>(n_max, static_cast<std::int64_t>(std::floor(4.0 / (1.0 - p))));
  s.value = kNegInf;
  for (std::int64_t n = 1; n <= n_ext; ++n) {
    const double v = lambda_bin_poiss(n, p).log_rho.value();
    if (n <= n_max && v > s.value) {
      s.value = v;
      s.argmax_n = n;
    }
    if (n == 1 || v > s.extended_value) {
      s.extended_value = v;
      s.extended_argmax_n = n;
    }
  }
  s.moved = s.extended_value > s.value * (1.0 + 1e-14) + 1e-300;
  return s;
}

/// Lambda(p): worst case of Lambda_n(p) over 1 <= n <= 1/(1 - p).
inline double capital_lambda(double p) { return capital_lambda_scan(p).value; }

/// Multinomial vs Poisson product: same ratio as Bin(n, p_+) vs Poiss(n p_+).
inline RatioReport rho_multinomial_poisson(std::int64_t n, const std::vector<double>& p) {
  double p_plus = 0.0;
  for (double pi : p) {
    require(pi > 0.0, "rho_multinomial_poisson: p_i must be positive");
    p_plus += pi;
  }
  return lambda_bin_poiss(n, p_plus);
}

/// Empirical process restricted to A_o vs its Poissonisation, P(A_o) = p_o.
inline RatioReport rho_poissonization(std::int64_t n, double p_o) {
  require(p_o > 0.0 && p_o < 1.0, "rho_poissonization: p_o must lie in (0, 1)");
  return lambda_bin_poiss(n, p_o);
}

/// Envelope (1 - max p_i)^{-1} for a Poisson-binomial law against
/// Poiss(sum p_i). A bound, not the exact ratio.
inline double rho_poisson_binomial_bound(const std::vector<double>& p) {
  require(!p.empty(), "rho_poisson_binomial_bound: empty list");
  double p_star = 0.0;
  for (double pi : p) {
    require(pi > 0.0 && pi < 1.0, "rho_poisson_binomial_bound: p_i must lie in (0, 1)");
    p_star = std::max(p_star, pi);
  }
  return 1.0 / (1.0 - p_star);
}

// ---------------------------------------------------------------------------
// Beta vs gamma with common shape.

inline RatioReport rho_beta_gamma(double a, double b, double c) {
  require(is_positive_finite(a), "rho_beta_gamma: a must be positive");
  require(std::isfinite(b) && b >= 1.0, "rho_beta_gamma: b must be >= 1");
  require(is_positive_finite(c), "rho_beta_gamma: c must be positive");
  const double log_gamma_ratio = specfun::log_gamma_ratio(a + b, b);
  if (c <= b - 1.0) return make_report(log_gamma_ratio - a * std::log(c), 0.0, Method::closed_form);
  // -(a+b-1) log c + (b-1) log(b-1) + c - b + 1 rewritten with u = c - (b - 1).
  const double u = c - (b - 1.0);
  const double tail = b == 1.0 ? u : u - (b - 1.0) * std::log1p(u / (b - 1.0));
  return make_report(log_gamma_ratio - a * std::log(c) + tail, u / c, Method::closed_form);
}

/// Rate c = a + b - 1 that minimises rho(Beta(a, b), Gamma(a, c)).
inline double optimal_gamma_rate(double a, double b) { return a + b - 1.0; }

// ---------------------------------------------------------------------------
// Standard normal vs Student t.

inline RatioReport rho_normal_student(double r) {
  require(is_positive_finite(r), "rho_normal_student: r must be positive");
  const double log_rho = -specfun::half_step_increment(0.5 * r) - 0.5 + 0.5 * (r + 1.0) * std::log1p(1.0 / r);
  return make_report(log_rho, 1.0, Method::closed_form, "x = +-1");
}

// ---------------------------------------------------------------------------
// Oracles.

/// Max of log q(k) - log p(k) over the union of the effective supports.
inline RatioReport rho_discrete_exhaustive(const dist::DiscreteFamily& Q, const dist::DiscreteFamily& P) {
  const std::int64_t end = std::max(dist::effective_support_end(Q), dist::effective_support_end(P));
  double best = kNegInf;
  std::int64_t best_k = 0;
  for (std::int64_t k = 0; k <= end; ++k) {
    const double lq = dist::log_mass(Q, k);
    if (lq == kNegInf) continue;
    const double lp = dist::log_mass(P, k);
    if (lp == kNegInf) return make_infinite_report(static_cast<double>(k), Method::exhaustive, "Q not << P");
    const double v = lq - lp;
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  return make_report(best, static_cast<double>(best_k), Method::exhaustive);
}

/// Bijection between t in (0, 1) and a (possibly unbounded) interval.
class IntervalMap {
 public:
  explicit IntervalMap(dist::Interval iv) : iv_(iv) {}

  double to_x(double t) const {
    const bool lo_inf = std::isinf(iv_.lo), hi_inf = std::isinf(iv_.hi);
    if (!lo_inf && !hi_inf) return iv_.lo + (iv_.hi - iv_.lo) * t;
    if (!lo_inf) return iv_.lo + t / (1.0 - t);
    if (!hi_inf) return iv_.hi - (1.0 - t) / t;
    return (t - 0.5) / (t * (1.0 - t));
  }

  // dx/dt
  double jacobian(double t) const {
    const bool lo_inf = std::isinf(iv_.lo), hi_inf = std::isinf(iv_.hi);
    if (!lo_inf && !hi_inf) return iv_.hi - iv_.lo;
    if (!lo_inf) return 1.0 / ((1.0 - t) * (1.0 - t));
    if (!hi_inf) return 1.0 / (t * t);
    const double d = t * (1.0 - t);
    return 0.5 * (t * t + (1.0 - t) * (1.0 - t)) / (d * d);
  }

  const dist::Interval& interval() const { return iv_; }

 private:
  dist::Interval iv_;
};

struct SearchOptions {
  int grid_points = 20000;
  int boundary_steps = 52;
};

namespace detail {

// Golden-section maximisation of f on [lo, hi].
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double invphi = 0.6180339887498948482;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace detail

/// Dense-grid scan (in a compactified coordinate) refined by golden-section
/// search around the best cell, plus a probe of both boundaries.
///
/// Reports the infinity sentinel when q > 0 = p somewhere, or when the
/// log-ratio keeps growing without levelling off towards a boundary.
inline RatioReport rho_continuous_search(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P,
                                         std::optional<dist::Interval> domain = std::nullopt,
                                         SearchOptions opts = {}) {
  const IntervalMap map(domain.value_or(dist::support(Q)));
  bool infinite = false;
  double infinite_at = 0.0;
  auto f = [&](double t) -> double {
    const double x = map.to_x(t);
    const double lq = dist::log_density(Q, x);
    if (lq == kNegInf || std::isnan(lq)) return kNegInf;
    const double lp = dist::log_density(P, x);
    if (lp == kNegInf || std::isnan(lp) || lq - lp == std::numeric_limits<double>::infinity()) {
      if (!infinite) infinite_at = x;
      infinite = true;
      return std::numeric_limits<double>::infinity();
    }
    return lq - lp;
  };

  const int m = opts.grid_points;
  double best = kNegInf, best_t = 0.5;
  int best_i = -1;
  for (int i = 0; i < m; ++i) {
    const double t = (i + 0.5) / m;
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
      best_i = i;
    }
  }
  if (infinite) return make_infinite_report(infinite_at, Method::continuous_search, "q > 0 where p = 0");
  if (best_i < 0) throw numerical_error("rho_continuous_search: Q has no mass on the domain");

  const double lo = std::max(0.0, (best_i - 0.5) / m), hi = std::min(1.0, (best_i + 1.5) / m);
  auto refined = detail::golden_max(f, std::max(lo, 1e-300), std::min(hi, 1.0 - 1e-16));
  if (refined.second > best) {
    best = refined.second;
    best_t = refined.first;
  }

  // Boundary probes t = 2^-j and 1 - 2^-j.
  for (int side = 0; side < 2; ++side) {
    std::vector<double> vals;
    vals.reserve(opts.boundary_steps);
    double last_t = 0.0;
    for (int j = 1; j <= opts.boundary_steps; ++j) {
      const double h = std::ldexp(1.0, -j);
      const double t = side == 0 ? h : 1.0 - h;
      if (t <= 0.0 || t >= 1.0) break;
      vals.push_back(f(t));
      last_t = t;
    }
    if (infinite) return make_infinite_report(infinite_at, Method::continuous_search, "q > 0 where p = 0");
    const std::size_t len = vals.size();
    if (len >= 12) {
      bool increasing = true;
      for (std::size_t i = len - 10; i < len; ++i) increasing = increasing && vals[i] > vals[i - 1];
      if (increasing && vals[len - 1] - vals[len - 11] > 1.0 && vals[len - 1] > best)
        return make_infinite_report(map.to_x(last_t), Method::continuous_search, "ratio diverges at boundary");
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (vals[i] > best) {
        best = vals[i];
        const double h = std::ldexp(1.0, -static_cast<int>(i + 1));
        best_t = side == 0 ? h : 1.0 - h;
      }
    }
  }
  return make_report(best, map.to_x(best_t), Method::continuous_search);
}

}  // namespace ratio_bounds::ratio
