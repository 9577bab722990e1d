#pragma once

// Explicit bounds and literature comparators as named, self-validating
// entries. An entry never throws for an inapplicable parameter set; it is
// marked valid = false instead so that sweeps can tabulate applicability.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/ratio.hpp"
#include "ratio_bounds/specfun.hpp"

namespace ratio_bounds::bounds {

enum class Side { upper, lower };

// What an entry bounds.
enum class Quantity {
  log_rho,
  rho,
  tv,
  kl,
  hellinger_sq,
  chi_sq,
  delta,          // the delta parameter itself (compared between scalings, not against exact values)
  lambda_centered // Lambda_n(p) + log(1 - p)/2
};

inline const char* to_string(Side s) { return s == Side::upper ? "upper" : "lower"; }

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::log_rho: return "log_rho";
    case Quantity::rho: return "rho";
    case Quantity::tv: return "tv";
    case Quantity::kl: return "kl";
    case Quantity::hellinger_sq: return "hellinger_sq";
    case Quantity::chi_sq: return "chi_sq";
    case Quantity::delta: return "delta";
    case Quantity::lambda_centered: return "lambda_centered";
  }
  return "?";
}

struct BoundEntry {
  std::string name;
  double value = 0.0;
  Side side = Side::upper;
  Quantity quantity = Quantity::log_rho;
  bool valid = true;
  bool comparator = false;  // literature bound, reported but not asserted
  std::string source;

  // Signed slack, >= 0 when the bound holds for `exact`.
  double slack(double exact) const { return side == Side::upper ? value - exact : exact - value; }
  bool holds(double exact, double tol = 1e-12) const { return !valid || slack(exact) >= -tol; }
};

struct BoundSet {
  std::vector<BoundEntry> entries;

  void add(std::string name, double value, Side side, Quantity q, bool valid, std::string source,
           bool comparator = false) {
    entries.push_back({std::move(name), value, side, q, valid, comparator, std::move(source)});
  }

  const BoundEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }

  const BoundEntry& at(const std::string& name) const {
    if (const auto* e = find(name)) return *e;
    throw std::out_of_range("BoundSet: no entry " + name);
  }

  // Every valid, non-comparator entry for quantity q holds for `exact`.
  bool all_hold(Quantity q, double exact, double tol = 1e-12) const {
    for (const auto& e : entries)
      if (e.quantity == q && !e.comparator && !e.holds(exact, tol)) return false;
    return true;
  }
};

namespace detail {

// [a]_n / [b]_n for integers 0 <= a <= b, n >= 1; zero when a < n.
inline double falling_quotient(std::int64_t a, std::int64_t b, std::int64_t n) {
  if (a < n) return 0.0;
  const auto fa = specfun::log_falling_factorial(static_cast<double>(a), n);
  const auto fb = specfun::log_falling_factorial(static_cast<double>(b), n);
  return std::exp(fa.log_value - fb.log_value);
}

// rho <= (1 - delta)^{-1/2}, TV <= 1 - sqrt(1 - delta) < delta / (2 - delta).
inline void add_delta_family(BoundSet& s, double delta, const std::string& source, bool valid = true) {
  const bool ok = valid && delta >= 0.0 && delta < 1.0;
  s.add("delta", delta, Side::upper, Quantity::delta, ok, source);
  s.add("rho_upper", ok ? 1.0 / std::sqrt(1.0 - delta) : INFINITY, Side::upper, Quantity::rho, ok, source);
  s.add("log_rho_upper", ok ? -0.5 * std::log1p(-delta) : INFINITY, Side::upper, Quantity::log_rho, ok, source);
  s.add("tv_upper_sqrt", ok ? specfun::one_minus_sqrt_complement(delta) : 1.0, Side::upper, Quantity::tv, ok,
        source);
  s.add("tv_upper_simple", ok ? specfun::delta_over_two_minus_delta(delta) : 1.0, Side::upper, Quantity::tv, ok,
        source);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline BoundSet bounds_sampling(std::int64_t N, std::int64_t n) {
  require(N >= 1 && n >= 1 && n <= N, "bounds_sampling: need 1 <= n <= N");
  const double Nd = static_cast<double>(N), nd = static_cast<double>(n);
  const double pairs = nd * (nd - 1.0) / (2.0 * Nd);
  const bool upper_ok = n - 1 < N;
  BoundSet s;
  s.add("log_rho_lower", pairs, Side::lower, Quantity::log_rho, true, "sampling bracket");
  s.add("log_rho_upper", upper_ok ? -0.5 * nd * std::log1p(-(nd - 1.0) / Nd) : INFINITY, Side::upper,
        Quantity::log_rho, upper_ok, "sampling bracket");
  s.add("freedman_tv_lower", -std::expm1(-pairs), Side::lower, Quantity::tv, true, "Freedman (1977)", true);
  s.add("freedman_tv_upper", pairs, Side::upper, Quantity::tv, true, "Freedman (1977)", true);
  // Freedman's bound turned into a log-rho statement, used in the ordering check.
  const bool fr_ok = pairs < 1.0;
  s.add("freedman_log_rho_upper", fr_ok ? -std::log1p(-pairs) : INFINITY, Side::upper, Quantity::log_rho, fr_ok,
        "Freedman (1977)", true);
  return s;
}

inline BoundSet bounds_hyp_bin(std::int64_t N, std::int64_t L, std::int64_t n) {
  require(N >= 1, "bounds_hyp_bin: N must be >= 1");
  require(L >= 0 && L <= N, "bounds_hyp_bin: need 0 <= L <= N");
  require(n >= 1 && n <= N, "bounds_hyp_bin: need 1 <= n <= N");
  const double Nd = static_cast<double>(N), nd = static_cast<double>(n);
  const bool thm_ok = 2 * (n - 1) <= N;
  const double log_rho_a = n == 1 ? 0.0 : -(nd - 1.0) * std::log1p(-1.0 / Nd);
  const double log_rho_b = n == 1 ? 0.0 : -std::log1p(-(nd - 1.0) / Nd);
  // 1 - [L]_n/[N]_n - [N-L]_n/[N]_n, the probability that both colours occur.
  const double mixed = std::max(0.0, 1.0 - detail::falling_quotient(L, N, n) - detail::falling_quotient(N - L, N, n));
  const double tv_a = n == 1 ? 0.0 : mixed * -std::expm1((nd - 1.0) * std::log1p(-1.0 / Nd));
  const double tv_b = mixed * (nd - 1.0) / Nd;

  BoundSet s;
  s.add("log_rho_upper_bernoulli", log_rho_a, Side::upper, Quantity::log_rho, thm_ok, "hypergeometric bound");
  s.add("log_rho_upper_simple", log_rho_b, Side::upper, Quantity::log_rho, thm_ok, "hypergeometric bound");
  s.add("rho_upper_bernoulli", std::exp(log_rho_a), Side::upper, Quantity::rho, thm_ok, "hypergeometric bound");
  s.add("rho_upper_simple", std::exp(log_rho_b), Side::upper, Quantity::rho, thm_ok, "hypergeometric bound");
  s.add("tv_upper_bernoulli", tv_a, Side::upper, Quantity::tv, thm_ok, "hypergeometric bound");
  s.add("tv_upper_simple", tv_b, Side::upper, Quantity::tv, thm_ok, "hypergeometric bound");

  s.add("diaconis_freedman", 2.0 * nd / Nd, Side::upper, Quantity::tv, true, "Diaconis and Freedman (1980)", true);
  const bool ehm_ok = n <= std::min(L, N - L);
  double ehm = 1.0;
  if (N > 1) {
    const double p = static_cast<double>(L) / Nd;
    ehm = nd / (nd + 1.0) * (1.0 - std::pow(p, nd + 1.0) - std::pow(1.0 - p, nd + 1.0)) * (nd - 1.0) / (Nd - 1.0);
  }
  s.add("ehm", ehm, Side::upper, Quantity::tv, ehm_ok && N > 1, "Ehm (1991)", true);
  s.add("holmes", N > 1 ? (nd - 1.0) / (Nd - 1.0) : 0.0, Side::upper, Quantity::tv, N > 1, "Holmes (2004)", true);
  return s;
}

inline BoundSet bounds_bin_poiss(std::int64_t n, double p) {
  require(n >= 1, "bounds_bin_poiss: n must be >= 1");
  require(p >= 0.0 && p < 1.0, "bounds_bin_poiss: p must lie in [0, 1)");
  const double nd = static_cast<double>(n);
  const std::int64_t k = ratio::ceil_np(n, p);
  const double kd = static_cast<double>(k);
  const double frac = kd / nd;

  BoundSet s;
  s.add("log_rho_upper_p", -std::log1p(-p), Side::upper, Quantity::log_rho, true, "binomial-Poisson bound");
  const bool k_ok = k < n;
  s.add("log_rho_upper_k", k_ok ? -0.5 * std::log1p(-frac) : INFINITY, Side::upper, Quantity::log_rho, k_ok,
        "binomial-Poisson bound");

  // Two-sided refinement of Lambda_n(p) + log(1 - p)/2 in terms of k = ceil(np).
  const double common = -(kd - 1.0) / (12.0 * nd * (nd - kd + 1.0));
  const bool eq12_ok = k >= 1;
  s.add("eq12_upper", common + 1.0 / (8.0 * (nd - kd) + 6.0), Side::upper, Quantity::lambda_centered, eq12_ok,
        "binomial-Poisson refinement");
  const bool lower_ok = eq12_ok && k < n;
  s.add("eq12_lower", lower_ok ? common - 1.0 / (12.0 * (nd - kd) * (nd - kd + 1.0)) : -INFINITY, Side::lower,
        Quantity::lambda_centered, lower_ok, "binomial-Poisson refinement");

  // Q({g > f}) <= 1 - (1 - p)^n since k = 0 never has g > f.
  const double mass = -std::expm1(nd * std::log1p(-p));
  s.add("tv_upper_p", mass * p, Side::upper, Quantity::tv, true, "binomial-Poisson bound");
  s.add("tv_upper_k", k_ok ? mass * specfun::one_minus_sqrt_complement(frac) : mass, Side::upper, Quantity::tv,
        k_ok, "binomial-Poisson bound");
  s.add("tv_upper_k_simple", k_ok ? mass * specfun::delta_over_two_minus_delta(frac) : mass, Side::upper,
        Quantity::tv, k_ok, "binomial-Poisson bound");

  s.add("hodges_le_cam", nd * -std::expm1(-p), Side::upper, Quantity::tv, true, "Hodges and Le Cam (1960)", true);
  s.add("hodges_le_cam_simple", nd * p * p, Side::upper, Quantity::tv, true, "Hodges and Le Cam (1960)", true);
  s.add("reiss", p, Side::upper, Quantity::tv, true, "Reiss (1993)", true);
  s.add("barbour_hall", -std::expm1(-nd * p) * p, Side::upper, Quantity::tv, true, "Barbour and Hall (1984)", true);
  return s;
}

enum class RateChoice { canonical, optimal };

inline double gamma_rate(double a, double b, RateChoice choice) {
  return choice == RateChoice::canonical ? a + b : a + b - 1.0;
}

inline BoundSet bounds_beta_gamma(double a, double b, RateChoice choice) {
  require(is_positive_finite(a), "bounds_beta_gamma: a must be positive");
  require(std::isfinite(b) && b > 1.0, "bounds_beta_gamma: b must exceed 1");
  const double delta = choice == RateChoice::canonical ? (a + 1.0) / (a + b) : a / (a + b - 1.0);
  BoundSet s;
  detail::add_delta_family(s, delta, "beta-gamma bound");
  const bool a1_ok = a == 1.0 && b >= 2.0 && choice == RateChoice::optimal;
  s.add("a1_log_rho_upper", 1.0 / (2.0 * b) + 1.0 / (4.0 * b * b), Side::upper, Quantity::log_rho, a1_ok,
        "beta-gamma bound, a = 1");
  return s;
}

enum class Scaling { sqrt_n, sqrt_n_minus_2 };

inline BoundSet bounds_levy_poincare(std::int64_t n, std::int64_t k, Scaling scaling) {
  require(k >= 1 && n > k + 2, "bounds_levy_poincare: need 1 <= k and n > k + 2");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double delta = scaling == Scaling::sqrt_n ? (kd + 2.0) / nd : kd / (nd - 2.0);
  BoundSet s;
  detail::add_delta_family(s, delta, "sphere projection bound");
  const bool df_ok = k <= n - 4;
  s.add("diaconis_freedman", df_ok ? (kd + 3.0) / (nd - kd - 3.0) : INFINITY, Side::upper, Quantity::tv, df_ok,
        "Diaconis and Freedman (1987)", true);
  return s;
}

/// The Dirichlet case reduces to Beta(a_+^(k), a_+ - a_+^(k)) against
/// Gamma(a_+^(k), c) with c = a_+ (canonical) or a_+ - 1 (optimal).
inline BoundSet bounds_dirichlet(const std::vector<double>& a, std::int64_t k, RateChoice choice) {
  require(!a.empty(), "bounds_dirichlet: empty parameter list");
  require(k >= 1 && k <= static_cast<std::int64_t>(a.size()), "bounds_dirichlet: need 1 <= k <= N");
  double a_plus = 0.0, a_k = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(is_positive_finite(a[i]), "bounds_dirichlet: a_i must be positive");
    a_plus += a[i];
    if (static_cast<std::int64_t>(i) < k) a_k += a[i];
  }
  const double b = a_plus - a_k;
  if (b > 1.0) return bounds_beta_gamma(a_k, b, choice);
  const double delta = choice == RateChoice::canonical ? (a_k + 1.0) / a_plus : a_k / (a_plus - 1.0);
  BoundSet s;
  detail::add_delta_family(s, delta, "Dirichlet bound", false);
  return s;
}

inline BoundSet bounds_spacings(std::int64_t n, std::int64_t k) {
  require(k >= 1 && k < n, "bounds_spacings: need 1 <= k < n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  BoundSet s;
  detail::add_delta_family(s, kd / nd, "spacings bound");
  const double k1 = 1.0 / (2.0 * nd) + 1.0 / (4.0 * nd * nd);
  s.add("log_rho_upper_k1", k1, Side::upper, Quantity::log_rho, k == 1, "spacings bound, k = 1");
  s.add("tv_upper_k1", k1, Side::upper, Quantity::tv, k == 1, "spacings bound, k = 1");
  const double e2 = std::exp(-2.0);
  s.add("hall_wellner", 2.0 * e2 / nd + e2 / (nd * nd), Side::upper, Quantity::tv, k == 1,
        "Hall and Wellner (1979)", true);
  return s;
}

/// 0.5 * sqrt((7 + 5 sqrt 2) / (pi e^{1 + sqrt 2})).
inline double pinelis_constant() {
  const double s2 = std::numbers::sqrt2;
  return 0.5 * std::sqrt((7.0 + 5.0 * s2) / (std::numbers::pi * std::exp(1.0 + s2)));
}

inline BoundSet bounds_student(double r) {
  require(is_positive_finite(r), "bounds_student: r must be positive");
  const bool ok = r >= 2.0;
  BoundSet s;
  s.add("log_rho_lower", 1.0 / (2.0 * (r + 1.0)), Side::lower, Quantity::log_rho, ok, "normal-Student bound");
  s.add("log_rho_upper", 1.0 / (2.0 * r), Side::upper, Quantity::log_rho, ok, "normal-Student bound");
  s.add("tv_upper", 0.5 / r, Side::upper, Quantity::tv, ok, "normal-Student bound");
  s.add("pinelis", pinelis_constant() / r, Side::upper, Quantity::tv, r >= 4.0, "Pinelis (2015)", true);
  return s;
}

/// TV <= m (1 - 1/rho), KL <= m log rho, H^2 <= 1 - rho^{-1/2},
/// chi^2 <= rho - 1, with m = Q({g > f}) (1 when unknown).
inline BoundSet divergence_bounds_from_rho(double rho, std::optional<double> q_mass_g_gt_f = std::nullopt) {
  require(rho >= 1.0, "divergence_bounds_from_rho: rho must be >= 1");
  const double m = q_mass_g_gt_f.value_or(1.0);
  require(m >= 0.0 && m <= 1.0, "divergence_bounds_from_rho: mass must lie in [0, 1]");
  const bool finite = std::isfinite(rho);
  BoundSet s;
  s.add("tv_upper", finite ? m * (1.0 - 1.0 / rho) : m, Side::upper, Quantity::tv, true, "ratio transfer");
  s.add("kl_upper", m * std::log(rho), Side::upper, Quantity::kl, true, "ratio transfer");
  s.add("hellinger_sq_upper", finite ? 1.0 - 1.0 / std::sqrt(rho) : 1.0, Side::upper, Quantity::hellinger_sq, true,
        "ratio transfer");
  s.add("chi_sq_upper", rho - 1.0, Side::upper, Quantity::chi_sq, true, "ratio transfer");
  return s;
}

}  // namespace ratio_bounds::bounds
