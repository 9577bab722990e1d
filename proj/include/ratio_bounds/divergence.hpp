#pragma once

// Total variation, Kullback-Leibler, squared Hellinger and Pearson chi^2
// between two laws on the line (or on N_0).
//
// Discrete pairs are summed exhaustively with the Poisson tail added in
// closed form. Continuous pairs are split at the support endpoints and at
// the sign changes of log q - log p, then integrated panel by panel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/distributions.hpp"
#include "ratio_bounds/quadrature.hpp"
#include "ratio_bounds/ratio.hpp"

namespace ratio_bounds::divergence {

struct DivergenceSet {
  double tv = 0.0;             // sum / integral of (q - p)_+
  double tv_reverse = 0.0;     // sum / integral of (p - q)_+, self-check
  double tv_scheffe = 0.0;     // 1 - sum / integral of min(q, p)
  ExtendedReal kl;             // KL(Q || P)
  double hellinger_sq = 0.0;   // 1/2 int (sqrt q - sqrt p)^2
  ExtendedReal chi_sq;         // int (q/p - 1)^2 dP
  double abs_error = 0.0;      // estimated numerical error of the TV-type values
  double q_mass_g_gt_f = 0.0;  // Q({q > p})
  double q_total = 1.0;        // normalisation checks
  double p_total = 1.0;
  bool kl_chi_computed = true;
};

// ---------------------------------------------------------------------------
// Discrete.

inline DivergenceSet divergences_discrete(const dist::DiscreteFamily& Q, const dist::DiscreteFamily& P) {
  using quadrature::detail::Sum;
  const std::int64_t end = std::max(dist::effective_support_end(Q), dist::effective_support_end(P));
  Sum pos, neg, mn, hel, kl, chi, mass, qt, pt;
  bool kl_inf = false;
  for (std::int64_t k = 0; k <= end; ++k) {
    const double lq = dist::log_mass(Q, k), lp = dist::log_mass(P, k);
    if (lq == kNegInf && lp == kNegInf) continue;
    const double q = std::exp(lq), p = std::exp(lp);
    qt.add(q);
    pt.add(p);
    if (q > p) {
      pos.add(q - p);
      mass.add(q);
    } else {
      neg.add(p - q);
    }
    mn.add(std::min(q, p));
    const double d = std::sqrt(q) - std::sqrt(p);
    hel.add(0.5 * d * d);
    if (lq == kNegInf) {
      chi.add(p);
      continue;
    }
    if (lp == kNegInf) {
      kl_inf = true;
      continue;
    }
    kl.add(q * (lq - lp));
    const double e = std::expm1(lq - lp);
    chi.add(p * e * e);
  }
  // Mass left beyond the scanned range (only Poisson has unbounded support).
  const auto tail = [end](const dist::DiscreteFamily& f) {
    if (const auto* pois = std::get_if<dist::Poisson>(&f)) return dist::poisson_upper_tail(pois->lambda, end);
    return 0.0;
  };
  const double tq = tail(Q), tp = tail(P);
  const bool q_finite = dist::support_end(Q).has_value();
  DivergenceSet out;
  if (q_finite) {
    // q vanishes beyond `end`: the whole P tail is (p - q)_+.
    neg.add(tp);
    hel.add(0.5 * tp);
    chi.add(tp);
  } else {
    pos.add(std::max(0.0, tq - tp));
    neg.add(std::max(0.0, tp - tq));
  }
  out.tv = std::clamp(pos.value(), 0.0, 1.0);
  out.tv_reverse = std::clamp(neg.value(), 0.0, 1.0);
  out.tv_scheffe = std::clamp(1.0 - mn.value() - std::min(tq, tp), 0.0, 1.0);
  out.hellinger_sq = std::clamp(hel.value(), 0.0, 1.0);
  out.q_mass_g_gt_f = std::clamp(mass.value(), 0.0, 1.0);
  out.q_total = qt.value() + tq;
  out.p_total = pt.value() + tp;
  // Rounding of the compensated sums is relative to the total mass; an
  // unbounded pair also leaves the split of the residual tails unknown.
  out.abs_error = 32.0 * std::numeric_limits<double>::epsilon() * (out.q_total + out.p_total) +
                  (q_finite ? 0.0 : std::min(tq, tp));
  if (kl_inf) {
    out.kl = ExtendedReal::infinity();
    out.chi_sq = ExtendedReal::infinity();
  } else {
    out.kl = ExtendedReal(std::max(0.0, kl.value()));
    out.chi_sq = ExtendedReal(std::max(0.0, chi.value()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Continuous.

struct ContinuousOptions {
  double tolerance = 1e-10;
  bool include_kl_chi = true;
  int crossing_grid = 4000;
  int panel_budget = quadrature::kDefaultPanelBudget;
  int kl_chi_panel_budget = 20000;
};

namespace detail {

// Segment [lo, hi] with possibly infinite ends mapped onto a finite
// parameter interval.
struct Segment {
  double lo, hi;

  double t_lo() const { return std::isinf(lo) && std::isinf(hi) ? -1.0 : 0.0; }
  double t_hi() const { return 1.0; }

  // x(t) and dx/dt.
  std::pair<double, double> map(double t) const {
    const bool li = std::isinf(lo), hi_inf = std::isinf(hi);
    if (!li && !hi_inf) return {lo + (hi - lo) * t, hi - lo};
    if (!li) return {lo + t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t))};
    if (!hi_inf) return {hi - (1.0 - t) / t, 1.0 / (t * t)};
    const double d = 1.0 - t * t;
    return {t / d, (1.0 + t * t) / (d * d)};
  }
};

inline std::vector<double> support_breaks(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P) {
  const auto sq = dist::support(Q), sp = dist::support(P);
  std::vector<double> pts = {std::min(sq.lo, sp.lo), std::max(sq.hi, sp.hi)};
  for (double v : {sq.lo, sq.hi, sp.lo, sp.hi})
    if (std::isfinite(v)) pts.push_back(v);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Sign of log q - log p; 0 when undecidable (both zero or NaN).
inline int log_ratio_sign(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P, double x) {
  const double lq = dist::log_density(Q, x), lp = dist::log_density(P, x);
  if (lq == kNegInf && lp == kNegInf) return 0;
  const double d = lq - lp;
  if (std::isnan(d)) return 0;
  return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
}

// Sign changes of log q - log p inside `seg`, located by grid scan and bisection.
inline std::vector<double> find_crossings(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P,
                                          const Segment& seg, int grid) {
  std::vector<double> out;
  const double t0 = seg.t_lo(), t1 = seg.t_hi();
  double prev_t = 0.0;
  int prev_s = 0;
  for (int i = 0; i < grid; ++i) {
    const double t = t0 + (t1 - t0) * (i + 0.5) / grid;
    const int s = log_ratio_sign(Q, P, seg.map(t).first);
    if (s == 0) continue;
    if (prev_s != 0 && s != prev_s) {
      double a = prev_t, b = t;
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const int sm = log_ratio_sign(Q, P, seg.map(m).first);
        if (sm == prev_s) a = m;
        else b = m;
      }
      const double x = seg.map(0.5 * (a + b)).first;
      if (!std::isfinite(x)) throw numerical_error("divergence: crossing could not be isolated");
      out.push_back(x);
    }
    prev_s = s;
    prev_t = t;
  }
  return out;
}

}  // namespace detail

inline DivergenceSet divergences_continuous(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P,
                                            ContinuousOptions opts = {}) {
  require(opts.tolerance >= 1e-12, "divergences_continuous: tolerance must be >= 1e-12");
  const auto hull = detail::support_breaks(Q, P);
  std::vector<double> pts;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    pts.push_back(hull[i]);
    const auto cr = detail::find_crossings(Q, P, {hull[i], hull[i + 1]}, opts.crossing_grid);
    pts.insert(pts.end(), cr.begin(), cr.end());
  }
  pts.push_back(hull.back());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 2 && std::isinf(pts[0]) && std::isinf(pts[1])) pts.insert(pts.begin() + 1, 0.0);

  const std::size_t nseg = pts.size() - 1;
  const double seg_tol = opts.tolerance / static_cast<double>(nseg);

  using quadrature::detail::Sum;
  // 0 q, 1 p, 2 (q-p)+, 3 (p-q)+, 4 min, 5 hellinger, 6 q 1{q>p}
  std::array<Sum, 7> acc{};
  Sum kl_acc, chi_acc;
  double err = 0.0;
  bool kl_inf = false, chi_inf = false;

  for (std::size_t s = 0; s < nseg; ++s) {
    const detail::Segment seg{pts[s], pts[s + 1]};
    auto f = [&](double t) {
      std::array<double, 7> v{};
      const auto [x, jac] = seg.map(t);
      if (!std::isfinite(x) || !std::isfinite(jac)) return v;
      const double lq = dist::log_density(Q, x), lp = dist::log_density(P, x);
      const double q = std::exp(lq) * jac, p = std::exp(lp) * jac;
      if (!std::isfinite(q) || !std::isfinite(p)) return v;
      v[0] = q;
      v[1] = p;
      v[2] = q > p ? q - p : 0.0;
      v[3] = p > q ? p - q : 0.0;
      v[4] = std::min(q, p);
      const double d = std::sqrt(q) - std::sqrt(p);
      v[5] = 0.5 * d * d;
      v[6] = q > p ? q : 0.0;
      return v;
    };
    const std::array<double, 7> w = {0.25, 0.25, 1.0, 1.0, 1.0, 1.0, 0.25};
    const auto r = quadrature::integrate<7>(f, seg.t_lo(), seg.t_hi(), seg_tol, w, opts.panel_budget);
    if (!r.converged) throw numerical_error("divergences_continuous: panel budget exhausted");
    for (std::size_t j = 0; j < 7; ++j) acc[j].add(r.value[j]);
    err += r.abs_error[2] + r.abs_error[3];

    if (!opts.include_kl_chi) continue;
    // Where q > 0 = p on a whole segment, KL and chi^2 are infinite.
    const double mid = seg.map(0.5 * (seg.t_lo() + seg.t_hi())).first;
    const double lq_mid = dist::log_density(Q, mid), lp_mid = dist::log_density(P, mid);
    if (lq_mid != kNegInf && lp_mid == kNegInf) {
      kl_inf = chi_inf = true;
      continue;
    }
    if (lq_mid == kNegInf && lp_mid == kNegInf) continue;
    auto g = [&](double t) {
      std::array<double, 2> v{};
      const auto [x, jac] = seg.map(t);
      if (!std::isfinite(x) || !std::isfinite(jac)) return v;
      const double lq = dist::log_density(Q, x), lp = dist::log_density(P, x);
      if (lq == kNegInf) {
        v[1] = std::exp(lp) * jac;  // chi^2 integrand reduces to p
        return v;
      }
      if (lp == kNegInf) {
        v[0] = v[1] = std::numeric_limits<double>::infinity();
        return v;
      }
      const double d = lq - lp;
      v[0] = std::exp(lq) * d * jac;
      const double e = std::expm1(d);
      v[1] = std::exp(lp) * e * e * jac;
      return v;
    };
    if (!kl_inf || !chi_inf) {
      const auto r2 = quadrature::integrate<2>(g, seg.t_lo(), seg.t_hi(), seg_tol, {1.0, 1.0},
                                               opts.kl_chi_panel_budget);
      // A non-convergent integral is treated as divergent.
      const bool kl_ok = std::isfinite(r2.value[0]) && r2.abs_error[0] <= std::max(1e-6, 1e-6 * std::fabs(r2.value[0]));
      const bool chi_ok = std::isfinite(r2.value[1]) && r2.abs_error[1] <= std::max(1e-6, 1e-6 * std::fabs(r2.value[1]));
      if (kl_ok) kl_acc.add(r2.value[0]);
      else kl_inf = true;
      if (chi_ok) chi_acc.add(r2.value[1]);
      else chi_inf = true;
    }
  }

  DivergenceSet out;
  out.q_total = acc[0].value();
  out.p_total = acc[1].value();
  out.tv = std::clamp(acc[2].value(), 0.0, 1.0);
  out.tv_reverse = std::clamp(acc[3].value(), 0.0, 1.0);
  out.tv_scheffe = std::clamp(1.0 - acc[4].value(), 0.0, 1.0);
  out.hellinger_sq = std::clamp(acc[5].value(), 0.0, 1.0);
  out.q_mass_g_gt_f = std::clamp(acc[6].value(), 0.0, 1.0);
  out.abs_error = err;
  out.kl_chi_computed = opts.include_kl_chi;
  if (opts.include_kl_chi) {
    out.kl = kl_inf ? ExtendedReal::infinity() : ExtendedReal(std::max(0.0, kl_acc.value()));
    out.chi_sq = chi_inf ? ExtendedReal::infinity() : ExtendedReal(std::max(0.0, chi_acc.value()));
  } else {
    out.kl = ExtendedReal::infinity();
    out.chi_sq = ExtendedReal::infinity();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reductions used by the sphere-projection and spacings examples.

/// |X|^2 / r^2 ~ Beta(k/2, (n-k)/2) for the first k coordinates of radius
/// r times a uniform point on the sphere in R^n; chi^2_k = Gamma(k/2, 1/2).
/// Both laws on R^k are spherically symmetric, so their distance equals
/// the distance between Beta(k/2, (n-k)/2) and Gamma(k/2, r^2/2).
inline std::pair<dist::Beta, dist::Gamma> sphere_projection_reduction(std::int64_t n, std::int64_t k, double r_sq) {
  require(k >= 1 && n > k, "sphere_projection_reduction: need 1 <= k < n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return {dist::Beta(0.5 * kd, 0.5 * (nd - kd)), dist::Gamma(0.5 * kd, 0.5 * r_sq)};
}

/// The sum of the first k of n + 1 uniform spacings is Beta(k, n - k + 1);
/// n times it is compared with Gamma(k, 1), i.e. Beta against Gamma(k, n).
inline std::pair<dist::Beta, dist::Gamma> spacings_reduction(std::int64_t n, std::int64_t k) {
  require(k >= 1 && k <= n, "spacings_reduction: need 1 <= k <= n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return {dist::Beta(kd, nd - kd + 1.0), dist::Gamma(kd, nd)};
}

// ---------------------------------------------------------------------------
// Normal extremes.

/// max of log q - log p over a window, by grid evaluation.
inline double log_ratio_max_on(const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P, double lo, double hi,
                               int points = 2001) {
  double best = kNegInf;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double lq = dist::log_density(Q, x), lp = dist::log_density(P, x);
    if (lq == kNegInf) continue;
    if (lp == kNegInf) return std::numeric_limits<double>::infinity();
    best = std::max(best, lq - lp);
  }
  return best;
}

/// sup_x |F(x) - G(x)| by dense grid plus golden-section refinement.
inline double sup_norm_cdf(const dist::ContinuousFamily& F, const dist::ContinuousFamily& G, double lo = -20.0,
                           double hi = 40.0, int points = 20000) {
  auto diff = [&](double x) { return std::fabs(dist::cdf(F, x) - dist::cdf(G, x)); };
  double best = -1.0;
  int best_i = 0;
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double v = diff(lo + h * i);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double a = lo + h * std::max(0, best_i - 1), b = lo + h * std::min(points - 1, best_i + 1);
  const auto refined = ratio::detail::golden_max(diff, a, b);
  return std::max(best, refined.second);
}

struct ExtremesRow {
  std::int64_t n = 0;
  double sup_norm = 0.0;
  double sup_norm_log_n = 0.0;
  double tv = 0.0;
  double tv_scheffe = 0.0;
};

inline std::vector<ExtremesRow> extremes_convergence_table(const std::vector<std::int64_t>& n_list,
                                                           dist::Centering centering = dist::Centering::exact,
                                                           double tolerance = 1e-10) {
  std::vector<ExtremesRow> rows;
  for (std::int64_t n : n_list) {
    require(n >= 2, "extremes_convergence_table: n must be >= 2");
    const dist::ContinuousFamily fn = dist::NormalMax(n, centering);
    const dist::ContinuousFamily g = dist::Gumbel{};
    ExtremesRow row;
    row.n = n;
    row.sup_norm = sup_norm_cdf(fn, g);
    row.sup_norm_log_n = row.sup_norm * std::log(static_cast<double>(n));
    ContinuousOptions opts;
    opts.tolerance = tolerance;
    opts.include_kl_chi = false;
    const auto d = divergences_continuous(fn, g, opts);
    row.tv = d.tv;
    row.tv_scheffe = d.tv_scheffe;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ratio_bounds::divergence
