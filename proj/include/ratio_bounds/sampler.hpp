#pragma once

// Von Neumann acceptance-rejection with an envelope constant C >= rho(Q, P):
// draw X ~ P, U ~ Unif(0, 1], accept when log U <= log q(X) - log p(X) - log C.
// Accepted values are Q-distributed and the waiting times are Geom(1/C).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ratio_bounds/core.hpp"
#include "ratio_bounds/distributions.hpp"
#include "ratio_bounds/random.hpp"
#include "ratio_bounds/ratio.hpp"

namespace ratio_bounds::sampler {

struct RejectionRun {
  dist::ContinuousFamily target;
  dist::ContinuousFamily proposal;
  double envelope_log_C = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
  std::vector<double> samples;
  std::vector<std::int64_t> waiting_times;

  double acceptance_rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

/// Closed-form log rho(target, proposal) when one is known.
inline std::optional<ExtendedReal> known_log_rho(const dist::ContinuousFamily& target,
                                                 const dist::ContinuousFamily& proposal) {
  if (target.index() == proposal.index()) {
    const bool same = std::visit(
        [&](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          const auto& p = std::get<T>(proposal);
          if constexpr (std::is_same_v<T, dist::Beta>) return t.a == p.a && t.b == p.b;
          else if constexpr (std::is_same_v<T, dist::Gamma>) return t.a == p.a && t.c == p.c;
          else if constexpr (std::is_same_v<T, dist::StudentT>) return t.r == p.r;
          else if constexpr (std::is_same_v<T, dist::SphereCoord>) return t.n == p.n && t.radius == p.radius;
          else if constexpr (std::is_same_v<T, dist::NormalMax>) return t.n == p.n && t.centering == p.centering;
          else return true;
        },
        target);
    if (same) return ExtendedReal(0.0);
  }
  const auto* beta = std::get_if<dist::Beta>(&target);
  const auto* gamma = std::get_if<dist::Gamma>(&proposal);
  if (beta && gamma && beta->a == gamma->a && beta->b >= 1.0)
    return ratio::rho_beta_gamma(beta->a, beta->b, gamma->c).log_rho;
  if (std::holds_alternative<dist::Normal01>(target)) {
    if (const auto* t = std::get_if<dist::StudentT>(&proposal)) return ratio::rho_normal_student(t->r).log_rho;
  }
  if (std::holds_alternative<dist::StudentT>(target) && std::holds_alternative<dist::Normal01>(proposal))
    return ExtendedReal::infinity();
  return std::nullopt;
}

/// Draws from the proposal using only uniform / normal / exponential primitives.
class ProposalDraw {
 public:
  explicit ProposalDraw(const dist::ContinuousFamily& proposal) : proposal_(proposal) {
    const bool ok = std::visit(
        [](const auto& f) -> bool {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, dist::Beta>) return f.a == 1.0 && f.b == 1.0;
          else return std::is_same_v<T, dist::Gamma> || std::is_same_v<T, dist::Normal01> ||
                      std::is_same_v<T, dist::StudentT> || std::is_same_v<T, dist::Gumbel>;
        },
        proposal_);
    if (!ok) throw unsupported_error("rejection_sample: no generator for proposal " + dist::name(proposal_));
  }

  template <class Engine>
  double operator()(Engine& eng) {
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, dist::Beta>) {
            return 1.0 - random::uniform_open_closed(eng);  // [0, 1)
          } else if constexpr (std::is_same_v<T, dist::Gamma>) {
            if (f.a == 1.0) return random::exponential(eng) / f.c;
            return random::standard_gamma(eng, normal_, f.a) / f.c;
          } else if constexpr (std::is_same_v<T, dist::Normal01>) {
            return normal_(eng);
          } else if constexpr (std::is_same_v<T, dist::StudentT>) {
            return random::student_t(eng, normal_, f.r);
          } else {
            return -std::log(random::exponential(eng));
          }
        },
        proposal_);
  }

 private:
  dist::ContinuousFamily proposal_;
  random::NormalGenerator normal_;
};

inline RejectionRun rejection_sample(const dist::ContinuousFamily& target, const dist::ContinuousFamily& proposal,
                                     double envelope_log_C, std::int64_t count, std::uint64_t seed,
                                     std::uint64_t stream = 0) {
  require(std::isfinite(envelope_log_C) && envelope_log_C >= 0.0, "rejection_sample: log C must be finite and >= 0");
  require(count >= 0, "rejection_sample: count must be non-negative");
  if (const auto known = known_log_rho(target, proposal)) {
    if (known->is_infinite())
      throw configuration_error("rejection_sample: rho(target, proposal) is infinite; no envelope exists");
    if (envelope_log_C < known->value() - 1e-12)
      throw configuration_error("rejection_sample: envelope log C is below log rho(target, proposal)");
  }
  ProposalDraw draw(proposal);
  random::Philox4x64 eng(seed, stream);
  RejectionRun run{target, proposal, envelope_log_C, seed, stream, 0, 0, {}, {}};
  run.samples.reserve(static_cast<std::size_t>(count));
  run.waiting_times.reserve(static_cast<std::size_t>(count));
  std::int64_t wait = 0;
  while (run.accepted < count) {
    const double x = draw(eng);
    const double log_u = std::log(random::uniform_open_closed(eng));
    ++run.proposed;
    ++wait;
    const double lq = dist::log_density(target, x);
    if (lq == kNegInf) continue;
    const double lp = dist::log_density(proposal, x);
    if (log_u <= lq - lp - envelope_log_C) {
      run.samples.push_back(x);
      run.waiting_times.push_back(wait);
      ++run.accepted;
      wait = 0;
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Diagnostics.

struct GofReport {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Chi-square goodness of fit of the waiting times against Geom(exp(-log C)),
/// adjacent cells pooled so that every expected count is at least 5.
inline GofReport waiting_time_gof(const RejectionRun& run) {
  const auto m = static_cast<std::int64_t>(run.waiting_times.size());
  if (m < 1000) throw numerical_error("waiting_time_gof: need at least 1000 accepted samples");
  const double pi = std::exp(-run.envelope_log_C);
  const double md = static_cast<double>(m);
  GofReport rep;
  if (pi >= 1.0) {
    const bool all_one = std::all_of(run.waiting_times.begin(), run.waiting_times.end(),
                                     [](std::int64_t w) { return w == 1; });
    rep.p_value = all_one ? 1.0 : 0.0;
    rep.bins = 1;
    return rep;
  }
  // Cells {1}, {2}, ..., {K}, {> K}; K as large as the >= 5 rule allows.
  const double log_q = std::log1p(-pi);
  std::int64_t K = 0;
  while (true) {
    const double next_cell = md * pi * std::exp(static_cast<double>(K) * log_q);
    const double tail_after = md * std::exp(static_cast<double>(K + 1) * log_q);
    if (next_cell < 5.0 || tail_after < 5.0) break;
    ++K;
  }
  std::vector<double> observed(static_cast<std::size_t>(K + 1), 0.0);
  for (std::int64_t w : run.waiting_times) observed[static_cast<std::size_t>(std::min(w, K + 1) - 1)] += 1.0;
  double stat = 0.0;
  for (std::int64_t j = 0; j <= K; ++j) {
    const double expected =
        j < K ? md * pi * std::exp(static_cast<double>(j) * log_q) : md * std::exp(static_cast<double>(K) * log_q);
    const double d = observed[static_cast<std::size_t>(j)] - expected;
    stat += d * d / expected;
  }
  rep.statistic = stat;
  rep.bins = static_cast<int>(K + 1);
  rep.degrees_of_freedom = static_cast<int>(K);
  rep.p_value = rep.degrees_of_freedom > 0 ? boost::math::gamma_q(0.5 * rep.degrees_of_freedom, 0.5 * stat) : 1.0;
  return rep;
}

/// P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Small-lambda form: P(K <= l) = sqrt(2 pi)/l * sum exp(-(2j-1)^2 pi^2 / (8 l^2)).
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int j = 1; j <= 20; ++j) s += std::exp(-(2.0 * j - 1.0) * (2.0 * j - 1.0) * c);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

struct KsReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test against the CDF of `family`
/// (asymptotic p-value with Stephens' small-sample correction).
inline KsReport ks_test(std::vector<double> xs, const dist::ContinuousFamily& family) {
  require(!xs.empty(), "ks_test: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = dist::cdf(family, xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }
  KsReport rep;
  rep.statistic = d;
  rep.n = static_cast<std::int64_t>(xs.size());
  const double sn = std::sqrt(n);
  rep.p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
  return rep;
}

/// z-score of the observed acceptance rate against a nominal rate.
inline double acceptance_z(const RejectionRun& run, double nominal_rate) {
  require(run.proposed > 0, "acceptance_z: empty run");
  const double n = static_cast<double>(run.proposed);
  const double sd = std::sqrt(nominal_rate * (1.0 - nominal_rate) / n);
  const double diff = run.acceptance_rate() - nominal_rate;
  if (sd == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / sd;
}

/// Sample correlation of waiting times and accepted values times sqrt(m);
/// approximately N(0, 1) under independence.
inline double waiting_value_correlation_z(const RejectionRun& run) {
  const std::size_t m = run.samples.size();
  require(m >= 3, "waiting_value_correlation_z: need at least 3 samples");
  double mw = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mw += static_cast<double>(run.waiting_times[i]);
    mx += run.samples[i];
  }
  mw /= static_cast<double>(m);
  mx /= static_cast<double>(m);
  double sww = 0.0, sxx = 0.0, swx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dw = static_cast<double>(run.waiting_times[i]) - mw, dx = run.samples[i] - mx;
    sww += dw * dw;
    sxx += dx * dx;
    swx += dw * dx;
  }
  if (sww == 0.0 || sxx == 0.0) return 0.0;
  return swx / std::sqrt(sww * sxx) * std::sqrt(static_cast<double>(m));
}

}  // namespace ratio_bounds::sampler
