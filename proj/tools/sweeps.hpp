#pragma once

// Verification sweeps: every bound entry evaluated against the exact
// quantity it claims to bound, one SweepRow per (case, entry).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ratio_bounds/ratio_bounds.hpp"

namespace ratio_bounds::cli {

struct SweepRow {
  std::string suite;
  std::string case_id;
  std::string bound;
  std::string quantity;
  std::string side;
  double exact = 0.0;
  double bound_value = 0.0;
  double slack = 0.0;
  bool valid = true;
  bool comparator = false;
  bool pass = true;
};

inline const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h = {"suite", "case",  "bound",     "quantity",   "side", "exact",
                                             "bound_value", "slack", "valid", "comparator", "pass"};
  return h;
}

struct SweepOptions {
  double tol = 1e-12;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::int64_t N_max = 40;
  std::int64_t n_max = 1000;
  int p_points = 50;
};

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t failures = 0;
  double max_violation = 0.0;  // largest -slack among failing or near-failing asserted rows
};

inline SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  s.rows = rows.size();
  for (const auto& r : rows) {
    if (!r.pass) ++s.failures;
    if (r.valid && !r.comparator) s.max_violation = std::max(s.max_violation, -r.slack);
  }
  return s;
}

/// Runs f(i) for i in [0, count) on `threads` workers and concatenates the
/// results in index order.
template <class F>
std::vector<SweepRow> parallel_rows(std::size_t count, unsigned threads, F f) {
  std::vector<std::vector<SweepRow>> parts(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) parts[i] = f(i);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<SweepRow> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << v;
  return os.str();
}

// Rows for every entry of `set` whose quantity has an exact value in `exact`.
inline void add_rows(std::vector<SweepRow>& out, const std::string& suite, const std::string& case_id,
                     const bounds::BoundSet& set, const std::map<bounds::Quantity, double>& exact, double tol) {
  for (const auto& e : set.entries) {
    const auto it = exact.find(e.quantity);
    if (it == exact.end()) continue;
    SweepRow r;
    r.suite = suite;
    r.case_id = case_id;
    r.bound = e.name;
    r.quantity = bounds::to_string(e.quantity);
    r.side = bounds::to_string(e.side);
    r.exact = it->second;
    r.bound_value = e.value;
    r.slack = e.valid ? e.slack(it->second) : 0.0;
    r.valid = e.valid;
    r.comparator = e.comparator;
    r.pass = !e.valid || e.comparator || r.slack >= -tol;
    out.push_back(std::move(r));
  }
}

inline SweepRow check_row(const std::string& suite, const std::string& case_id, const std::string& name,
                          const std::string& quantity, bounds::Side side, double exact, double bound, double tol) {
  SweepRow r;
  r.suite = suite;
  r.case_id = case_id;
  r.bound = name;
  r.quantity = quantity;
  r.side = bounds::to_string(side);
  r.exact = exact;
  r.bound_value = bound;
  r.slack = side == bounds::Side::upper ? bound - exact : exact - bound;
  r.pass = r.slack >= -tol;
  return r;
}

inline std::vector<double> p_grid(int points) {
  std::vector<double> ps;
  for (int j = 1; j <= points; ++j) ps.push_back(static_cast<double>(j) / (points + 1));
  return ps;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<SweepRow> sweep_sampling(const SweepOptions& o) {
  std::vector<std::pair<std::int64_t, std::int64_t>> cases;
  for (std::int64_t N = 1; N <= o.N_max; ++N)
    for (std::int64_t n = 1; n <= N; ++n) cases.emplace_back(N, n);
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto [N, n] = cases[i];
    std::vector<SweepRow> rows;
    const double log_rho = ratio::rho_sampling(N, n).log_rho.value();
    const double tv = ratio::sampling_tv(N, n);
    detail::add_rows(rows, "sampling", "N=" + std::to_string(N) + ";n=" + std::to_string(n),
                     bounds::bounds_sampling(N, n), {{bounds::Quantity::log_rho, log_rho}, {bounds::Quantity::tv, tv}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_hyp_bin(const SweepOptions& o) {
  std::vector<std::array<std::int64_t, 3>> cases;
  for (std::int64_t N = 2; N <= o.N_max; ++N)
    for (std::int64_t n = 2; n <= N; ++n)
      if (2 * (n - 1) <= N)
        for (std::int64_t L = 0; L <= N; ++L) cases.push_back({N, L, n});
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto [N, L, n] = cases[i];
    std::vector<SweepRow> rows;
    const double log_rho = ratio::rho_hyp_bin(N, L, n).log_rho.value();
    const auto d = divergence::divergences_discrete(dist::Hypergeometric(N, L, n),
                                                    dist::Binomial(n, static_cast<double>(L) / N));
    detail::add_rows(rows, "hyp-bin",
                     "N=" + std::to_string(N) + ";L=" + std::to_string(L) + ";n=" + std::to_string(n),
                     bounds::bounds_hyp_bin(N, L, n),
                     {{bounds::Quantity::log_rho, log_rho},
                      {bounds::Quantity::rho, std::exp(log_rho)},
                      {bounds::Quantity::tv, d.tv}},
                     o.tol);
    return rows;
  });
}

inline std::vector<std::int64_t> bin_poiss_n_list(std::int64_t n_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t n : {1, 2, 5, 10, 40, 100, 1000})
    if (n <= n_max) out.push_back(n);
  return out;
}

inline std::vector<SweepRow> sweep_bin_poiss(const SweepOptions& o) {
  std::vector<std::pair<std::int64_t, double>> cases;
  for (std::int64_t n : bin_poiss_n_list(o.n_max))
    for (double p : detail::p_grid(o.p_points)) cases.emplace_back(n, p);
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto [n, p] = cases[i];
    std::vector<SweepRow> rows;
    const double lam = ratio::lambda_bin_poiss(n, p).log_rho.value();
    const auto d = divergence::divergences_discrete(dist::Binomial(n, p), dist::Poisson(n * p));
    detail::add_rows(rows, "bin-poiss", "n=" + std::to_string(n) + ";p=" + detail::fmt(p),
                     bounds::bounds_bin_poiss(n, p),
                     {{bounds::Quantity::log_rho, lam},
                      {bounds::Quantity::lambda_centered, lam + 0.5 * std::log1p(-p)},
                      {bounds::Quantity::tv, d.tv}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_beta_gamma(const SweepOptions& o) {
  struct Case {
    double a, b;
    bounds::RateChoice choice;
  };
  std::vector<Case> cases;
  for (double a : {0.5, 1.0, 2.0, 5.0})
    for (double b : {1.5, 2.0, 5.0, 20.0, 100.0})
      for (auto ch : {bounds::RateChoice::canonical, bounds::RateChoice::optimal}) cases.push_back({a, b, ch});
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto& c = cases[i];
    const double rate = bounds::gamma_rate(c.a, c.b, c.choice);
    const double log_rho = ratio::rho_beta_gamma(c.a, c.b, rate).log_rho.value();
    const auto d = divergence::divergences_continuous(dist::Beta(c.a, c.b), dist::Gamma(c.a, rate));
    std::vector<SweepRow> rows;
    detail::add_rows(rows, "beta-gamma",
                     "a=" + detail::fmt(c.a) + ";b=" + detail::fmt(c.b) + ";rate=" +
                         (c.choice == bounds::RateChoice::canonical ? "canonical" : "optimal"),
                     bounds::bounds_beta_gamma(c.a, c.b, c.choice),
                     {{bounds::Quantity::log_rho, log_rho},
                      {bounds::Quantity::rho, std::exp(log_rho)},
                      {bounds::Quantity::tv, d.tv + d.abs_error}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_levy(const SweepOptions& o) {
  struct Case {
    std::int64_t n, k;
    bounds::Scaling s;
  };
  std::vector<Case> cases;
  for (std::int64_t n : {5, 10, 100})
    for (std::int64_t k : {1, 2})
      for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2}) cases.push_back({n, k, s});
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto& c = cases[i];
    const double r_sq = c.s == bounds::Scaling::sqrt_n ? static_cast<double>(c.n) : static_cast<double>(c.n - 2);
    const auto [beta, gamma] = divergence::sphere_projection_reduction(c.n, c.k, r_sq);
    const double log_rho = ratio::rho_beta_gamma(beta.a, beta.b, gamma.c).log_rho.value();
    const auto d = divergence::divergences_continuous(beta, gamma);
    std::vector<SweepRow> rows;
    detail::add_rows(rows, "levy",
                     "n=" + std::to_string(c.n) + ";k=" + std::to_string(c.k) + ";scaling=" +
                         (c.s == bounds::Scaling::sqrt_n ? "sqrt_n" : "sqrt_n_minus_2"),
                     bounds::bounds_levy_poincare(c.n, c.k, c.s),
                     {{bounds::Quantity::log_rho, log_rho},
                      {bounds::Quantity::rho, std::exp(log_rho)},
                      {bounds::Quantity::tv, d.tv + d.abs_error}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_dirichlet(const SweepOptions& o) {
  struct Case {
    std::vector<double> a;
    std::int64_t k;
    bounds::RateChoice choice;
  };
  const std::vector<std::vector<double>> params = {
      {2.0, 3.0, 5.0}, std::vector<double>(11, 1.0), {0.5, 1.5, 2.5, 4.0}, {3.0, 3.0, 3.0, 3.0, 3.0}};
  std::vector<Case> cases;
  for (const auto& a : params)
    for (std::int64_t k = 1; k < static_cast<std::int64_t>(a.size()); ++k)
      for (auto ch : {bounds::RateChoice::canonical, bounds::RateChoice::optimal}) cases.push_back({a, k, ch});
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto& c = cases[i];
    double a_plus = 0.0, a_k = 0.0;
    for (std::size_t j = 0; j < c.a.size(); ++j) {
      a_plus += c.a[j];
      if (static_cast<std::int64_t>(j) < c.k) a_k += c.a[j];
    }
    std::string id = "a=";
    for (std::size_t j = 0; j < c.a.size(); ++j) id += (j ? "/" : "") + detail::fmt(c.a[j]);
    id += ";k=" + std::to_string(c.k) + ";rate=" + (c.choice == bounds::RateChoice::canonical ? "canonical" : "optimal");
    std::vector<SweepRow> rows;
    const double b = a_plus - a_k;
    if (!(b > 1.0)) return rows;
    const double rate = c.choice == bounds::RateChoice::canonical ? a_plus : a_plus - 1.0;
    const double log_rho = ratio::rho_beta_gamma(a_k, b, rate).log_rho.value();
    const auto d = divergence::divergences_continuous(dist::Beta(a_k, b), dist::Gamma(a_k, rate));
    detail::add_rows(rows, "dirichlet", id, bounds::bounds_dirichlet(c.a, c.k, c.choice),
                     {{bounds::Quantity::log_rho, log_rho},
                      {bounds::Quantity::rho, std::exp(log_rho)},
                      {bounds::Quantity::tv, d.tv + d.abs_error}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_spacings(const SweepOptions& o) {
  std::vector<std::pair<std::int64_t, std::int64_t>> cases;
  for (std::int64_t n : {5, 10, 100})
    for (std::int64_t k : {1, 2, 3}) cases.emplace_back(n, k);
  return parallel_rows(cases.size(), o.threads, [&](std::size_t i) {
    const auto [n, k] = cases[i];
    const auto [beta, gamma] = divergence::spacings_reduction(n, k);
    const double log_rho = ratio::rho_beta_gamma(beta.a, beta.b, gamma.c).log_rho.value();
    const auto d = divergence::divergences_continuous(beta, gamma);
    std::vector<SweepRow> rows;
    detail::add_rows(rows, "spacings", "n=" + std::to_string(n) + ";k=" + std::to_string(k),
                     bounds::bounds_spacings(n, k),
                     {{bounds::Quantity::log_rho, log_rho},
                      {bounds::Quantity::rho, std::exp(log_rho)},
                      {bounds::Quantity::tv, d.tv + d.abs_error}},
                     o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_student(const SweepOptions& o) {
  const std::vector<double> rs = {2, 3, 4, 5, 10, 50, 200};
  return parallel_rows(rs.size(), o.threads, [&](std::size_t i) {
    const double r = rs[i];
    const double log_rho = ratio::rho_normal_student(r).log_rho.value();
    const auto d = divergence::divergences_continuous(dist::Normal01{}, dist::StudentT(r));
    std::vector<SweepRow> rows;
    detail::add_rows(rows, "student", "r=" + detail::fmt(r), bounds::bounds_student(r),
                     {{bounds::Quantity::log_rho, log_rho}, {bounds::Quantity::tv, d.tv + d.abs_error}}, o.tol);
    return rows;
  });
}

inline std::vector<SweepRow> sweep_specfun(const SweepOptions& o) {
  using bounds::Side;
  std::vector<SweepRow> rows;
  auto bracket_rows = [&](const std::string& name, const std::string& id, double v, const Bracket& b) {
    if (std::isfinite(b.lower)) rows.push_back(detail::check_row("specfun", id, name + "_lower", name, Side::lower, v, b.lower, o.tol));
    if (std::isfinite(b.upper)) rows.push_back(detail::check_row("specfun", id, name + "_upper", name, Side::upper, v, b.upper, o.tol));
  };
  for (int i = 0; i <= 90; ++i) {
    const double x = std::pow(10.0, -3.0 + 9.0 * i / 90.0);
    const auto lg = specfun::log_gamma(x);
    bracket_rows("binet", "x=" + detail::fmt(x), lg.remainder, specfun::binet_bracket(x));
    const double diff = std::fabs(lg.log_gamma - specfun::log_gamma_oracle(x)) / std::max(1.0, std::fabs(lg.log_gamma));
    rows.push_back(detail::check_row("specfun", "x=" + detail::fmt(x), "oracle_agreement", "log_gamma_rel_diff",
                                     Side::upper, diff, 1e-11, 0.0));
  }
  for (std::int64_t n = 0; n <= 1000; n += (n < 20 ? 1 : 49))
    bracket_rows("stirling_robbins", "n=" + std::to_string(n), specfun::stirling_robbins_s(n),
                 specfun::stirling_robbins_bracket(n));
  random::Philox4x64 eng(o.seed, 11);
  for (int i = 0; i < 200; ++i) {
    const double a = std::exp(std::log(1e-2) + (std::log(1e4) - std::log(1e-2)) * random::uniform_open_closed(eng));
    const double b = a * (1.0 + 10.0 * random::uniform_open_closed(eng));
    bracket_rows("increment", "a=" + detail::fmt(a) + ";b=" + detail::fmt(b), specfun::log_gamma_increment(a, b),
                 specfun::log_gamma_increment_bracket(a, b));
  }
  for (int i = 0; i <= 60; ++i) {
    const double x = 0.6 * std::pow(1e4 / 0.6, i / 60.0);
    bracket_rows("half_step", "x=" + detail::fmt(x), specfun::half_step_increment(x), specfun::half_step_bracket(x));
  }
  return rows;
}

inline std::vector<SweepRow> sweep_prop1(const SweepOptions& o) {
  using bounds::Quantity;
  std::vector<SweepRow> rows;
  auto add_divergences = [&](const std::string& id, double rho, double mass, double tv, double kl, double hel,
                             double chi) {
    detail::add_rows(rows, "prop1", id, bounds::divergence_bounds_from_rho(rho, mass),
                     {{Quantity::tv, tv}, {Quantity::kl, kl}, {Quantity::hellinger_sq, hel}, {Quantity::chi_sq, chi}},
                     o.tol);
  };
  // Two-point equality case: f = (1/2, 1/2), g = (1, 0).
  add_divergences("two-point", 2.0, 1.0, 0.5, std::log(2.0), 1.0 - std::sqrt(0.5), 1.0);
  // Sampling with vs without replacement: g/f takes values in {0, rho}.
  for (auto [N, n] : std::vector<std::pair<int, int>>{{5, 3}, {12, 6}, {365, 23}}) {
    const double lr = ratio::rho_sampling(N, n).log_rho.value();
    const double rho = std::exp(lr);
    add_divergences("sampling;N=" + std::to_string(N) + ";n=" + std::to_string(n), rho, 1.0, -std::expm1(-lr), lr,
                    -std::expm1(-0.5 * lr), std::expm1(lr));
  }
  auto discrete = [&](const std::string& id, const dist::DiscreteFamily& Q, const dist::DiscreteFamily& P,
                      double log_rho) {
    const auto d = divergence::divergences_discrete(Q, P);
    add_divergences(id, std::exp(log_rho), d.q_mass_g_gt_f, d.tv, d.kl.as_double(), d.hellinger_sq,
                    d.chi_sq.as_double());
  };
  for (std::int64_t L : {1, 5, 10})
    for (std::int64_t n : {3, 6, 10})
      discrete("hyp-bin;N=20;L=" + std::to_string(L) + ";n=" + std::to_string(n), dist::Hypergeometric(20, L, n),
               dist::Binomial(n, L / 20.0), ratio::rho_hyp_bin(20, L, n).log_rho.value());
  for (std::int64_t n : {5, 40})
    for (double p : {0.1, 0.5, 0.9})
      discrete("bin-poiss;n=" + std::to_string(n) + ";p=" + detail::fmt(p), dist::Binomial(n, p),
               dist::Poisson(n * p), ratio::lambda_bin_poiss(n, p).log_rho.value());
  auto continuous = [&](const std::string& id, const dist::ContinuousFamily& Q, const dist::ContinuousFamily& P,
                        double log_rho) {
    const auto d = divergence::divergences_continuous(Q, P);
    add_divergences(id, std::exp(log_rho), std::min(1.0, d.q_mass_g_gt_f + d.abs_error), d.tv - d.abs_error,
                    d.kl.as_double(), d.hellinger_sq, d.chi_sq.as_double());
  };
  continuous("beta-gamma;a=1;b=10;c=10", dist::Beta(1, 10), dist::Gamma(1, 10),
             ratio::rho_beta_gamma(1, 10, 10).log_rho.value());
  continuous("normal-student;r=5", dist::Normal01{}, dist::StudentT(5), ratio::rho_normal_student(5).log_rho.value());
  return rows;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"sampling", "hyp-bin",  "bin-poiss", "beta-gamma", "levy",
                                                 "dirichlet", "spacings", "student",   "specfun",    "prop1"};
  return names;
}

inline std::vector<SweepRow> run_suite(const std::string& name, const SweepOptions& o) {
  if (name == "sampling") return sweep_sampling(o);
  if (name == "hyp-bin") return sweep_hyp_bin(o);
  if (name == "bin-poiss") return sweep_bin_poiss(o);
  if (name == "beta-gamma") return sweep_beta_gamma(o);
  if (name == "levy") return sweep_levy(o);
  if (name == "dirichlet") return sweep_dirichlet(o);
  if (name == "spacings") return sweep_spacings(o);
  if (name == "student") return sweep_student(o);
  if (name == "specfun") return sweep_specfun(o);
  if (name == "prop1") return sweep_prop1(o);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace ratio_bounds::cli
