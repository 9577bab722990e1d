// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ratio_bounds/ratio_bounds.hpp"

using namespace ratio_bounds;

namespace {

constexpr double kOracleTolHypBin = 1e-10;
constexpr double kOracleTolBinPoiss = 1e-12;
constexpr double kCapitalLambdaTol = 1e-12;
constexpr double kSearchTolBetaGamma = 1e-8;
constexpr double kSearchTolStudent = 1e-10;
constexpr double kBoundTol = 1e-12;
constexpr double kSpecfunRelTol = 1e-12;
constexpr double kOracleLogGammaTol = 1e-11;
constexpr double kEqualityTol = 1e-12;
constexpr double kSigmas = 3.0;
constexpr double kAlpha = 0.001;
constexpr double kExtremesBandLo = 0.3;
constexpr double kExtremesBandHi = 0.45;
constexpr double kTailRatio = 1e3;

struct Outcome {
  bool pass = true;
  std::string detail;
  int failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures++ == 0) first_failure = what;
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

Outcome hyp_bin_exhaustive() {
  Outcome o;
  double worst = 0.0;
  std::int64_t cases = 0;
  for (std::int64_t N = 2; N <= 40; ++N)
    for (std::int64_t n = 2; n <= N; ++n) {
      if (2 * (n - 1) > N) continue;
      double best_rho = 0.0, edge_rho = 0.0;
      for (std::int64_t L = 0; L <= N; ++L) {
        ++cases;
        const std::string id = "N=" + std::to_string(N) + " L=" + std::to_string(L) + " n=" + std::to_string(n);
        const dist::Hypergeometric Q(N, L, n);
        const dist::Binomial P(n, static_cast<double>(L) / N);
        const double rho = ratio::rho_hyp_bin(N, L, n).rho();
        const double rho_ex = ratio::rho_discrete_exhaustive(Q, P).rho();
        worst = std::max(worst, std::fabs(rho - rho_ex));
        o.check(std::fabs(rho - rho_ex) <= kOracleTolHypBin, "(a) " + id);
        const auto b = bounds::bounds_hyp_bin(N, L, n);
        const double ra = b.at("rho_upper_bernoulli").value, rb = b.at("rho_upper_simple").value;
        o.check(rho <= ra * (1.0 + kBoundTol) && ra <= rb * (1.0 + kBoundTol), "(b) " + id);
        const double tv = divergence::divergences_discrete(Q, P).tv;
        o.check(tv <= b.at("tv_upper_bernoulli").value + kBoundTol && tv <= b.at("tv_upper_simple").value + kBoundTol,
                "(c) " + id);
        best_rho = std::max(best_rho, rho);
        if (L == 1 || L == N - 1) edge_rho = std::max(edge_rho, rho);
      }
      o.check(edge_rho >= best_rho * (1.0 - kBoundTol), "(d) N=" + std::to_string(N) + " n=" + std::to_string(n));
    }
  o.detail = std::to_string(cases) + " cases, max |rho - exhaustive| = " + fmt(worst);
  return o;
}

Outcome bin_poiss() {
  Outcome o;
  double worst = 0.0;
  int cases = 0, bh_holds = 0;
  for (std::int64_t n : {1, 2, 5, 10, 40, 100, 1000})
    for (int j = 1; j <= 50; ++j) {
      ++cases;
      const double p = j / 51.0;
      const std::string id = "n=" + std::to_string(n) + " p=" + fmt(p);
      const dist::Binomial Q(n, p);
      const dist::Poisson P(n * p);
      const double lam = ratio::lambda_bin_poiss(n, p).log_rho.value();
      const double lam_ex = ratio::rho_discrete_exhaustive(Q, P).log_rho.value();
      worst = std::max(worst, std::fabs(lam - lam_ex));
      o.check(std::fabs(lam - lam_ex) <= kOracleTolBinPoiss, "(a) " + id);
      const auto b = bounds::bounds_bin_poiss(n, p);
      o.check(lam < b.at("log_rho_upper_p").value, "(b) p " + id);
      if (b.at("log_rho_upper_k").valid) o.check(lam < b.at("log_rho_upper_k").value, "(b) k " + id);
      const double centered = lam + 0.5 * std::log1p(-p);
      o.check(centered < b.at("eq12_upper").value, "(c) upper " + id);
      if (b.at("eq12_lower").valid) o.check(centered > b.at("eq12_lower").value, "(c) lower " + id);
      const double tv = divergence::divergences_discrete(Q, P).tv;
      o.check(tv <= b.at("tv_upper_p").value + kBoundTol, "(d) p " + id);
      if (b.at("tv_upper_k").valid) o.check(tv <= b.at("tv_upper_k").value + kBoundTol, "(d) k " + id);
      if (tv <= b.at("barbour_hall").value) ++bh_holds;
    }
  o.detail = std::to_string(cases) + " cases, max |Lambda_n - exhaustive| = " + fmt(worst) +
             ", Barbour-Hall comparator above exact TV in " + std::to_string(bh_holds) + "/" +
             std::to_string(cases);
  return o;
}

Outcome capital_lambda() {
  Outcome o;
  double worst = 0.0;
  for (int j = 1; j <= 25; ++j) {
    const double p = std::log(2.0) * j / 26.0;
    const double d = std::fabs(ratio::capital_lambda(p) - p);
    worst = std::max(worst, d);
    o.check(d <= kCapitalLambdaTol, "p=" + fmt(p));
  }
  o.detail = "max |Lambda(p) - p| = " + fmt(worst);
  return o;
}

Outcome beta_gamma() {
  Outcome o;
  double worst = 0.0;
  int cases = 0;
  for (double a : {0.5, 1.0, 2.0, 5.0})
    for (double b : {1.5, 2.0, 5.0, 20.0, 100.0}) {
      const std::string ab = "a=" + fmt(a) + " b=" + fmt(b);
      for (auto choice : {bounds::RateChoice::canonical, bounds::RateChoice::optimal}) {
        ++cases;
        const std::string id = ab + (choice == bounds::RateChoice::canonical ? " canonical" : " optimal");
        const double c = bounds::gamma_rate(a, b, choice);
        const dist::Beta Q(a, b);
        const dist::Gamma P(a, c);
        const double lr = ratio::rho_beta_gamma(a, b, c).log_rho.value();
        const double lr_search = ratio::rho_continuous_search(Q, P).log_rho.value();
        const double d = std::fabs(std::expm1(lr_search - lr));
        worst = std::max(worst, d);
        o.check(d <= kSearchTolBetaGamma, "search " + id);
        const auto bs = bounds::bounds_beta_gamma(a, b, choice);
        o.check(lr <= bs.at("log_rho_upper").value + kBoundTol, "rho bound " + id);
        const auto dv = divergence::divergences_continuous(Q, P);
        o.check(dv.tv - dv.abs_error <= bs.at("tv_upper_sqrt").value, "tv bound " + id);
        if (bs.at("a1_log_rho_upper").valid) {
          const double closed = (b - 1.0) * std::log1p(-1.0 / b) + 1.0;
          o.check(rel_diff(lr, closed) <= kBoundTol, "a=1 formula " + id);
          o.check(lr <= bs.at("a1_log_rho_upper").value + kBoundTol, "a=1 bound " + id);
        }
      }
      // The rate minimising rho is a + b - 1: scan a relative grid around it.
      const double c_opt = a + b - 1.0;
      double best_c = 0.0, best = INFINITY;
      for (int i = -200; i <= 200; ++i) {
        const double c = c_opt * (1.0 + 0.0025 * i);
        const double v = ratio::rho_beta_gamma(a, b, c).log_rho.value();
        if (v < best) {
          best = v;
          best_c = c;
        }
      }
      o.check(std::fabs(best_c - c_opt) <= 0.0025 * c_opt * (1.0 + 1e-12), "c-grid " + ab);
    }
  o.detail = std::to_string(cases) + " cases, max relative |rho - search| = " + fmt(worst);
  return o;
}

Outcome levy() {
  Outcome o;
  int cases = 0;
  for (std::int64_t n : {5, 10, 100})
    for (std::int64_t k : {1, 2}) {
      const std::string nk = "n=" + std::to_string(n) + " k=" + std::to_string(k);
      double delta[2];
      int s_index = 0;
      for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2}) {
        ++cases;
        const std::string id = nk + (s == bounds::Scaling::sqrt_n ? " sqrt(n)" : " sqrt(n-2)");
        const double r_sq = s == bounds::Scaling::sqrt_n ? static_cast<double>(n) : static_cast<double>(n - 2);
        const auto [beta, gamma] = divergence::sphere_projection_reduction(n, k, r_sq);
        const auto d = divergence::divergences_continuous(beta, gamma);
        const auto bs = bounds::bounds_levy_poincare(n, k, s);
        delta[s_index++] = bs.at("delta").value;
        const double tv = d.tv - d.abs_error;
        o.check(bs.at("tv_upper_sqrt").valid && tv <= bs.at("tv_upper_sqrt").value, "tv sqrt " + id);
        o.check(tv <= bs.at("tv_upper_simple").value, "tv simple " + id);
        const auto& df = bs.at("diaconis_freedman");
        if (df.valid) {
          o.check(bs.at("tv_upper_sqrt").value < df.value, "vs Diaconis-Freedman " + id);
          o.check(bs.at("tv_upper_simple").value < df.value, "vs Diaconis-Freedman " + id);
        }
      }
      o.check(delta[1] < delta[0], "delta ordering " + nk);
    }
  o.detail = std::to_string(cases) + " cases";
  return o;
}

Outcome spacings() {
  Outcome o;
  for (std::int64_t n : {5, 10, 100}) {
    const auto [beta, gamma] = divergence::spacings_reduction(n, 1);
    const auto d = divergence::divergences_continuous(beta, gamma);
    const double bound = 1.0 / (2.0 * n) + 1.0 / (4.0 * n * n);
    o.check(d.tv - d.abs_error <= bound, "k=1 n=" + std::to_string(n));
  }
  double worst = 0.0;
  for (std::int64_t k : {2, 3}) {
    const auto [beta, gamma] = divergence::spacings_reduction(10, k);
    const double searched = ratio::rho_continuous_search(beta, gamma).log_rho.value();
    const double closed = ratio::rho_beta_gamma(beta.a, beta.b, gamma.c).log_rho.value();
    worst = std::max(worst, std::fabs(searched - closed));
    o.check(std::fabs(std::expm1(searched - closed)) <= kSearchTolBetaGamma, "search k=" + std::to_string(k));
    o.check(searched <= bounds::bounds_spacings(10, k).at("log_rho_upper").value + kBoundTol,
            "bound k=" + std::to_string(k));
  }
  o.detail = "k=1 for n in {5,10,100}; |log rho search - closed| = " + fmt(worst) + " for k in {2,3}";
  return o;
}

Outcome student() {
  Outcome o;
  double worst = 0.0;
  for (double r : {2.0, 3.0, 4.0, 5.0, 10.0, 50.0, 200.0}) {
    const std::string id = "r=" + fmt(r);
    const double lr = ratio::rho_normal_student(r).log_rho.value();
    o.check(lr > 1.0 / (2.0 * (r + 1.0)) && lr < 1.0 / (2.0 * r), "bracket " + id);
    const double searched = ratio::rho_continuous_search(dist::Normal01{}, dist::StudentT(r)).log_rho.value();
    worst = std::max(worst, std::fabs(searched - lr));
    o.check(std::fabs(searched - lr) <= kSearchTolStudent, "search " + id);
    const auto d = divergence::divergences_continuous(dist::Normal01{}, dist::StudentT(r));
    o.check(r * (d.tv + d.abs_error) < 0.5, "r TV " + id);
  }
  o.detail = "max |log rho search - closed| = " + fmt(worst);
  return o;
}

bool in_bracket(double v, const Bracket& b) {
  const double tol = kSpecfunRelTol * std::max(1.0, std::fabs(v));
  return v >= b.lower - tol && v <= b.upper + tol;
}

Outcome special_functions() {
  Outcome o;
  using namespace specfun;
  int checks = 0;
  double worst_oracle = 0.0;
  for (int i = 0; i <= 900; ++i) {
    const double x = std::pow(10.0, -3.0 + 9.0 * i / 900.0);
    const auto lg = log_gamma(x);
    ++checks;
    o.check(in_bracket(lg.remainder, binet_bracket(x)), "Binet x=" + fmt(x));
    const double d = rel_diff(lg.log_gamma, log_gamma_oracle(x));
    worst_oracle = std::max(worst_oracle, d);
    o.check(d <= kOracleLogGammaTol, "oracle x=" + fmt(x));
  }
  for (std::int64_t n = 1; n <= 1000; ++n, ++checks)
    o.check(in_bracket(stirling_robbins_s(n), stirling_robbins_bracket(n)), "Stirling-Robbins n=" + std::to_string(n));
  random::Philox4x64 eng(20240601, 8);
  auto u = [&] { return random::uniform_open_closed(eng); };
  for (int i = 0; i < 1000; ++i, ++checks) {
    const double a = std::exp(std::log(1e-2) + std::log(1e6) * u());
    const double b = a * (1.0 + 10.0 * u());
    o.check(in_bracket(log_gamma_increment(a, b), log_gamma_increment_bracket(a, b)),
            "increment a=" + fmt(a) + " b=" + fmt(b));
  }
  for (int i = 0; i <= 200; ++i, ++checks) {
    const double x = 0.6 * std::pow(1e4 / 0.6, i / 200.0);
    o.check(in_bracket(half_step_increment(x), half_step_bracket(x)), "half step x=" + fmt(x));
  }
  for (int i = 0; i < 10000; ++i, ++checks) {
    const double x = std::exp(-5.0 + 10.0 * u());
    const double a = std::exp(-5.0 + 10.0 * u());
    const double b = -x + (x + 10.0) * u();
    const double lhs = weighted_log_ratio(x, a, b);
    const double tol = kSpecfunRelTol * std::max(1.0, std::fabs(lhs));
    const double cubic = weighted_log_ratio_cubic_bound(x, a, b);
    const std::string id = "x=" + fmt(x) + " a=" + fmt(a) + " b=" + fmt(b);
    o.check(lhs <= cubic + tol, "cubic " + id);
    o.check(cubic <= weighted_log_ratio_quadratic_bound(x, a, b) + tol, "quadratic " + id);
    const double centered = weighted_log_ratio(x, a, a / 2.0);
    o.check(centered >= centered_log_ratio_lower_bound(x, a) - kSpecfunRelTol * std::max(1.0, std::fabs(centered)),
            "centered " + id);
  }
  o.detail = std::to_string(checks) + " checks, max log-gamma oracle relative difference = " + fmt(worst_oracle);
  return o;
}

Outcome equality_case() {
  Outcome o;
  // g = (1, 0) against f = (1/2, 1/2): rho = 2 and g > f on a set of g-mass one.
  const dist::Binomial Q(1, 0.0), P(1, 0.5);
  const double rho = ratio::rho_discrete_exhaustive(Q, P).rho();
  const auto d = divergence::divergences_discrete(Q, P);
  const auto b = bounds::divergence_bounds_from_rho(rho, d.q_mass_g_gt_f);
  const double slacks[] = {b.at("tv_upper").slack(d.tv), b.at("kl_upper").slack(d.kl.value()),
                           b.at("hellinger_sq_upper").slack(d.hellinger_sq),
                           b.at("chi_sq_upper").slack(d.chi_sq.value())};
  const char* names[] = {"tv", "kl", "hellinger_sq", "chi_sq"};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    worst = std::max(worst, std::fabs(slacks[i]));
    o.check(std::fabs(slacks[i]) <= kEqualityTol, names[i]);
  }
  o.detail = "rho = " + fmt(rho) + ", max |slack| = " + fmt(worst);
  return o;
}

Outcome sampler_run() {
  Outcome o;
  const dist::Beta target(1, 10);
  const dist::Gamma proposal(1, 10);
  const double log_c = ratio::rho_beta_gamma(1, 10, 10).log_rho.value();
  const auto run = sampler::rejection_sample(target, proposal, log_c, 100000, 7);
  const double z = sampler::acceptance_z(run, std::exp(-log_c));
  const auto gof = sampler::waiting_time_gof(run);
  const auto ks = sampler::ks_test(run.samples, target);
  o.check(std::fabs(z) <= kSigmas, "acceptance rate");
  o.check(gof.p_value > kAlpha, "geometric GOF");
  o.check(ks.p_value > kAlpha, "KS vs target");
  o.detail = "rate = " + fmt(run.acceptance_rate()) + " (expected " + fmt(std::exp(-log_c)) + ", z = " + fmt(z) +
             "), GOF p = " + fmt(gof.p_value) + ", KS p = " + fmt(ks.p_value);
  return o;
}

Outcome extremes() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& r : divergence::extremes_convergence_table({100, 1000, 10000})) {
    o.check(r.sup_norm_log_n >= kExtremesBandLo && r.sup_norm_log_n <= kExtremesBandHi,
            "band n=" + std::to_string(r.n));
    detail << "n=" << r.n << ": " << fmt(r.sup_norm_log_n) << "; ";
  }
  const dist::NormalMax f(100, dist::Centering::exact);
  const double left = divergence::log_ratio_max_on(f, dist::Gumbel{}, -10.0, -5.0);
  const double right = divergence::log_ratio_max_on(dist::Gumbel{}, f, 5.0, 10.0);
  o.check(left > std::log(kTailRatio), "F_n/G left tail");
  o.check(right > std::log(kTailRatio), "G/F_n right tail");
  detail << "band [" << kExtremesBandLo << ", " << kExtremesBandHi << "]; tail log-ratios " << fmt(left) << ", "
         << fmt(right);
  o.detail = detail.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hypergeometric/binomial exhaustive", 60.0, hyp_bin_exhaustive},
      {2, "binomial/Poisson", 60.0, bin_poiss},
      {3, "Lambda(p) = p below log 2", 0.0, capital_lambda},
      {4, "beta/gamma", 120.0, beta_gamma},
      {5, "Levy-Poincare", 0.0, levy},
      {6, "spacings", 0.0, spacings},
      {7, "normal/Student", 0.0, student},
      {8, "special functions", 30.0, special_functions},
      {9, "divergence equality case", 0.0, equality_case},
      {10, "rejection sampler", 30.0, sampler_run},
      {11, "extremes demonstration", 0.0, extremes},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0) o.check(secs < c.time_limit, "runtime " + fmt(secs) + " s over " + fmt(c.time_limit) + " s");
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.2f s]", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
    if (!o.pass) std::printf(" (%d failing checks, first: %s)", o.failures, o.first_failure.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
