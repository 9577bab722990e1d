#include <gtest/gtest.h>

#include <cmath>

#include "ratio_bounds/bounds.hpp"
#include "ratio_bounds/ratio.hpp"

using namespace ratio_bounds;
using namespace ratio_bounds::ratio;

namespace {

// Reference values computed with mpmath at 50 digits.
constexpr double kRhoSamp365_23 = 0.70784919614167301424;
constexpr double kRhoHyp10_3_4 = 0.19455609446229720111;
constexpr double kRhoHyp100_30_10 = 0.052331973514030304818;
constexpr double kLam40_05 = 0.344490560526278154;
constexpr double kLam5_02 = 0.10742579474316097693;
constexpr double kLam1000_03 = 0.17830175768897259952;
constexpr double kCapLam09 = 1.2403021806115441212;
constexpr double kRhoNs5 = 0.096645726231915261442;
constexpr double kRhoNs2 = 0.22897989979749179531;
constexpr double kRhoNs1e4Scaled = 0.49999166666664167333;
constexpr double kRhoBg1_10_10 = 0.051755359079563288952;

std::vector<double> p_grid(int points) {
  std::vector<double> ps;
  for (int j = 1; j <= points; ++j) ps.push_back(static_cast<double>(j) / (points + 1));
  return ps;
}

}  // namespace

TEST(RatioReport, MixtureIndexIdentity) {
  for (double v : {0.0, 1e-8, 0.3, 2.0, 50.0}) {
    const auto r = make_report(v, std::nullopt, Method::closed_form);
    EXPECT_NEAR(r.mixture_index, 1.0 - std::exp(-v), 1e-15);
    EXPECT_GE(r.log_rho.value(), 0.0);
  }
  EXPECT_EQ(make_report(-1e-17, 0.0, Method::exhaustive).log_rho.value(), 0.0);
  const auto inf = make_infinite_report(std::nullopt, Method::continuous_search);
  EXPECT_TRUE(inf.log_rho.is_infinite());
  EXPECT_THROW((void)inf.log_rho.value(), std::logic_error);
  EXPECT_EQ(inf.mixture_index, 1.0);
}

TEST(Sampling, Examples) {
  EXPECT_NEAR(rho_sampling(2, 2).log_rho.value(), std::log(2.0), 1e-15);
  EXPECT_NEAR(sampling_tv(2, 2), 0.5, 1e-15);
  EXPECT_EQ(rho_sampling(17, 1).log_rho.value(), 0.0);
  const double v = rho_sampling(365, 23).log_rho.value();
  EXPECT_GT(v, std::log(2.0));
  EXPECT_NEAR(v, kRhoSamp365_23, 1e-13);
  EXPECT_THROW(rho_sampling(3, 4), domain_error);
  EXPECT_THROW(rho_sampling(3, 0), domain_error);
}

TEST(HypBin, Examples) {
  const auto r = rho_hyp_bin(2, 1, 2);
  EXPECT_NEAR(r.log_rho.value(), std::log(2.0), 1e-15);
  EXPECT_EQ(*r.argmax, 1.0);
  EXPECT_EQ(rho_hyp_bin(9, 0, 4).log_rho.value(), 0.0);
  EXPECT_EQ(rho_hyp_bin(9, 9, 4).log_rho.value(), 0.0);
  EXPECT_NEAR(rho_hyp_bin(10, 1, 3).log_rho.value(), 2.0 * std::log(10.0 / 9.0), 1e-14);
  EXPECT_NEAR(rho_hyp_bin(10, 3, 4).log_rho.value(), kRhoHyp10_3_4, 1e-13);
  EXPECT_NEAR(rho_hyp_bin(100, 30, 10).log_rho.value(), kRhoHyp100_30_10, 1e-13);
  EXPECT_THROW(rho_hyp_bin(5, 6, 2), domain_error);
  EXPECT_THROW(rho_hyp_bin(5, 2, 6), domain_error);
}

TEST(HypBin, MatchesExhaustiveUpTo40) {
  for (std::int64_t N = 1; N <= 40; ++N)
    for (std::int64_t L = 0; L <= N; ++L)
      for (std::int64_t n = 1; n <= N; ++n) {
        const auto closed = rho_hyp_bin(N, L, n);
        const auto ex = rho_discrete_exhaustive(dist::Hypergeometric(N, L, n),
                                                dist::Binomial(n, static_cast<double>(L) / N));
        ASSERT_NEAR(closed.log_rho.value(), ex.log_rho.value(), 1e-10) << N << " " << L << " " << n;
        if (closed.argmax && L > 0 && L < N && n > 1) {
          // Ties allowed: the value at the formula index equals the max.
          ASSERT_NEAR(log_hyp_bin_ratio(N, L, n, static_cast<std::int64_t>(*closed.argmax)), ex.log_rho.value(),
                      1e-10);
        }
      }
}

TEST(HypBin, Symmetry) {
  for (std::int64_t N = 1; N <= 40; ++N)
    for (std::int64_t L = 0; L <= N; ++L)
      for (std::int64_t n = 1; n <= N; ++n)
        ASSERT_NEAR(rho_hyp_bin(N, L, n).log_rho.value(), rho_hyp_bin(N, N - L, n).log_rho.value(), 1e-12);
}

TEST(BinPoiss, Examples) {
  EXPECT_EQ(lambda_bin_poiss(7, 0.0).log_rho.value(), 0.0);
  EXPECT_NEAR(lambda_bin_poiss(1, 0.3).log_rho.value(), 0.3, 1e-15);
  const double v = lambda_bin_poiss(40, 0.5).log_rho.value();
  EXPECT_NEAR(v, kLam40_05, 1e-13);
  const auto b = bounds::bounds_bin_poiss(40, 0.5);
  const double centered = v + 0.5 * std::log(0.5);
  EXPECT_LE(centered, b.at("eq12_upper").value);
  EXPECT_GE(centered, b.at("eq12_lower").value);
  EXPECT_NEAR(lambda_bin_poiss(5, 0.2).log_rho.value(), kLam5_02, 1e-14);
  EXPECT_NEAR(lambda_bin_poiss(1000, 0.3).log_rho.value(), kLam1000_03, 1e-12);
  EXPECT_THROW(lambda_bin_poiss(5, 1.0), domain_error);
  EXPECT_THROW(lambda_bin_poiss(5, -0.1), domain_error);
}

TEST(BinPoiss, CeilNpTies) {
  EXPECT_EQ(ceil_np(10, 0.3), 3);
  EXPECT_EQ(ceil_np(10, 0.5), 5);
  EXPECT_EQ(ceil_np(3, 0.1), 1);
  EXPECT_EQ(ceil_np(100, 0.25), 25);
  // Decimal inputs whose product is an integer up to rounding.
  EXPECT_EQ(ceil_np(100, 0.07), 7);
  EXPECT_EQ(ceil_np(40, 0.2), 8);
  EXPECT_EQ(ceil_np(3, 0.1 + 0.2), 1);
  EXPECT_EQ(ceil_np(40, 0.2 + 1e-9), 9);
  EXPECT_EQ(ceil_np(5, 0.0), 0);
}

TEST(BinPoiss, MatchesExhaustiveAndIncreasing) {
  const auto ps = p_grid(50);
  for (std::int64_t n = 1; n <= 60; ++n) {
    double prev = -1.0;
    for (double p : ps) {
      const double closed = lambda_bin_poiss(n, p).log_rho.value();
      double best = kNegInf;
      for (std::int64_t k = 0; k <= n; ++k) best = std::max(best, log_bin_poiss_ratio(n, p, k));
      ASSERT_NEAR(closed, best, 1e-12) << n << " " << p;
      const auto ex = rho_discrete_exhaustive(dist::Binomial(n, p), dist::Poisson(n * p));
      ASSERT_NEAR(closed, ex.log_rho.value(), 1e-12);
      ASSERT_GT(closed, prev) << n << " " << p;
      prev = closed;
    }
  }
}

TEST(BinPoiss, AntonelliRegoliLimit) {
  for (std::int64_t n : {100, 1000, 10000})
    for (double p : {0.1, 0.5, 0.9}) {
      const auto b = bounds::bounds_bin_poiss(n, p);
      const double centered = lambda_bin_poiss(n, p).log_rho.value() + 0.5 * std::log1p(-p);
      const double bound = std::max(std::fabs(b.at("eq12_upper").value), std::fabs(b.at("eq12_lower").value));
      EXPECT_LE(std::fabs(centered), bound + 1e-14) << n << " " << p;
      EXPECT_LE(bound, 1.0 / (static_cast<double>(n) * (1.0 - p)));
    }
}

TEST(CapitalLambda, Examples) {
  EXPECT_NEAR(capital_lambda(0.5), 0.5, 1e-12);
  EXPECT_NEAR(capital_lambda(0.69), 0.69, 1e-12);
  const double v = capital_lambda(0.9);
  EXPECT_GT(v, 0.9);
  EXPECT_NEAR(v, kCapLam09, 1e-12);
  EXPECT_THROW(capital_lambda(0.0), domain_error);
  EXPECT_THROW(capital_lambda(1.0), domain_error);
}

TEST(CapitalLambda, DominatesAdmissibleAndEqualsPBelowLog2) {
  for (double p : p_grid(200)) {
    const auto scan = capital_lambda_scan(p);
    const auto n_max = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / (1.0 - p))));
    for (std::int64_t n = 1; n <= n_max; ++n) EXPECT_GE(scan.value, lambda_bin_poiss(n, p).log_rho.value());
    if (p <= std::log(2.0)) {
      EXPECT_NEAR(scan.value, p, 1e-12) << p;
    }
    // Reported, not asserted as an invariant; on this grid the max does not move.
    EXPECT_FALSE(scan.moved) << p;
  }
}

TEST(Reductions, ForwardToBinomial) {
  EXPECT_EQ(rho_multinomial_poisson(20, {0.1, 0.2, 0.05}).log_rho.value(),
            lambda_bin_poiss(20, 0.1 + 0.2 + 0.05).log_rho.value());
  EXPECT_EQ(rho_poissonization(30, 0.4).log_rho.value(), lambda_bin_poiss(30, 0.4).log_rho.value());
}

TEST(PoissonBinomialBound, Examples) {
  EXPECT_NEAR(rho_poisson_binomial_bound({0.1, 0.1}), 1.0 / 0.9, 1e-15);
  EXPECT_NEAR(rho_poisson_binomial_bound({0.5}), 2.0, 1e-15);
  const auto ex = rho_discrete_exhaustive(dist::PoissonBinomial({0.5}), dist::Poisson(0.5));
  EXPECT_LE(ex.rho(), 2.0);
  EXPECT_GE(1.0 / (1.0 - 0.3), lambda_bin_poiss(1000, 0.3).rho());
  EXPECT_THROW(rho_poisson_binomial_bound({0.5, 1.0}), domain_error);
}

TEST(PoissonBinomialBound, DominatesExhaustive) {
  const std::vector<std::vector<double>> cases = {
      {0.1, 0.7}, {0.3, 0.3, 0.3}, {0.05, 0.9, 0.2, 0.6}, {0.99}, {0.01, 0.02, 0.03, 0.04, 0.05}};
  for (const auto& ps : cases) {
    const dist::PoissonBinomial pb(ps);
    const auto ex = rho_discrete_exhaustive(pb, dist::Poisson(pb.mean()));
    EXPECT_LE(ex.rho(), rho_poisson_binomial_bound(ps) * (1.0 + 1e-12));
  }
}

TEST(BetaGamma, Examples) {
  EXPECT_NEAR(rho_beta_gamma(1, 2, 2).log_rho.value(), std::log(0.5) + 1.0, 1e-14);
  for (double c : {0.3, 1.0, 4.0}) EXPECT_NEAR(rho_beta_gamma(1, 1, c).log_rho.value(), c - std::log(c), 1e-14);
  const auto r = rho_beta_gamma(1, 3, 1);
  EXPECT_NEAR(r.log_rho.value(), std::log(3.0), 1e-14);
  EXPECT_EQ(*r.argmax, 0.0);
  EXPECT_NEAR(rho_beta_gamma(1, 10, 10).log_rho.value(), kRhoBg1_10_10, 1e-14);
  EXPECT_NEAR(rho_beta_gamma(1, 10, 10).log_rho.value(), 9.0 * std::log(0.9) + 1.0, 1e-14);
  EXPECT_THROW(rho_beta_gamma(0, 2, 1), domain_error);
  EXPECT_THROW(rho_beta_gamma(1, 0.5, 1), domain_error);
  EXPECT_THROW(rho_beta_gamma(1, 2, -1), domain_error);
}

TEST(BetaGamma, OptimalRateMinimisesOnGrid) {
  for (double a : {0.5, 1.0, 3.0})
    for (double b : {1.5, 2.0, 10.0, 50.0}) {
      const double c_star = optimal_gamma_rate(a, b);
      double best_c = 0.0, best = INFINITY, nearest = 0.0;
      for (int i = 1; i <= 400; ++i) {
        const double c = c_star * i / 200.0;
        const double v = rho_beta_gamma(a, b, c).log_rho.value();
        if (v < best) {
          best = v;
          best_c = c;
        }
        if (std::fabs(c - c_star) < std::fabs(nearest - c_star)) nearest = c;
      }
      EXPECT_EQ(best_c, nearest) << a << " " << b;
    }
}

TEST(NormalStudent, Examples) {
  const double v2 = rho_normal_student(2).log_rho.value();
  EXPECT_GT(v2, 1.0 / 6.0);
  EXPECT_LT(v2, 0.25);
  EXPECT_NEAR(v2, kRhoNs2, 1e-14);
  const double v100 = rho_normal_student(100).log_rho.value();
  EXPECT_GT(v100, 1.0 / 202.0);
  EXPECT_LT(v100, 1.0 / 200.0);
  EXPECT_NEAR(1e4 * rho_normal_student(1e4).log_rho.value(), kRhoNs1e4Scaled, 1e-9);
  EXPECT_NEAR(rho_normal_student(5).log_rho.value(), kRhoNs5, 1e-14);
  EXPECT_THROW(rho_normal_student(0), domain_error);
}

TEST(NormalStudent, BracketOnGrid) {
  for (double r = 2.0; r <= 1e4; r *= 1.07) {
    const double v = rho_normal_student(r).log_rho.value();
    EXPECT_GT(v, 1.0 / (2.0 * (r + 1.0))) << r;
    EXPECT_LT(v, 1.0 / (2.0 * r)) << r;
  }
}

TEST(Exhaustive, Examples) {
  EXPECT_EQ(rho_discrete_exhaustive(dist::Binomial(6, 0.3), dist::Binomial(6, 0.3)).log_rho.value(), 0.0);
  EXPECT_NEAR(rho_discrete_exhaustive(dist::Hypergeometric(10, 3, 4), dist::Binomial(4, 0.3)).log_rho.value(),
              rho_hyp_bin(10, 3, 4).log_rho.value(), 1e-12);
  EXPECT_NEAR(rho_discrete_exhaustive(dist::Binomial(5, 0.2), dist::Poisson(1.0)).log_rho.value(),
              lambda_bin_poiss(5, 0.2).log_rho.value(), 1e-12);
  EXPECT_TRUE(rho_discrete_exhaustive(dist::Poisson(1.0), dist::Binomial(5, 0.2)).log_rho.is_infinite());
}

TEST(ContinuousSearch, Examples) {
  const auto bg = rho_continuous_search(dist::Beta(1, 2), dist::Gamma(1, 2));
  EXPECT_EQ(bg.method, Method::continuous_search);
  EXPECT_NEAR(bg.log_rho.value(), std::log(0.5) + 1.0, 1e-8);
  EXPECT_NEAR(rho_continuous_search(dist::Normal01{}, dist::StudentT(5)).log_rho.value(),
              rho_normal_student(5).log_rho.value(), 1e-8);
  EXPECT_TRUE(rho_continuous_search(dist::StudentT(5), dist::Normal01{}).log_rho.is_infinite());
}

TEST(ContinuousSearch, MatchesClosedForms) {
  for (double a : {0.5, 1.0, 2.5})
    for (double b : {1.0, 2.0, 7.0})
      for (double c : {0.5, b, a + b - 1.0, 3.0 * b}) {
        const auto closed = rho_beta_gamma(a, b, c);
        const auto search = rho_continuous_search(dist::Beta(a, b), dist::Gamma(a, c));
        EXPECT_NEAR(search.log_rho.value(), closed.log_rho.value(), 1e-8) << a << " " << b << " " << c;
      }
  for (double r : {1.0, 3.0, 30.0})
    EXPECT_NEAR(rho_continuous_search(dist::Normal01{}, dist::StudentT(r)).log_rho.value(),
                rho_normal_student(r).log_rho.value(), 1e-8);
  EXPECT_TRUE(rho_continuous_search(dist::Gamma(1, 1), dist::Beta(1, 1)).log_rho.is_infinite());
}
