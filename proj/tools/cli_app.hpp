#pragma once

// ratio-bounds <exact|verify|figure|sample> [flags]
//
// Exit codes: 0 success, 1 verification failure (or a numerical routine
// giving up), 2 usage error. Flags take precedence over RB_TOL / RB_THREADS.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"
#include "figures.hpp"
#include "ratio_bounds/ratio_bounds.hpp"
#include "sweeps.hpp"

namespace ratio_bounds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct Env {
  std::optional<double> tol;
  std::optional<unsigned> threads;
};

inline Env read_env() {
  Env e;
  if (const char* s = std::getenv("RB_TOL")) {
    try {
      e.tol = std::stod(s);
    } catch (...) {
    }
  }
  if (const char* s = std::getenv("RB_THREADS")) {
    try {
      const long v = std::stol(s);
      if (v > 0) e.threads = static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return e;
}

namespace detail {

inline const std::vector<std::string>& exact_pairs() {
  static const std::vector<std::string> p = {"sampling",       "hyp-bin", "bin-poiss", "beta-gamma",
                                             "normal-student", "levy",    "spacings"};
  return p;
}

inline const std::vector<std::string>& sample_pairs() {
  static const std::vector<std::string> p = {"beta-gamma", "normal-student", "identity"};
  return p;
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::invalid_argument("cannot open output file " + path);
    }
    os_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return static_cast<bool>(file_); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline void write_report(std::ostream& os, const ratio::RatioReport& r, const divergence::DivergenceSet& d,
                         const std::string& div_method) {
  csv::row(os, {"quantity", "value", "method"});
  const std::string m = ratio::to_string(r.method);
  csv::row(os, {"log_rho", csv::number(r.log_rho.as_double()), m});
  csv::row(os, {"rho", csv::number(r.rho()), m});
  csv::row(os, {"argmax", r.argmax ? csv::number(*r.argmax) : r.argmax_note, m});
  csv::row(os, {"mixture_index", csv::number(r.mixture_index), m});
  csv::row(os, {"tv", csv::number(d.tv), div_method});
  csv::row(os, {"kl", csv::number(d.kl.as_double()), div_method});
  csv::row(os, {"hellinger_sq", csv::number(d.hellinger_sq), div_method});
  csv::row(os, {"chi_sq", csv::number(d.chi_sq.as_double()), div_method});
  csv::row(os, {"q_mass_g_gt_f", csv::number(d.q_mass_g_gt_f), div_method});
  csv::row(os, {"abs_error", csv::number(d.abs_error), div_method});
}

// Divergences for laws whose ratio takes only the values 0 and rho.
inline divergence::DivergenceSet two_valued_divergences(double log_rho) {
  divergence::DivergenceSet d;
  d.tv = d.tv_reverse = d.tv_scheffe = -std::expm1(-log_rho);
  d.kl = ExtendedReal(log_rho);
  d.hellinger_sq = -std::expm1(-0.5 * log_rho);
  d.chi_sq = ExtendedReal(std::expm1(log_rho));
  d.q_mass_g_gt_f = log_rho > 0.0 ? 1.0 : 0.0;
  d.abs_error = 0.0;
  return d;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Env env = read_env();
  CLI::App app{"Exact density-ratio measures, divergences and bounds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  double tol = env.tol.value_or(1e-12);
  unsigned threads = env.threads.value_or(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 1;
  std::string out_path;

  // exact
  auto* exact = app.add_subcommand("exact", "Exact log rho and divergences for a distribution pair");
  std::string exact_pair;
  std::int64_t N = 0, L = 0, n = 0, k = 1;
  double p = 0.0, a = 1.0, b = 2.0, r = 5.0;
  std::optional<double> c;
  std::string scaling = "sqrt_n";
  exact->add_option("pair", exact_pair, "Pair")->required()->check(CLI::IsMember(detail::exact_pairs()));
  exact->add_option("--N", N, "Population size");
  exact->add_option("--L", L, "Marked items");
  exact->add_option("--n", n, "Sample size / dimension");
  exact->add_option("--k", k, "Projected coordinates / spacings");
  exact->add_option("--p", p, "Success probability");
  exact->add_option("--a", a, "Beta shape a");
  exact->add_option("--b", b, "Beta shape b");
  exact->add_option("--c", c, "Gamma rate (default a + b - 1)");
  exact->add_option("--r", r, "Student degrees of freedom");
  exact->add_option("--scaling", scaling, "Sphere radius")->check(CLI::IsMember({"sqrt_n", "sqrt_n_minus_2"}));
  exact->add_option("--tol", tol, "Quadrature tolerance");
  exact->add_option("--out", out_path, "CSV output file");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a bound-domination sweep");
  std::string suite;
  SweepOptions sweep;
  verify->add_option("suite", suite, "Suite")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--N-max", sweep.N_max, "Largest N (sampling, hyp-bin)")->check(CLI::Range(1, 1000));
  verify->add_option("--n-max", sweep.n_max, "Largest n (bin-poiss)")->check(CLI::PositiveNumber);
  verify->add_option("--p-points", sweep.p_points, "p-values per n (bin-poiss)")->check(CLI::Range(1, 100000));
  verify->add_option("--tol", tol, "Slack tolerance");
  verify->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed for random test points");
  verify->add_option("--out", out_path, "CSV output file");

  // figure
  auto* figure = app.add_subcommand("figure", "Emit the data behind a figure as CSV");
  std::string figure_id;
  FigureOptions fig;
  figure->add_option("figure_id", figure_id, "Figure")->required()->check(CLI::IsMember(figure_names()));
  figure->add_option("--n", fig.n, "Binomial size")->check(CLI::PositiveNumber);
  figure->add_option("--points", fig.points, "p-grid size")->check(CLI::Range(1, 10000000));
  figure->add_option("--p-max", fig.p_max, "Largest p")->check(CLI::Range(0.0, 1.0));
  figure->add_option("--dims", fig.dims, "Sphere dimensions")->check(CLI::Range(4, 1000000));
  figure->add_option("--x-max", fig.x_max, "x-range half width")->check(CLI::PositiveNumber);
  figure->add_option("--x-points", fig.x_points, "x-grid size")->check(CLI::Range(2, 10000000));
  figure->add_option("--out", out_path, "CSV output file");

  // sample
  auto* sample = app.add_subcommand("sample", "Acceptance-rejection run with a ratio-based envelope");
  std::string sample_pair;
  std::int64_t count = 10000;
  std::string samples_path;
  sample->add_option("pair", sample_pair, "Pair")->required()->check(CLI::IsMember(detail::sample_pairs()));
  sample->add_option("--n", count, "Number of accepted samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Generator seed");
  sample->add_option("--a", a, "Beta shape a");
  sample->add_option("--b", b, "Beta shape b");
  sample->add_option("--c", c, "Gamma rate (default a + b - 1)");
  sample->add_option("--r", r, "Student degrees of freedom");
  sample->add_option("--out", out_path, "Summary CSV file");
  sample->add_option("--samples", samples_path, "Write accepted values and waiting times to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*exact) {
      detail::Sink sink(out_path, out);
      ratio::RatioReport rep;
      divergence::DivergenceSet d;
      std::string div_method = "exhaustive";
      divergence::ContinuousOptions copts;
      copts.tolerance = std::max(tol, 1e-12);
      if (exact_pair == "sampling") {
        rep = ratio::rho_sampling(N, n);
        d = detail::two_valued_divergences(rep.log_rho.value());
        div_method = "closed_form";
      } else if (exact_pair == "hyp-bin") {
        rep = ratio::rho_hyp_bin(N, L, n);
        d = divergence::divergences_discrete(dist::Hypergeometric(N, L, n),
                                             dist::Binomial(n, static_cast<double>(L) / static_cast<double>(N)));
      } else if (exact_pair == "bin-poiss") {
        rep = ratio::lambda_bin_poiss(n, p);
        d = divergence::divergences_discrete(dist::Binomial(n, p), dist::Poisson(static_cast<double>(n) * p));
      } else if (exact_pair == "beta-gamma") {
        const double rate = c.value_or(a + b - 1.0);
        rep = ratio::rho_beta_gamma(a, b, rate);
        d = divergence::divergences_continuous(dist::Beta(a, b), dist::Gamma(a, rate), copts);
        div_method = "quadrature";
      } else if (exact_pair == "normal-student") {
        rep = ratio::rho_normal_student(r);
        d = divergence::divergences_continuous(dist::Normal01{}, dist::StudentT(r), copts);
        div_method = "quadrature";
      } else if (exact_pair == "levy") {
        const double r_sq = static_cast<double>(scaling == "sqrt_n" ? n : n - 2);
        require(n > k + 2, "levy: need n > k + 2");
        const auto [beta, gamma] = divergence::sphere_projection_reduction(n, k, r_sq);
        rep = ratio::rho_beta_gamma(beta.a, beta.b, gamma.c);
        rep.argmax_note = "squared radius fraction";
        d = divergence::divergences_continuous(beta, gamma, copts);
        div_method = "quadrature";
      } else {
        const auto [beta, gamma] = divergence::spacings_reduction(n, k);
        require(k < n, "spacings: need k < n");
        rep = ratio::rho_beta_gamma(beta.a, beta.b, gamma.c);
        rep.argmax_note = "scaled sum of spacings";
        d = divergence::divergences_continuous(beta, gamma, copts);
        div_method = "quadrature";
      }
      detail::write_report(sink.stream(), rep, d, div_method);
      return kExitOk;
    }

    if (*verify) {
      sweep.tol = tol;
      sweep.threads = threads;
      sweep.seed = seed;
      const auto rows = run_suite(suite, sweep);
      detail::Sink sink(out_path, out);
      csv::row(sink.stream(), sweep_header());
      for (const auto& row : rows)
        csv::row(sink.stream(), {row.suite, row.case_id, row.bound, row.quantity, row.side, csv::number(row.exact),
                                 csv::number(row.bound_value), csv::number(row.slack), csv::boolean(row.valid),
                                 csv::boolean(row.comparator), csv::boolean(row.pass)});
      const auto s = summarize(rows);
      std::ostream& summary = sink.to_file() ? out : err;
      summary << "suite=" << suite << " rows=" << s.rows << " failures=" << s.failures
              << " max_violation=" << csv::number(s.max_violation) << "\n";
      return s.failures ? kExitFailure : kExitOk;
    }

    if (*figure) {
      const auto table = make_figure(figure_id, fig);
      detail::Sink sink(out_path, out);
      csv::row(sink.stream(), table.header);
      for (const auto& row : table.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(std::isnan(v) ? "" : csv::number(v));
        csv::row(sink.stream(), cells);
      }
      return kExitOk;
    }

    if (*sample) {
      dist::ContinuousFamily target = dist::Normal01{}, proposal = dist::Normal01{};
      double log_C = 0.0;
      if (sample_pair == "beta-gamma") {
        const double rate = c.value_or(a + b - 1.0);
        target = dist::Beta(a, b);
        proposal = dist::Gamma(a, rate);
        log_C = ratio::rho_beta_gamma(a, b, rate).log_rho.value();
      } else if (sample_pair == "normal-student") {
        proposal = dist::StudentT(r);
        log_C = ratio::rho_normal_student(r).log_rho.value();
      }
      const auto run = sampler::rejection_sample(target, proposal, log_C, count, seed);
      detail::Sink sink(out_path, out);
      auto& os = sink.stream();
      csv::row(os, {"quantity", "value"});
      csv::row(os, {"target", dist::name(target)});
      csv::row(os, {"proposal", dist::name(proposal)});
      csv::row(os, {"log_C", csv::number(log_C)});
      csv::row(os, {"seed", std::to_string(seed)});
      csv::row(os, {"accepted", csv::number(run.accepted)});
      csv::row(os, {"proposed", csv::number(run.proposed)});
      csv::row(os, {"acceptance_rate", csv::number(run.acceptance_rate())});
      csv::row(os, {"expected_rate", csv::number(std::exp(-log_C))});
      csv::row(os, {"acceptance_z", csv::number(sampler::acceptance_z(run, std::exp(-log_C)))});
      if (run.accepted >= 1000) {
        const auto g = sampler::waiting_time_gof(run);
        csv::row(os, {"gof_statistic", csv::number(g.statistic)});
        csv::row(os, {"gof_df", std::to_string(g.degrees_of_freedom)});
        csv::row(os, {"gof_p_value", csv::number(g.p_value)});
      }
      const auto ks = sampler::ks_test(run.samples, target);
      csv::row(os, {"ks_statistic", csv::number(ks.statistic)});
      csv::row(os, {"ks_p_value", csv::number(ks.p_value)});
      if (!samples_path.empty()) {
        detail::Sink samples(samples_path, out);
        csv::row(samples.stream(), {"value", "waiting_time"});
        for (std::size_t i = 0; i < run.samples.size(); ++i)
          csv::row(samples.stream(), {csv::number(run.samples[i]), csv::number(run.waiting_times[i])});
      }
      return kExitOk;
    }
  } catch (const ratio_bounds::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ratio_bounds::cli
