#pragma once

// Data series behind the binomial-Poisson and sphere-projection figures.
// Curves are named by formula, not by colour.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ratio_bounds/ratio_bounds.hpp"

namespace ratio_bounds::cli {

struct FigureTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct FigureOptions {
  std::int64_t n = 40;             // binomial size
  int points = 1000;               // p-grid size
  double p_max = 0.975;
  std::vector<std::int64_t> dims = {5, 10};  // sphere dimensions
  std::int64_t k = 1;
  double x_max = 4.0;
  int x_points = 801;
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"bin_poiss_left", "bin_poiss_right", "levy_densities",
                                                 "levy_ratios"};
  return names;
}

inline std::vector<double> figure_p_grid(const FigureOptions& o) {
  require(o.points >= 1, "figure: points must be >= 1");
  require(o.p_max > 0.0 && o.p_max < 1.0, "figure: p-max must lie in (0, 1)");
  std::vector<double> ps;
  for (int i = 1; i <= o.points; ++i) ps.push_back(o.p_max * i / o.points);
  return ps;
}

inline FigureTable figure_bin_poiss_left(const FigureOptions& o) {
  require(o.n >= 1, "figure: n must be >= 1");
  FigureTable t;
  t.header = {"p", "lambda_n", "capital_lambda", "neg_log_1mp", "half_neg_log_1m_ceil_np_over_n"};
  for (double p : figure_p_grid(o)) {
    const auto b = bounds::bounds_bin_poiss(o.n, p);
    const auto& k_bound = b.at("log_rho_upper_k");
    t.rows.push_back({p, ratio::lambda_bin_poiss(o.n, p).log_rho.value(), ratio::capital_lambda(p),
                      b.at("log_rho_upper_p").value, k_bound.valid ? k_bound.value : std::nan("")});
  }
  return t;
}

inline FigureTable figure_bin_poiss_right(const FigureOptions& o) {
  require(o.n >= 1, "figure: n must be >= 1");
  FigureTable t;
  t.header = {"p", "lambda_n_centered", "blue_upper", "eq12_upper", "eq12_lower"};
  for (double p : figure_p_grid(o)) {
    const auto b = bounds::bounds_bin_poiss(o.n, p);
    const double half = 0.5 * std::log1p(-p);
    const auto& k_bound = b.at("log_rho_upper_k");
    const auto& up = b.at("eq12_upper");
    const auto& lo = b.at("eq12_lower");
    t.rows.push_back({p, ratio::lambda_bin_poiss(o.n, p).log_rho.value() + half,
                      k_bound.valid ? k_bound.value + half : std::nan(""), up.valid ? up.value : std::nan(""),
                      lo.valid ? lo.value : std::nan("")});
  }
  return t;
}

namespace detail {

inline std::string scaling_tag(bounds::Scaling s) { return s == bounds::Scaling::sqrt_n ? "sqrt_n" : "sqrt_n_minus_2"; }

inline double radius(std::int64_t n, bounds::Scaling s) {
  return std::sqrt(static_cast<double>(s == bounds::Scaling::sqrt_n ? n : n - 2));
}

}  // namespace detail

inline FigureTable figure_levy_densities(const FigureOptions& o) {
  require(o.k == 1, "figure: the sphere-projection figures use k = 1");
  require(o.x_points >= 2 && o.x_max > 0.0, "figure: invalid x grid");
  FigureTable t;
  t.header = {"x", "normal"};
  for (auto n : o.dims) {
    require(n >= 4, "figure: dimensions must be >= 4");
    for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2})
      t.header.push_back("g_n" + std::to_string(n) + "_" + detail::scaling_tag(s));
  }
  for (int i = 0; i < o.x_points; ++i) {
    const double x = -o.x_max + 2.0 * o.x_max * i / (o.x_points - 1);
    std::vector<double> row = {x, dist::density(dist::Normal01{}, x)};
    for (auto n : o.dims)
      for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2})
        row.push_back(dist::density(dist::SphereCoord(n, detail::radius(n, s)), x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline FigureTable figure_levy_ratios(const FigureOptions& o) {
  require(o.k == 1, "figure: the sphere-projection figures use k = 1");
  require(o.x_points >= 2 && o.x_max > 0.0, "figure: invalid x grid");
  FigureTable t;
  t.header = {"x"};
  for (auto n : o.dims) {
    require(n >= 4, "figure: dimensions must be >= 4");
    for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2}) {
      t.header.push_back("ratio_n" + std::to_string(n) + "_" + detail::scaling_tag(s));
      t.header.push_back("bound_n" + std::to_string(n) + "_" + detail::scaling_tag(s));
    }
  }
  for (int i = 0; i < o.x_points; ++i) {
    const double x = -o.x_max + 2.0 * o.x_max * i / (o.x_points - 1);
    std::vector<double> row = {x};
    for (auto n : o.dims)
      for (auto s : {bounds::Scaling::sqrt_n, bounds::Scaling::sqrt_n_minus_2}) {
        const double lg = dist::log_density(dist::SphereCoord(n, detail::radius(n, s)), x);
        row.push_back(lg == kNegInf ? 0.0 : std::exp(lg - dist::log_density(dist::Normal01{}, x)));
        row.push_back(bounds::bounds_levy_poincare(n, o.k, s).at("rho_upper").value);
      }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline FigureTable make_figure(const std::string& id, const FigureOptions& o) {
  if (id == "bin_poiss_left") return figure_bin_poiss_left(o);
  if (id == "bin_poiss_right") return figure_bin_poiss_right(o);
  if (id == "levy_densities") return figure_levy_densities(o);
  if (id == "levy_ratios") return figure_levy_ratios(o);
  throw std::invalid_argument("unknown figure: " + id);
}

}  // namespace ratio_bounds::cli
