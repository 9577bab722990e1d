#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature for vector-valued
// integrands. All components share the node evaluations; the panel with the
// largest (weighted) error estimate is bisected until the total estimate is
// below an absolute tolerance or the panel budget runs out.

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "ratio_bounds/core.hpp"

namespace ratio_bounds::quadrature {

inline constexpr int kDefaultPanelBudget = 100000;

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes kXgk[1], [3], [5], [7].
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Neumaier compensated accumulator.
struct Sum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace detail

template <std::size_t K>
struct Result {
  std::array<double, K> value{};
  std::array<double, K> abs_error{};
  int panels = 0;
  bool converged = false;
};

template <std::size_t K>
struct Panel {
  double a = 0.0, b = 0.0;
  std::array<double, K> value{};
  std::array<double, K> error{};
  double weighted_error = 0.0;
  bool operator<(const Panel& o) const { return weighted_error < o.weighted_error; }
};

template <std::size_t K, class F>
Panel<K> gauss_kronrod_panel(const F& f, double a, double b, const std::array<double, K>& weights) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, K> kron{}, gauss{};
  const auto fc = f(c);
  for (std::size_t j = 0; j < K; ++j) {
    kron[j] = fc[j] * detail::kWgk[7];
    gauss[j] = fc[j] * detail::kWg[3];
  }
  for (int i = 0; i < 7; ++i) {
    const double dx = h * detail::kXgk[i];
    const auto f1 = f(c - dx);
    const auto f2 = f(c + dx);
    for (std::size_t j = 0; j < K; ++j) {
      const double pair = f1[j] + f2[j];
      kron[j] += detail::kWgk[i] * pair;
      if (i % 2 == 1) gauss[j] += detail::kWg[i / 2] * pair;
    }
  }
  Panel<K> p;
  p.a = a;
  p.b = b;
  for (std::size_t j = 0; j < K; ++j) {
    p.value[j] = kron[j] * h;
    const double e = std::fabs((kron[j] - gauss[j]) * h);
    p.error[j] = std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    p.weighted_error += weights[j] * p.error[j];
  }
  return p;
}

/// Integrate every component of f over [a, b] (finite). `weights` selects
/// how much each component's error counts against `tol`; a zero weight
/// means the component is carried along but not controlled.
template <std::size_t K, class F>
Result<K> integrate(const F& f, double a, double b, double tol, const std::array<double, K>& weights,
                    int budget = kDefaultPanelBudget) {
  Result<K> out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel<K>> heap;
  heap.push(gauss_kronrod_panel<K>(f, a, b, weights));
  double total_err = heap.top().weighted_error;
  int panels = 1;
  while (!(total_err <= tol) && panels < budget) {
    Panel<K> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    heap.pop();
    auto left = gauss_kronrod_panel<K>(f, worst.a, mid, weights);
    auto right = gauss_kronrod_panel<K>(f, mid, worst.b, weights);
    total_err += left.weighted_error + right.weighted_error - worst.weighted_error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++panels;
    // Re-sum occasionally so cancellation in the running total does not drift.
    if (panels % 1024 == 0) {
      auto copy = heap;
      double s = 0.0;
      while (!copy.empty()) {
        s += copy.top().weighted_error;
        copy.pop();
      }
      total_err = s;
    }
  }
  std::array<detail::Sum, K> sums{}, errs{};
  double final_err = 0.0;
  while (!heap.empty()) {
    const auto& p = heap.top();
    for (std::size_t j = 0; j < K; ++j) {
      sums[j].add(p.value[j]);
      errs[j].add(p.error[j]);
    }
    final_err += p.weighted_error;
    heap.pop();
  }
  for (std::size_t j = 0; j < K; ++j) {
    out.value[j] = sums[j].value();
    out.abs_error[j] = errs[j].value();
  }
  out.panels = panels;
  out.converged = final_err <= tol;
  return out;
}

/// Scalar convenience wrapper; throws numerical_error when the budget is exhausted.
template <class F>
double integrate_scalar(const F& f, double a, double b, double tol, double* abs_error = nullptr,
                        int budget = kDefaultPanelBudget) {
  auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate<1>(wrapped, a, b, tol, {1.0}, budget);
  if (!r.converged) throw numerical_error("integrate: panel budget exhausted");
  if (abs_error) *abs_error = r.abs_error[0];
  return r.value[0];
}

}  // namespace ratio_bounds::quadrature
