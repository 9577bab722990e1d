#pragma once

// Log-gamma with a certified Binet remainder, falling factorials and
// the increment identities built on them.
//
// Everything here is carried in the log domain. The remainder
//   R(x) = log Gamma(x) - [log sqrt(2 pi) + (x - 1/2) log x - x]
// is computed directly (never as a difference of two large numbers for
// x >= kStirlingShift), so its bracket 1/(12x+1) < R(x) < 1/(12x) can be
// checked even where log Gamma(x) is of order 1e7.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ratio_bounds/core.hpp"

namespace ratio_bounds::specfun {

struct LogGammaValue {
  double x = 0.0;
  double log_gamma = 0.0;
  double remainder = 0.0;  // Binet remainder R(x)
};

struct FallingFactorial {
  double a = 0.0;
  std::int64_t m = 0;
  double log_value = 0.0;  // log |[a]_m|, meaningless when is_zero
  bool is_zero = false;
  bool negative = false;   // sign of [a]_m when not zero
};

namespace detail {

// B_{2j} / (2j (2j - 1)), j = 1..10.
inline constexpr std::array<double, 10> kStirlingCoefficients = {
    1.0 / 12.0,           -1.0 / 360.0,        1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,   1.0 / 156.0,      -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0};

// (x - 1/2) log x - x, the non-constant part of the Stirling main term.
inline double stirling_main(double x) { return (x - 0.5) * std::log(x) - x; }

// Truncated asymptotic series for R(y); caller guarantees y is large.
template <int Terms>
double stirling_series(double y) {
  static_assert(Terms >= 1 && Terms <= 10);
  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (int j = Terms - 1; j >= 0; --j) acc = acc * inv2 + kStirlingCoefficients[j];
  return acc * inv;
}

inline void check_gamma_argument(double x) {
  require(is_positive_finite(x), "log_gamma: argument must be positive and finite");
}

}  // namespace detail

// Arguments below this are shifted up before the asymptotic series is used.
inline constexpr double kStirlingShift = 30.0;
inline constexpr double kOracleShift = 50.0;

/// log Gamma(x) together with its Binet remainder.
///
/// For x < kStirlingShift the remainder is carried up by the recursion
/// R(x) = R(x+1) + (x + 1/2) log1p(1/x) - 1, whose terms are all small, so
/// no large terms cancel. Five series terms at y >= 30 leave a truncation
/// error < 1e-19.
inline LogGammaValue log_gamma(double x) {
  detail::check_gamma_argument(x);
  LogGammaValue out;
  out.x = x;
  if (x >= kStirlingShift) {
    out.remainder = detail::stirling_series<5>(x);
  } else {
    const int shift = static_cast<int>(std::ceil(kStirlingShift - x));
    double acc = detail::stirling_series<5>(x + shift);
    for (int i = shift - 1; i >= 0; --i) {
      const double xi = x + i;
      acc += (xi + 0.5) * std::log1p(1.0 / xi) - 1.0;
    }
    out.remainder = acc;
  }
  out.log_gamma = kLogSqrt2Pi + detail::stirling_main(x) + out.remainder;
  return out;
}

/// Binet remainder R(x) alone.
inline double binet_remainder(double x) { return log_gamma(x).remainder; }

/// Independent log Gamma used as a cross-check in tests and sweeps.
///
/// Shares no truncation depth with log_gamma(): the argument is raised to
/// y >= 50 by the recursion log Gamma(x) = log Gamma(x+1) - log x (one log
/// per step) and the series is cut after four terms.
inline double log_gamma_oracle(double x) {
  detail::check_gamma_argument(x);
  double correction = 0.0;
  double y = x;
  while (y < kOracleShift) {
    correction += std::log(y);
    y += 1.0;
  }
  return kLogSqrt2Pi + detail::stirling_main(y) + detail::stirling_series<4>(y) - correction;
}

/// log of the falling factorial [a]_m = a (a-1) ... (a-m+1), [a]_0 = 1.
inline FallingFactorial log_falling_factorial(double a, std::int64_t m) {
  require(m >= 0, "log_falling_factorial: m must be non-negative");
  FallingFactorial f;
  f.a = a;
  f.m = m;
  for (std::int64_t i = 0; i < m; ++i) {
    const double factor = a - static_cast<double>(i);
    if (factor == 0.0) {
      f.is_zero = true;
      f.log_value = kNegInf;
      f.negative = false;
      return f;
    }
    if (factor < 0.0) f.negative = !f.negative;
    f.log_value += std::log(std::fabs(factor));
  }
  return f;
}

/// log([a]_m / a^m) = sum_{i<m} log(1 - i/a) for a > 0.
///
/// Returns -inf when a factor vanishes. Accurate for large m where the
/// plain falling factorial would overflow or cancel.
inline double log_falling_ratio(double a, std::int64_t m) {
  require(is_positive_finite(a), "log_falling_ratio: a must be positive");
  require(m >= 0, "log_falling_ratio: m must be non-negative");
  double acc = 0.0;
  for (std::int64_t i = 1; i < m; ++i) {
    const double t = static_cast<double>(i) / a;
    if (t >= 1.0) return kNegInf;
    acc += std::log1p(-t);
  }
  return acc;
}

/// s_n in log(n!) = log sqrt(2 pi) + (n + 1/2) log(n + 1) - n - 1 + s_n.
///
/// Algebraically s_n = R(n + 1).
inline double stirling_robbins_s(std::int64_t n) {
  require(n >= 0, "stirling_robbins_s: n must be non-negative");
  return binet_remainder(static_cast<double>(n) + 1.0);
}

inline Bracket stirling_robbins_bracket(std::int64_t n) {
  const double m = 12.0 * (static_cast<double>(n) + 1.0);
  return {1.0 / (m + 1.0), 1.0 / m};
}

inline Bracket binet_bracket(double x) { return {1.0 / (12.0 * x + 1.0), 1.0 / (12.0 * x)}; }

/// s(a,b) = h(b) - h(a) - [(b - 1/2) log b - (a - 1/2) log a - (b - a)],
/// h = log Gamma, for 0 < a < b. Equal to R(b) - R(a).
inline double log_gamma_increment(double a, double b) {
  require(is_positive_finite(a) && is_positive_finite(b), "log_gamma_increment: a, b must be positive");
  require(a < b, "log_gamma_increment: requires a < b");
  return binet_remainder(b) - binet_remainder(a);
}

// The upper side is min(0, -(b-a)/(12ab) + 1/(144 a^2)); the numerator is
// (b - a), which is what R(a) - R(b) > 1/(12a+1) - 1/(12b+1) yields.
inline Bracket log_gamma_increment_bracket(double a, double b) {
  const double base = -(b - a) / (12.0 * a * b);
  return {base, std::min(0.0, base + 1.0 / (144.0 * a * a))};
}

/// log Gamma(b) - log Gamma(a) for a, b > 0, via the remainder increment so
/// that no large log Gamma values cancel.
inline double log_gamma_ratio(double b, double a) {
  if (a == b) return 0.0;
  const double main = detail::stirling_main(b) - detail::stirling_main(a);
  return main + (binet_remainder(b) - binet_remainder(a));
}

/// h(x + 1/2) - h(x) - (log x)/2 for x > 0.
inline double half_step_increment(double x) {
  require(is_positive_finite(x), "half_step_increment: x must be positive");
  return x * std::log1p(0.5 / x) - 0.5 + (binet_remainder(x + 0.5) - binet_remainder(x));
}

/// Bracket for half_step_increment; the lower side is -inf when 4x^2 - 1 <= 0.
inline Bracket half_step_bracket(double x) {
  Bracket b;
  b.upper = -1.0 / (8.0 * (x + 0.5));
  const double q = 4.0 * x * x - 1.0;
  b.lower = q > 0.0 ? -1.0 / (8.0 * x) - 1.0 / (24.0 * x * q) : kNegInf;
  return b;
}

// ---------------------------------------------------------------------------
// Elementary log-ratio inequalities, with x, a > 0 and b > -x.

/// (x + b) log(x / (x + a)).
inline double weighted_log_ratio(double x, double a, double b) {
  return -(x + b) * std::log1p(a / x);
}

/// -a + a(a - 2b)/(2x + a) - 2a^3 (x + b) / (3 (2x + a)^3).
inline double weighted_log_ratio_cubic_bound(double x, double a, double b) {
  const double s = 2.0 * x + a;
  return -a + a * (a - 2.0 * b) / s - 2.0 * a * a * a * (x + b) / (3.0 * s * s * s);
}

/// -a + a(a - 2b)/(2x + a).
inline double weighted_log_ratio_quadratic_bound(double x, double a, double b) {
  return -a + a * (a - 2.0 * b) / (2.0 * x + a);
}

/// Lower bound for (x + a/2) log(x/(x + a)): -a - a^3 / (12 x (x + a)).
inline double centered_log_ratio_lower_bound(double x, double a) {
  return -a - a * a * a / (12.0 * x * (x + a));
}

/// 1 - sqrt(1 - delta) for delta in [0, 1], without cancellation.
inline double one_minus_sqrt_complement(double delta) {
  return delta / (1.0 + std::sqrt(1.0 - delta));
}

/// delta / (2 - delta) = delta/2 + delta^2 / (4 - 2 delta).
inline double delta_over_two_minus_delta(double delta) { return delta / (2.0 - delta); }

}  // namespace ratio_bounds::specfun
