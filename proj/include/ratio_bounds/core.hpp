#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ratio_bounds {

// Invalid parameters (non-positive shapes, n > N, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine could not reach its target (quadrature budget,
// crossing isolation, root finding).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sampler was configured with an envelope that is provably too small.
class configuration_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested pair or proposal has no generator.
class unsupported_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
inline constexpr double kLogPi = 1.14472988584940017414342735135305;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline void require(bool ok, const std::string& what) {
  if (!ok) throw domain_error(what);
}

inline bool is_positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

/// A non-negative quantity that may be +infinity.
///
/// Infinity is a separate state rather than a floating infinity so that
/// callers have to branch on it explicitly.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  // Throws when infinite; use value_or() in sweeps.
  double value() const {
    if (infinite_) throw std::logic_error("ExtendedReal: value() on infinity");
    return value_;
  }
  constexpr double value_or(double fallback) const { return infinite_ ? fallback : value_; }

  // Floating view at API edges (CSV, printing).
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Two-sided bracket lower < value < upper; either side may be infinite.
struct Bracket {
  double lower = kNegInf;
  double upper = std::numeric_limits<double>::infinity();

  bool strictly_contains(double v) const { return lower < v && v < upper; }
  bool contains(double v, double slack = 0.0) const {
    return lower - slack <= v && v <= upper + slack;
  }
};

}  // namespace ratio_bounds
