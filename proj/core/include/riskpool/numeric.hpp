#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riskpool {

/// Exact scalar used for certification runs.
using Rational = mpq_class;

enum class NumericMode { exact, floating };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Float-mode comparison thresholds.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

/// num/den in canonical form. mpq_class(num, den) alone is not canonical.
inline Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "3/4", "-2", "0.125" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form ("3" when the denominator is one).
std::string format_rational(const Rational& q);

/// Exact base^exponent when it is rational, otherwise nullopt.
/// 0^e is defined as 0 for every e > 0.
std::optional<Rational> exact_power(const Rational& base, const Rational& exponent);

double power(double base, const Rational& exponent);

template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr NumericMode mode = NumericMode::floating;

  static double from_rational(const Rational& q) { return q.get_d(); }
  static double to_double(double x) { return x; }
  static bool is_finite(double x) { return std::isfinite(x); }

  static double pow(double base, const Rational& exponent) { return power(base, exponent); }

  /// a >= b up to -1e-9 * max(1, |a|, |b|).
  static bool geq(double a, double b) {
    return a - b >= -kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  /// |a - b| within 1e-9 relative, 1e-12 absolute near zero.
  static bool eq(double a, double b) {
    return std::abs(a - b) <= std::max(kAbsTol, kRelTol * std::max(std::abs(a), std::abs(b)));
  }
  static bool gt(double a, double b) { return !geq(b, a); }

  static std::string to_string(double x);
  static void normalize(double&) {}
};

template <>
struct NumTraits<Rational> {
  static constexpr NumericMode mode = NumericMode::exact;

  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static bool is_finite(const Rational&) { return true; }

  static Rational pow(const Rational& base, const Rational& exponent) {
    auto r = exact_power(base, exponent);
    if (!r) {
      throw Error("exact mode: " + format_rational(base) + "^" + format_rational(exponent) +
                  " is irrational");
    }
    return *r;
  }

  static bool geq(const Rational& a, const Rational& b) { return a >= b; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool gt(const Rational& a, const Rational& b) { return a > b; }

  static std::string to_string(const Rational& x) { return format_rational(x); }
  static void normalize(Rational& x) { x.canonicalize(); }
};

template <class T>
concept Scalar = requires { NumTraits<T>::mode; };

}  // namespace riskpool
