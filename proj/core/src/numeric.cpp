#include "riskpool/numeric.hpp"

#include <charconv>
#include <climits>
#include <limits>
#include <system_error>

namespace riskpool {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

mpz_class parse_integer(std::string_view text, std::string_view whole) {
  std::string_view digits = text;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) throw Error("malformed number '" + std::string(whole) + "'");
  mpz_class z(std::string(digits), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error("malformed number ''");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view rest = text;
  bool negative = false;
  if (rest.front() == '-' || rest.front() == '+') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = rest.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exponent > 4096 ||
        exponent < -4096) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    rest = rest.substr(0, e);
  }
  std::string digits;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = rest.substr(0, dot);
    std::string_view frac_part = rest.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) || (int_part.empty() && frac_part.empty())) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(rest)) throw Error("malformed number '" + std::string(text) + "'");
    digits = std::string(rest);
  }

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> exact_power(const Rational& base, const Rational& exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent > 0) return Rational(0);
    return std::nullopt;
  }
  const mpz_class& e_num = exponent.get_num();
  const mpz_class& e_den = exponent.get_den();
  if (!e_den.fits_ulong_p() || !e_num.fits_slong_p()) return std::nullopt;
  const unsigned long root = e_den.get_ui();
  const long raise = e_num.get_si();
  if (raise > 256 || raise < -256) return std::nullopt;
  if (base < 0 && root % 2 == 0) return std::nullopt;

  mpz_class num = base.get_num();
  mpz_class den = base.get_den();
  bool negative = num < 0;
  if (negative) num = -num;
  mpz_class num_root, den_root;
  if (mpz_root(num_root.get_mpz_t(), num.get_mpz_t(), root) == 0) return std::nullopt;
  if (mpz_root(den_root.get_mpz_t(), den.get_mpz_t(), root) == 0) return std::nullopt;
  if (negative) num_root = -num_root;

  const unsigned long magnitude = static_cast<unsigned long>(raise < 0 ? -raise : raise);
  mpz_class num_pow, den_pow;
  mpz_pow_ui(num_pow.get_mpz_t(), num_root.get_mpz_t(), magnitude);
  mpz_pow_ui(den_pow.get_mpz_t(), den_root.get_mpz_t(), magnitude);
  Rational result = raise < 0 ? Rational(den_pow, num_pow) : Rational(num_pow, den_pow);
  result.canonicalize();
  return result;
}

double power(double base, const Rational& exponent) {
  if (base == 0.0 && exponent > 0) return 0.0;
  return std::pow(base, exponent.get_d());
}

std::string NumTraits<double>::to_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

}  // namespace riskpool
