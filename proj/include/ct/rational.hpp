#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "ct/errors.hpp"
#include "ct/types.hpp"

// GMP rationals as an Eigen scalar: exact field arithmetic, no epsilon.
namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};
}  // namespace Eigen

namespace ct {

using Rational = mpq_class;
using RationalMatrix = DenseMatrix<Rational>;
using RationalVector = DenseVector<Rational>;

inline bool is_exact_integer(double v) {
  return std::isfinite(v) && std::nearbyint(v) == v && std::abs(v) <= 9007199254740992.0;
}

// Exact value of a finite binary double (every finite double is rational).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw NonRepresentable("rational_from_double: value is not finite");
  return Rational(v);
}

// Parse decimal text ("-12", "0.1", "2.5e-3") into the rational it denotes,
// so "0.1" becomes 1/10 rather than the nearest double.
inline Rational rational_from_decimal(std::string_view text) {
  const auto fail = [&](const char* why) -> void {
    throw NonRepresentable(std::string("rational_from_decimal: ") + why + " in '" +
                           std::string(text) + "'");
  };
  std::size_t pos = 0;
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  std::size_t end = text.size();
  while (end > pos && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
  bool negative = false;
  if (pos < end && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_len = 0;
  bool any_digit = false;
  while (pos < end && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    any_digit = true;
  }
  if (pos < end && text[pos] == '.') {
    ++pos;
    while (pos < end && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      ++frac_len;
      any_digit = true;
    }
  }
  if (!any_digit) fail("no digits");
  long exp10 = 0;
  if (pos < end && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < end && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    bool exp_digit = false;
    long val = 0;
    while (pos < end && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      val = val * 10 + (text[pos] - '0');
      if (val > 1000000) fail("exponent out of range");
      ++pos;
      exp_digit = true;
    }
    if (!exp_digit) fail("empty exponent");
    exp10 = exp_neg ? -val : val;
  }
  if (pos != end) fail("trailing characters");

  mpz_class numerator(digits, 10);
  const long power = exp10 - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                static_cast<unsigned long>(power >= 0 ? power : -power));
  Rational q = power >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace ct
