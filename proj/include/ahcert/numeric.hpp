#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ahcert {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when two operands live over different numbers of sphere factors.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is asked to handle a representation it has no
/// closed form for (e.g. a dense class where a structured one is required).
class UnsupportedVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Violated precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Rational make_rational(const Integer& num, const Integer& den);

/// Canonical "p/q" rendering, lowest terms, q >= 1. Integers render as "p/1".
std::string format_rational(const Rational& q);
std::string format_integer(const Integer& z);

/// Accepts "p/q" or a bare integer "p". Decimal points, exponents and
/// zero denominators are rejected with std::invalid_argument.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Generalized binomial coefficient C(top, k) for any integer top, k >= 0.
Integer binomial(const Integer& top, unsigned long k);

Integer factorial(unsigned long k);

Rational abs(const Rational& q);

/// 2^-k as an exact rational.
Rational inverse_power_of_two(unsigned long k);

}  // namespace ahcert
