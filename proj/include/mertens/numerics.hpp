// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Arbitrary-precision reals (MPFR), exact decimals and dyadic rationals (GMP),
// and the two round-off primitives the pipeline is built on: floor_scale and
// centered_mod_2pi.

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mertens {

using Integer = mpz_class;

// Working precision of a computation. Every value produced under a context
// carries kGuardBits extra bits, so a value at MPFR precision p is trusted to
// a relative error of 2^-(p - kGuardBits).
class PrecisionContext {
 public:
  static constexpr unsigned kGuardBits = 64;
  static constexpr unsigned kDefaultBits = 1024;
  static constexpr unsigned kVerifyBits = 16384;

  explicit PrecisionContext(unsigned bits = kDefaultBits);

  unsigned bits() const { return bits_; }
  mpfr_prec_t working_bits() const { return static_cast<mpfr_prec_t>(bits_) + kGuardBits; }
  PrecisionContext doubled() const { return PrecisionContext(2 * bits_); }

 private:
  unsigned bits_;
};

// Value-semantic RAII wrapper around mpfr_t. Round-to-nearest-even
// throughout. `exact()` is true while every operation that produced the
// value returned a zero MPFR ternary, i.e. no rounding has happened yet.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t prec = 64);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  // Strict decimal syntax: [-]digits[.digits]. No exponent.
  static BigReal from_decimal(std::string_view text, mpfr_prec_t prec);
  static BigReal from_integer(const Integer& value, mpfr_prec_t prec);
  static BigReal from_long(long value, mpfr_prec_t prec);
  // a / b rounded once.
  static BigReal from_ratio(long num, long den, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  bool exact() const { return exact_; }
  void mark_inexact() { exact_ = false; }
  // Folds an MPFR ternary into the exactness flag.
  void note_ternary(int ternary) { exact_ = exact_ && ternary == 0; }
  void set_exact(bool e) { exact_ = e; }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  // Copy rounded to a different precision.
  BigReal rounded(mpfr_prec_t prec) const;

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  // Exponent e with |x| in [2^(e-1), 2^e); 0 for x == 0.
  long exponent() const;

  // Fixed-point rendering with `digits` significant digits, round to nearest.
  std::string to_decimal(int digits) const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t value_;
  bool exact_ = true;
};

BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal abs(const BigReal& x);
// x * 2^k, exact.
BigReal ldexp(const BigReal& x, long k);

// pi at the given MPFR precision. Computed once per precision level and
// shared; safe under concurrent first use.
const BigReal& pi_constant(mpfr_prec_t prec);
BigReal two_pi(mpfr_prec_t prec);

// Exact decimal number mantissa / 10^scale.
struct Decimal {
  Integer mantissa;
  unsigned scale = 0;

  static Decimal parse(std::string_view text);
  std::string to_string() const;
  // Count of significant digits as written (leading zeros excluded, trailing
  // zeros included).
  unsigned significant_digits() const;
  BigReal to_big_real(mpfr_prec_t prec) const;
  int sign() const { return sgn(mantissa); }

  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);
  friend bool operator==(const Decimal& a, const Decimal& b) { return (a <=> b) == 0; }
};

// Exact dyadic rational numerator / 2^shift.
struct Dyadic {
  Integer numerator;
  unsigned shift = 0;

  // Shortest terminating decimal rendering ("1", "0.806640625", "-0.0009765625").
  std::string to_decimal() const;
  // Exact conversion; fails unless value * 2^shift is an integer.
  static Dyadic parse(std::string_view text, unsigned shift);
  // Smallest shift that represents the decimal exactly.
  static Dyadic parse(std::string_view text);
  BigReal to_big_real(mpfr_prec_t min_prec = 64) const;
  int sign() const { return sgn(numerator); }

  // Value comparison (1024/2^10 == 1/2^0).
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a <=> b) == 0; }
  bool same_representation(const Dyadic& other) const {
    return shift == other.shift && numerator == other.numerator;
  }
};

Dyadic dyadic_value(const Integer& z, unsigned shift);

// floor(x * 2^bits), exact. Inexact inputs must carry enough precision for
// the floor to be unambiguous, otherwise PrecisionError.
Integer floor_scale(const BigReal& x, long bits);

// Representative of x modulo 2*pi in (-pi, pi], rounded to ctx.working_bits().
// Requires ctx.bits() >= 64 + bit length of the integer part of x.
BigReal centered_mod_2pi(const BigReal& x, const PrecisionContext& ctx);

std::size_t bit_length(const Integer& z);

}  // namespace mertens
