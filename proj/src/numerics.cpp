// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/numerics.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include "mertens/errors.hpp"

namespace mertens {

PrecisionContext::PrecisionContext(unsigned bits) : bits_(bits) {
  if (bits < 64) {
    throw DomainError("precision must be at least 64 bits, got " + std::to_string(bits));
  }
}

// ---------------------------------------------------------------------------
// BigReal

BigReal::BigReal(mpfr_prec_t prec) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(const BigReal& other) : exact_(other.exact_) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept : exact_(other.exact_) {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
    exact_ = other.exact_;
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  exact_ = other.exact_;
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

namespace {

// [-]digits[.digits]
bool valid_decimal_syntax(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && text[i] == '-') ++i;
  std::size_t int_digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    ++i;
    ++int_digits;
  }
  if (int_digits == 0) return false;
  if (i == text.size()) return true;
  if (text[i] != '.') return false;
  ++i;
  std::size_t frac_digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    ++i;
    ++frac_digits;
  }
  return frac_digits > 0 && i == text.size();
}

}  // namespace

BigReal BigReal::from_decimal(std::string_view text, mpfr_prec_t prec) {
  if (!valid_decimal_syntax(text)) {
    throw ParseError("malformed decimal '" + std::string(text) + "'");
  }
  BigReal r(prec);
  const std::string s(text);
  char* end = nullptr;
  const int t = mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  r.exact_ = (t == 0);
  return r;
}

BigReal BigReal::from_integer(const Integer& value, mpfr_prec_t prec) {
  BigReal r(prec);
  r.note_ternary(mpfr_set_z(r.value_, value.get_mpz_t(), MPFR_RNDN));
  return r;
}

BigReal BigReal::from_long(long value, mpfr_prec_t prec) {
  BigReal r(prec);
  r.note_ternary(mpfr_set_si(r.value_, value, MPFR_RNDN));
  return r;
}

BigReal BigReal::from_ratio(long num, long den, mpfr_prec_t prec) {
  BigReal r = from_long(num, prec);
  r.note_ternary(mpfr_div_si(r.value_, r.value_, den, MPFR_RNDN));
  return r;
}

BigReal BigReal::rounded(mpfr_prec_t prec) const {
  BigReal r(prec);
  r.exact_ = exact_;
  r.note_ternary(mpfr_set(r.value_, value_, MPFR_RNDN));
  return r;
}

long BigReal::exponent() const {
  if (mpfr_zero_p(value_)) return 0;
  return mpfr_get_exp(value_);
}

std::string BigReal::to_decimal(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  mpfr_exp_t e10 = 0;
  char* raw = mpfr_get_str(nullptr, &e10, 10, static_cast<std::size_t>(std::max(digits, 1)), value_, MPFR_RNDN);
  std::string s(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  // value = 0.s * 10^e10
  std::string out;
  const long len = static_cast<long>(s.size());
  if (e10 <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-e10), '0') + s;
  } else if (e10 >= len) {
    out = s + std::string(static_cast<std::size_t>(e10 - len), '0');
  } else {
    out = s.substr(0, static_cast<std::size_t>(e10)) + "." + s.substr(static_cast<std::size_t>(e10));
  }
  return sign + out;
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  exact_ = exact_ && rhs.exact_;
  note_ternary(mpfr_add(value_, value_, rhs.value_, MPFR_RNDN));
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  exact_ = exact_ && rhs.exact_;
  note_ternary(mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN));
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  exact_ = exact_ && rhs.exact_;
  note_ternary(mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN));
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  exact_ = exact_ && rhs.exact_;
  note_ternary(mpfr_div(value_, value_, rhs.value_, MPFR_RNDN));
  return *this;
}

namespace {

template <typename Op>
BigReal binary(const BigReal& a, const BigReal& b, Op op) {
  BigReal r(std::max(a.precision(), b.precision()));
  r.set_exact(a.exact() && b.exact());
  r.note_ternary(op(r.get(), a.get(), b.get(), MPFR_RNDN));
  return r;
}

template <typename Op>
BigReal unary(const BigReal& a, Op op) {
  BigReal r(a.precision());
  r.set_exact(a.exact());
  r.note_ternary(op(r.get(), a.get(), MPFR_RNDN));
  return r;
}

}  // namespace

BigReal operator+(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_add); }
BigReal operator-(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_sub); }
BigReal operator*(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_mul); }
BigReal operator/(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_div); }
BigReal operator-(const BigReal& a) { return unary(a, mpfr_neg); }

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal sqrt(const BigReal& x) { return unary(x, mpfr_sqrt); }
BigReal exp(const BigReal& x) { return unary(x, mpfr_exp); }
BigReal log(const BigReal& x) { return unary(x, mpfr_log); }
BigReal cos(const BigReal& x) { return unary(x, mpfr_cos); }
BigReal abs(const BigReal& x) { return unary(x, mpfr_abs); }

BigReal ldexp(const BigReal& x, long k) {
  BigReal r(x.precision());
  r.set_exact(x.exact());
  r.note_ternary(mpfr_mul_2si(r.get(), x.get(), k, MPFR_RNDN));
  return r;
}

const BigReal& pi_constant(mpfr_prec_t prec) {
  static std::shared_mutex mutex;
  static std::map<mpfr_prec_t, std::unique_ptr<BigReal>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(prec); it != cache.end()) return *it->second;
  }
  auto value = std::make_unique<BigReal>(prec);
  mpfr_const_pi(value->get(), MPFR_RNDN);
  value->mark_inexact();
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(prec, std::move(value));
  return *it->second;
}

BigReal two_pi(mpfr_prec_t prec) { return ldexp(pi_constant(prec), 1); }

std::size_t bit_length(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

// ---------------------------------------------------------------------------
// Decimal

namespace {

Integer pow10(unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  if (!valid_decimal_syntax(text)) {
    throw ParseError("malformed decimal '" + std::string(text) + "'");
  }
  Decimal d;
  std::string digits;
  digits.reserve(text.size());
  bool negative = false;
  bool after_point = false;
  for (char c : text) {
    if (c == '-') {
      negative = true;
    } else if (c == '.') {
      after_point = true;
    } else {
      digits.push_back(c);
      if (after_point) ++d.scale;
    }
  }
  d.mantissa.set_str(digits, 10);
  if (negative) d.mantissa = -d.mantissa;
  return d;
}

std::string Decimal::to_string() const {
  Integer mag = abs(mantissa);
  std::string s = mag.get_str(10);
  if (scale > 0) {
    if (s.size() <= scale) s.insert(0, scale - s.size() + 1, '0');
    s.insert(s.size() - scale, ".");
  }
  return (mantissa < 0 ? "-" : "") + s;
}

unsigned Decimal::significant_digits() const {
  if (mantissa == 0) return 0;
  return static_cast<unsigned>(Integer(abs(mantissa)).get_str(10).size());
}

BigReal Decimal::to_big_real(mpfr_prec_t prec) const {
  BigReal r = BigReal::from_integer(mantissa, std::max<mpfr_prec_t>(prec, bit_length(mantissa) + 1));
  if (scale > 0) {
    BigReal out(prec);
    out.note_ternary(mpfr_div_z(out.get(), r.get(), pow10(scale).get_mpz_t(), MPFR_RNDN));
    // Dividing by 10^scale with scale > 0 is exact only if the quotient is dyadic;
    // MPFR's ternary already reports that.
    out.set_exact(out.exact() && r.exact());
    return out;
  }
  return r.rounded(prec);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  if (a.scale == b.scale) return cmp(a.mantissa, b.mantissa) <=> 0;
  if (a.scale < b.scale) {
    const Integer lhs = a.mantissa * pow10(b.scale - a.scale);
    return cmp(lhs, b.mantissa) <=> 0;
  }
  const Integer rhs = b.mantissa * pow10(a.scale - b.scale);
  return cmp(a.mantissa, rhs) <=> 0;
}

// ---------------------------------------------------------------------------
// Dyadic

Dyadic dyadic_value(const Integer& z, unsigned shift) { return Dyadic{z, shift}; }

std::string Dyadic::to_decimal() const {
  Integer five_pow;
  mpz_ui_pow_ui(five_pow.get_mpz_t(), 5, shift);
  Decimal d{numerator * five_pow, shift};
  while (d.scale > 0 && mpz_divisible_ui_p(d.mantissa.get_mpz_t(), 10)) {
    d.mantissa /= 10;
    --d.scale;
  }
  return d.to_string();
}

Dyadic Dyadic::parse(std::string_view text, unsigned shift) {
  const Decimal d = Decimal::parse(text);
  Integer scaled = d.mantissa << shift;
  const Integer den = pow10(d.scale);
  if (!mpz_divisible_p(scaled.get_mpz_t(), den.get_mpz_t())) {
    throw ParseError("'" + std::string(text) + "' is not a multiple of 2^-" + std::to_string(shift));
  }
  mpz_divexact(scaled.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  return Dyadic{scaled, shift};
}

Dyadic Dyadic::parse(std::string_view text) {
  const Decimal d = Decimal::parse(text);
  Integer five_pow;
  mpz_ui_pow_ui(five_pow.get_mpz_t(), 5, d.scale);
  if (!mpz_divisible_p(d.mantissa.get_mpz_t(), five_pow.get_mpz_t())) {
    throw ParseError("'" + std::string(text) + "' is not a dyadic rational");
  }
  Dyadic r{d.mantissa / five_pow, d.scale};
  while (r.shift > 0 && mpz_even_p(r.numerator.get_mpz_t())) {
    r.numerator /= 2;
    --r.shift;
  }
  return r;
}

BigReal Dyadic::to_big_real(mpfr_prec_t min_prec) const {
  const mpfr_prec_t prec = std::max<mpfr_prec_t>(min_prec, static_cast<mpfr_prec_t>(bit_length(numerator)) + 1);
  return ldexp(BigReal::from_integer(numerator, prec), -static_cast<long>(shift));
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const Integer lhs = a.numerator << b.shift;
  const Integer rhs = b.numerator << a.shift;
  return cmp(lhs, rhs) <=> 0;
}

// ---------------------------------------------------------------------------
// Round-off primitives

Integer floor_scale(const BigReal& x, long bits) {
  const mpfr_prec_t prec = x.precision();
  if (!x.exact()) {
    const long needed = bits + std::max(x.exponent(), 0L) + static_cast<long>(PrecisionContext::kGuardBits);
    if (prec < needed) {
      throw PrecisionError("floor_scale: " + std::to_string(prec) + " bits cannot resolve floor(x*2^" +
                           std::to_string(bits) + "), need " + std::to_string(needed));
    }
  }
  BigReal t = ldexp(x, bits);
  Integer f;
  mpfr_get_z(f.get_mpz_t(), t.get(), MPFR_RNDD);
  if (!x.exact() && !t.is_zero()) {
    // Distance from t to the nearest integer must exceed the error bound
    // |t| * 2^-(prec - guard).
    BigReal frac(prec + 2);
    mpfr_sub_z(frac.get(), t.get(), f.get_mpz_t(), MPFR_RNDN);
    BigReal dist = frac;
    BigReal up(prec + 2);
    mpfr_ui_sub(up.get(), 1, frac.get(), MPFR_RNDN);
    if (up < dist) dist = up;
    BigReal bound = ldexp(abs(t), -(static_cast<long>(prec) - static_cast<long>(PrecisionContext::kGuardBits)));
    if (dist <= bound) {
      throw PrecisionError("floor_scale: floor is ambiguous at " + std::to_string(prec) + " bits");
    }
  }
  return f;
}

BigReal centered_mod_2pi(const BigReal& x, const PrecisionContext& ctx) {
  const mpfr_prec_t out = ctx.working_bits();
  if (x.is_zero()) return BigReal(out);
  const long int_bits = std::max(x.exponent(), 0L);
  if (static_cast<long>(ctx.bits()) < int_bits + 64) {
    throw PrecisionError("centered_mod_2pi: " + std::to_string(ctx.bits()) + " bits cannot reduce an argument of " +
                         std::to_string(int_bits) + " integer bits");
  }
  const mpfr_prec_t p = std::max(out, x.precision()) + int_bits + 16;
  const BigReal period = two_pi(p);
  BigReal q(p);
  mpfr_div(q.get(), x.get(), period.get(), MPFR_RNDN);
  Integer k;
  mpfr_get_z(k.get_mpz_t(), q.get(), MPFR_RNDN);

  BigReal r(out);
  if (k == 0) {
    r = x.rounded(out);
  } else {
    BigReal multiple(p + static_cast<mpfr_prec_t>(bit_length(k)) + 1);
    mpfr_mul_z(multiple.get(), period.get(), k.get_mpz_t(), MPFR_RNDN);
    BigReal wide(p);
    mpfr_sub(wide.get(), x.get(), multiple.get(), MPFR_RNDN);
    r = wide.rounded(out);
    r.mark_inexact();
  }
  const BigReal& pi = pi_constant(out);
  if (r > pi) {
    r -= two_pi(out);
  } else if (r <= -pi) {
    r += two_pi(out);
  }
  return r;
}

}  // namespace mertens
