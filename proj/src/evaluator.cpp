// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

constexpr double kLog2Of10 = 3.321928094887362;

// gamma * y - psi with gamma = g / 10^k exact and y dyadic, reduced into
// (-pi, pi]. The product g * z is exact; only the division by 10^k and the
// reduction round.
BigReal reduced_phase(const Integer& g, const Integer& pow10k, unsigned k, const Dyadic& y, const BigReal& psi,
                      const PrecisionContext& ctx) {
  const mpfr_prec_t w = ctx.working_bits();
  const Integer product = g * y.numerator;
  if (product == 0) return centered_mod_2pi(-psi, ctx);
  const long int_bits = static_cast<long>(bit_length(product)) - static_cast<long>(y.shift) -
                        static_cast<long>(std::floor(k * kLog2Of10)) + 1;
  const mpfr_prec_t p = w + std::max(int_bits, 0L) + 16;
  const BigReal num = BigReal::from_integer(product, std::max<mpfr_prec_t>(p, bit_length(product) + 1));
  BigReal x(p);
  x.note_ternary(mpfr_div_z(x.get(), num.get(), pow10k.get_mpz_t(), MPFR_RNDN));
  x = ldexp(x, -static_cast<long>(y.shift));
  x -= psi;
  return centered_mod_2pi(x, ctx);
}

Integer power_of_ten(unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

double log2_abs(const Integer& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

}  // namespace

BigReal certification_threshold(mpfr_prec_t prec) {
  prec = std::max<mpfr_prec_t>(prec, 128);
  BigReal t = exp(BigReal::from_long(-40, prec));
  t += BigReal::from_long(1, prec);
  return t;
}

HpEvaluator::HpEvaluator(const ZeroTable& table, const PrecisionContext& ctx, const EvalOptions& options)
    : ctx_(ctx), options_(options), declared_digits_(table.declared_digits) {
  if (options.gamma_cut.sign() <= 0 || options.gamma_cut > Decimal{kGammaLimit, 0}) {
    throw DomainError("gamma_cut must lie in (0, " + std::to_string(kGammaLimit) + "]");
  }
  if (options.require_coverage && (table.size() == 0 || table.max_gamma() < options.gamma_cut)) {
    throw CoverageError("zero table stops at gamma = " +
                        (table.size() ? table.max_gamma().to_string() : std::string("<empty>")) +
                        ", below the cut " + options.gamma_cut.to_string());
  }
  const mpfr_prec_t w = ctx.working_bits();
  unsigned max_scale = 0;
  for (const ZeroRecord& r : table.records) {
    if (!(r.gamma < options.gamma_cut)) continue;
    Term t{r.gamma.mantissa, r.gamma.scale, gaussian_weight(r.gamma, w) * r.alpha.to_big_real(w),
           r.psi.to_big_real(w), r.gamma.to_big_real(w + 64)};
    t.weight = t.weight.rounded(w);
    max_scale = std::max(max_scale, r.gamma.scale);
    terms_.push_back(std::move(t));
  }
  pow10_.reserve(max_scale + 1);
  for (unsigned k = 0; k <= max_scale; ++k) pow10_.push_back(power_of_ten(k));
}

void HpEvaluator::check_table_digits(const Dyadic& y) const {
  if (terms_.empty() || y.numerator == 0) return;
  double gamma_bits = 0;
  for (const Term& t : terms_) {
    gamma_bits = std::max(gamma_bits, log2_abs(t.gamma_mantissa) - t.gamma_scale * kLog2Of10);
  }
  const double needed = std::ceil(gamma_bits + log2_abs(y.numerator) - y.shift) + 40;
  if (declared_digits_ * kLog2Of10 < needed) {
    throw PrecisionError("table digits (" + std::to_string(declared_digits_) + ") cannot resolve gamma * y for y = " +
                         y.to_decimal() + "; need " + std::to_string(static_cast<long>(needed)) + " bits");
  }
}

BigReal HpEvaluator::term(const Term& t, const Dyadic& y) const {
  const BigReal r = reduced_phase(t.gamma_mantissa, pow10_[t.gamma_scale], t.gamma_scale, y, t.psi, ctx_);
  return t.weight * cos(r);
}

BigReal HpEvaluator::sum(const std::vector<BigReal>& values) const {
  BigReal acc(ctx_.working_bits());
  for (const BigReal& v : values) acc += v;
  return ldexp(acc, 1);
}

std::vector<BigReal> HpEvaluator::terms(const Dyadic& y) const {
  check_table_digits(y);
  const long count = static_cast<long>(terms_.size());
  std::vector<BigReal> out(terms_.size(), BigReal(ctx_.working_bits()));
  if (!options_.parallel) {
    for (long i = 0; i < count; ++i) out[i] = term(terms_[i], y);
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = term(terms_[i], y);
    } catch (...) {
#pragma omp critical(mertens_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

BigReal HpEvaluator::operator()(const Dyadic& y) const { return sum(terms(y)); }

BigReal HpEvaluator::evaluate_real(const BigReal& y) const {
  std::vector<BigReal> values;
  values.reserve(terms_.size());
  for (const Term& t : terms_) {
    BigReal x = t.gamma * y;
    x -= t.psi;
    values.push_back(t.weight * cos(centered_mod_2pi(x, ctx_)));
  }
  return sum(values);
}

BigReal h_p_exact(const ZeroTable& table, const Dyadic& y, const PrecisionContext& ctx, const EvalOptions& options) {
  return HpEvaluator(table, ctx, options)(y);
}

BigReal h_p_real(const ZeroTable& table, const BigReal& y, const PrecisionContext& ctx, const EvalOptions& options) {
  return HpEvaluator(table, ctx, options).evaluate_real(y);
}

std::vector<BigReal> centered_residues(const ZeroTable& table, const Dyadic& y, std::size_t n,
                                       const PrecisionContext& ctx) {
  if (n > table.size()) {
    throw TableTooSmallError("table has " + std::to_string(table.size()) + " zeros, n = " + std::to_string(n));
  }
  const mpfr_prec_t w = ctx.working_bits();
  std::vector<BigReal> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ZeroRecord& r = table[i];
    out.push_back(reduced_phase(r.gamma.mantissa, power_of_ten(r.gamma.scale), r.gamma.scale, y,
                                r.psi.to_big_real(w), ctx));
  }
  return out;
}

BigReal h_p_approx(const ZeroTable& table, const Dyadic& y, std::size_t n, const PrecisionContext& ctx) {
  const std::vector<BigReal> residues = centered_residues(table, y, n, ctx);
  const mpfr_prec_t w = ctx.working_bits();
  const BigReal one = BigReal::from_long(1, w);
  BigReal acc(w);
  for (std::size_t i = 0; i < n; ++i) acc += table[i].alpha.to_big_real(w) * (one - residues[i] * residues[i]);
  return ldexp(acc, 1);
}

namespace {

std::string render_bound(const BigReal& value, mpfr_rnd_t mode) {
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, 4, value.get(), mode);
  const std::string d(digits);
  mpfr_free_str(digits);
  return "x < exp(" + d.substr(0, 1) + "." + d.substr(1) + " × 10^" + std::to_string(e - 1) + ")";
}

}  // namespace

PintzBound pintz_bound(const Dyadic& y, const PrecisionContext& ctx) {
  if (!in_certifiable_range(y)) throw DomainError("y = " + y.to_decimal() + " is outside [e^7, e^50000]");
  const mpfr_prec_t w = ctx.working_bits();
  const BigReal yr = y.to_big_real(w);
  BigReal root(w);
  mpfr_sqrt(root.get(), yr.get(), MPFR_RNDU);
  BigReal bound(std::max(w, yr.precision()));
  mpfr_add(bound.get(), yr.get(), root.get(), MPFR_RNDU);
  bound.mark_inexact();
  PintzBound out{y, bound, render_bound(bound, MPFR_RNDU), render_bound(bound, MPFR_RNDZ)};
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return "certified";
    case Verdict::kNearMiss:
      return "near_miss";
    case Verdict::kFail:
      return "fail";
  }
  return "fail";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "certified") return Verdict::kCertified;
  if (text == "near_miss") return Verdict::kNearMiss;
  if (text == "fail") return Verdict::kFail;
  throw ParseError("unknown verdict '" + std::string(text) + "'");
}

double agreement_digits(const BigReal& a, const BigReal& b) {
  if (a == b) return std::numeric_limits<double>::infinity();
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  BigReal scale = std::max(abs(a).rounded(p), abs(b).rounded(p));
  if (scale < BigReal::from_long(1, p)) scale = BigReal::from_long(1, p);
  const BigReal rel = abs(a - b) / scale;
  BigReal l(p);
  mpfr_log10(l.get(), rel.get(), MPFR_RNDN);
  return -l.to_double();
}

Evaluation certify(const Dyadic& y, const ZeroTable& table, const PrecisionContext& work,
                   const PrecisionContext& verify, const CertifyOptions& options) {
  EvalOptions eval_options;
  eval_options.gamma_cut = options.gamma_cut;
  eval_options.require_coverage = options.require_coverage;

  Evaluation ev;
  ev.y = y;
  ev.gamma_cut = options.gamma_cut;
  ev.precision_bits = work.bits();
  ev.hp = h_p_exact(table, y, work, eval_options);
  if (options.external_tail) {
    ev.tail_bound = *options.external_tail;
  } else {
    TailOptions tail_options;
    tail_options.require_coverage = options.require_coverage;
    ev.tail_bound = tail_bound(table, options.gamma_cut, work, tail_options);
  }

  const mpfr_prec_t wp = work.working_bits();
  const BigReal threshold = certification_threshold(wp);
  if (!(abs(ev.hp) > threshold - ev.tail_bound)) {
    ev.verdict = Verdict::kFail;
    return ev;
  }

  BigReal verified = h_p_exact(table, y, verify, eval_options);
  const double agree = agreement_digits(ev.hp, verified);
  if (agree < options.agreement_digits) {
    throw DisagreementError("h_P(" + y.to_decimal() + ") at " + std::to_string(work.bits()) + " and " +
                            std::to_string(verify.bits()) + " bits agrees to only " + std::to_string(agree) +
                            " digits");
  }
  ev.hp_verify = verified;
  ev.precision_bits = verify.bits();

  const mpfr_prec_t vp = verify.working_bits();
  const BigReal vthreshold = certification_threshold(vp);
  const BigReal magnitude = abs(verified);
  const BigReal tail = ev.tail_bound.rounded(vp);
  if (magnitude - tail > vthreshold) {
    if (in_certifiable_range(y)) {
      ev.verdict = Verdict::kCertified;
      ev.bound = pintz_bound(y, work);
    } else {
      ev.verdict = Verdict::kNearMiss;
    }
  } else if (magnitude + tail > vthreshold) {
    ev.verdict = Verdict::kNearMiss;
  } else {
    ev.verdict = Verdict::kFail;
  }
  return ev;
}

Evaluation certify(const Candidate& candidate, const ZeroTable& table, const PrecisionContext& work,
                   const PrecisionContext& verify, const CertifyOptions& options) {
  return certify(candidate.y, table, work, verify, options);
}

}  // namespace mertens
