// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Evaluation of Pintz's sum
//
//   h_P(y) = 2 sum_{gamma < cut} alpha exp(-1.5e-6 gamma^2) cos(gamma y - psi)
//
// and of its lattice score 2 sum_{i <= n} alpha*_i (1 - r_i^2), r_i the
// centred residue of gamma*_i y - psi*_i. |h_P(y)| > 1 + e^-40 with
// y in [e^7, e^50000] gives a Mertens counterexample below exp(y + sqrt(y)).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mertens/mertens_lattice.hpp"
#include "mertens/numerics.hpp"
#include "mertens/zeta_data.hpp"

namespace mertens {

// 1 + e^-40 at the given precision (at least 128 bits).
BigReal certification_threshold(mpfr_prec_t prec);

struct EvalOptions {
  // Terms with gamma < gamma_cut are summed.
  Decimal gamma_cut = Decimal{kGammaLimit, 0};
  // Require the table to reach gamma_cut (off only for synthetic tables).
  bool require_coverage = true;
  // OpenMP kernel; the serial kernel yields bitwise identical results.
  bool parallel = true;
};

// A table prepared for repeated evaluation at one precision: gamma kept as an
// exact scaled integer, weight alpha * exp(-1.5e-6 gamma^2) and psi rounded
// to ctx.working_bits(). Immutable after construction; safe to share.
class HpEvaluator {
 public:
  HpEvaluator(const ZeroTable& table, const PrecisionContext& ctx, const EvalOptions& options = {});

  BigReal operator()(const Dyadic& y) const;
  // y given as an MPFR value; the phase inherits its rounding error.
  BigReal evaluate_real(const BigReal& y) const;

  // Individual weighted terms alpha w cos(gamma y - psi), in table order.
  std::vector<BigReal> terms(const Dyadic& y) const;

  std::size_t term_count() const { return terms_.size(); }
  const PrecisionContext& context() const { return ctx_; }

 private:
  struct Term {
    Integer gamma_mantissa;
    unsigned gamma_scale;  // gamma = mantissa / 10^scale
    BigReal weight;
    BigReal psi;
    BigReal gamma;  // rounded, for evaluate_real
  };

  void check_table_digits(const Dyadic& y) const;
  BigReal term(const Term& t, const Dyadic& y) const;
  BigReal sum(const std::vector<BigReal>& values) const;

  PrecisionContext ctx_;
  EvalOptions options_;
  unsigned declared_digits_;
  std::vector<Term> terms_;
  std::vector<Integer> pow10_;  // pow10_[k] = 10^k
};

BigReal h_p_exact(const ZeroTable& table, const Dyadic& y, const PrecisionContext& ctx,
                  const EvalOptions& options = {});
BigReal h_p_real(const ZeroTable& table, const BigReal& y, const PrecisionContext& ctx,
                 const EvalOptions& options = {});

// Centred residues of gamma*_i y - psi*_i for the first n records.
std::vector<BigReal> centered_residues(const ZeroTable& table_by_alpha, const Dyadic& y, std::size_t n,
                                       const PrecisionContext& ctx);
BigReal h_p_approx(const ZeroTable& table_by_alpha, const Dyadic& y, std::size_t n, const PrecisionContext& ctx);

struct PintzBound {
  Dyadic y;
  BigReal log_bound;       // y + sqrt(y), rounded up
  std::string rendered;    // "x < exp(1.018 × 10^29)", 4 digits rounded up
  std::string truncated;   // same with the 4 digits truncated
};

PintzBound pintz_bound(const Dyadic& y, const PrecisionContext& ctx);

enum class Verdict { kCertified, kNearMiss, kFail };
std::string to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

struct Evaluation {
  Dyadic y;
  BigReal hp;                        // work-precision value
  std::optional<BigReal> hp_verify;  // present when the threshold test ran at verify precision
  unsigned precision_bits = 0;       // precision of the deciding value
  Decimal gamma_cut;
  BigReal tail_bound;
  Verdict verdict = Verdict::kFail;
  std::optional<PintzBound> bound;
};

struct CertifyOptions {
  Decimal gamma_cut = Decimal{kGammaLimit, 0};
  bool require_coverage = true;
  // Replaces tail_bound(table, gamma_cut) when supplied.
  std::optional<BigReal> external_tail;
  // Work and verify values must agree to this many decimal digits.
  int agreement_digits = 50;
};

// certified: verified |h_P| - tail > 1 + e^-40 and y in [e^7, e^50000].
// near_miss: the threshold is cleared but y is outside the interval, or the
//            tail bound makes the comparison undecidable.
// fail:      otherwise.
// Throws DisagreementError when work and verify values differ.
Evaluation certify(const Dyadic& y, const ZeroTable& table, const PrecisionContext& work,
                   const PrecisionContext& verify, const CertifyOptions& options = {});
Evaluation certify(const Candidate& candidate, const ZeroTable& table, const PrecisionContext& work,
                   const PrecisionContext& verify, const CertifyOptions& options = {});

// Decimal digits to which a and b agree, relative to max(|a|, |b|, 1).
double agreement_digits(const BigReal& a, const BigReal& b);

}  // namespace mertens
