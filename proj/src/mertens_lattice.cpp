// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/mertens_lattice.hpp"

#include <algorithm>

#include "mertens/errors.hpp"

namespace mertens {

std::string to_string(SignMode mode) { return mode == SignMode::kPositive ? "pos" : "neg"; }

SignMode parse_sign_mode(std::string_view text) {
  if (text == "pos" || text == "positive") return SignMode::kPositive;
  if (text == "neg" || text == "negative") return SignMode::kNegative;
  throw ParseError("sign mode must be 'pos' or 'neg', got '" + std::string(text) + "'");
}

std::vector<std::string> BuildParams::warnings() const {
  std::vector<std::string> out;
  if (2 * n > nu) out.push_back("nu = " + std::to_string(nu) + " is below 2n = " + std::to_string(2 * n));
  if (nu > 4 * n) out.push_back("nu = " + std::to_string(nu) + " is above 4n = " + std::to_string(4 * n));
  return out;
}

Integer BuildParams::anchor() const {
  Integer a = 1;
  a <<= static_cast<mp_bitcnt_t>(nu);
  Integer n4 = n;
  n4 = n4 * n4 * n4 * n4;
  return a * n4;
}

Integer Candidate::max_offset() const {
  Integer best = 0;
  for (const Integer& v : offset) {
    if (abs(v) > best) best = abs(v);
  }
  return best;
}

bool Candidate::certifiable() const { return in_certifiable_range(y); }

bool in_certifiable_range(const Dyadic& y) {
  if (y.sign() <= 0) return false;
  const mpfr_prec_t prec = 192;
  const BigReal l = log(y.to_big_real(prec));
  return l >= BigReal::from_long(7, prec) && l <= BigReal::from_long(50000, prec);
}

namespace {

void check_build_inputs(const ZeroTable& table, const BuildParams& params, const PrecisionContext& ctx) {
  if (params.n < 1) throw DomainError("n must be positive");
  if (params.nu < 1) throw DomainError("nu must be positive");
  if (table.ordering != ZeroOrdering::kByAlpha) throw DomainError("the embedding needs a table ordered by alpha");
  if (table.size() < static_cast<std::size_t>(params.n)) {
    throw TableTooSmallError("table has " + std::to_string(table.size()) + " zeros, n = " + std::to_string(params.n));
  }
  if (ctx.bits() < static_cast<unsigned>(params.nu) + 128) {
    throw PrecisionError("building at nu = " + std::to_string(params.nu) + " needs at least " +
                         std::to_string(params.nu + 128) + " bits");
  }
}

}  // namespace

EmbeddingEntries embedding_entries(const ZeroTable& table, const BuildParams& params, const PrecisionContext& ctx) {
  check_build_inputs(table, params, ctx);
  const std::size_t n = static_cast<std::size_t>(params.n);
  ZeroTable head;
  head.declared_digits = table.declared_digits;
  head.ordering = table.ordering;
  head.records.assign(table.records.begin(), table.records.begin() + static_cast<long>(n));
  if (params.sign_mode == SignMode::kNegative) head = shift_phases_by_pi(head);

  const mpfr_prec_t prec = ctx.working_bits();
  const BigReal period = two_pi(prec);
  EmbeddingEntries e;
  e.phase.reserve(n);
  e.frequency.reserve(n);
  e.period.reserve(n);
  for (const ZeroRecord& r : head.records) {
    const BigReal w = sqrt(r.alpha.to_big_real(prec));
    e.phase.push_back(floor_scale(w * r.psi.to_big_real(prec), params.nu));
    e.frequency.push_back(floor_scale(w * r.gamma.to_big_real(prec), params.nu - 10));
    e.period.push_back(floor_scale(period * w, params.nu));
  }
  return e;
}

LatticeBasis build_basis(const ZeroTable& table, const BuildParams& params, const PrecisionContext& ctx) {
  const EmbeddingEntries e = embedding_entries(table, params, ctx);
  const std::size_t n = static_cast<std::size_t>(params.n);
  LatticeBasis b(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    b.at(i, 0) = -e.phase[i];
    b.at(i, 1) = e.frequency[i];
    b.at(i, 2 + i) = e.period[i];
  }
  b.at(n, 0) = params.anchor();
  b.at(n + 1, 1) = 1;
  return b;
}

CvpInstance build_cvp(const ZeroTable& table, const BuildParams& params, const PrecisionContext& ctx) {
  const EmbeddingEntries e = embedding_entries(table, params, ctx);
  const std::size_t n = static_cast<std::size_t>(params.n);
  CvpInstance cvp{LatticeBasis(n + 1), IntVector(n + 1)};
  for (std::size_t i = 0; i < n; ++i) {
    cvp.basis.at(i, 0) = e.frequency[i];
    cvp.basis.at(i, 1 + i) = e.period[i];
    cvp.target[i] = -e.phase[i];
  }
  cvp.basis.at(n, 0) = 1;
  return cvp;
}

std::vector<Candidate> extract_candidates(const LatticeBasis& reduced, const BuildParams& params, int beta,
                                          std::uint64_t seed, long trial) {
  const std::size_t n = static_cast<std::size_t>(params.n);
  if (reduced.dim() != n + 2) {
    throw DomainError("extract_candidates: expected dim " + std::to_string(n + 2) + ", got " +
                      std::to_string(reduced.dim()));
  }
  const Integer anchor = params.anchor();
  std::vector<Candidate> out;
  for (const IntVector& col : reduced.columns()) {
    if (abs(col[n]) != anchor) continue;
    Candidate c;
    c.sign = sgn(col[n]);
    c.z = col[n + 1];
    c.y = Dyadic{c.sign * c.z, kCandidateShift};
    c.params = params;
    c.beta = beta;
    c.seed = seed;
    c.trial = trial;
    c.offset.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) c.offset.push_back(c.sign * col[i]);
    c.offset.push_back(c.sign * col[n + 1]);
    out.push_back(std::move(c));
  }
  return out;
}

IntVector babai_nearest_plane(const LatticeBasis& reduced, const GSOData& gso, const IntVector& target) {
  const std::size_t n = reduced.dim();
  if (gso.dim() != n || target.size() != n) throw DomainError("babai_nearest_plane: dimension mismatch");
  const mpfr_prec_t prec = gso.precision;
  // y_i = <t, b*_i> / ||b*_i||^2
  std::vector<BigReal> y(n, BigReal(prec));
  for (std::size_t i = 0; i < n; ++i) {
    BigReal acc = BigReal::from_integer(dot(target, reduced.column(i)), prec);
    for (std::size_t j = 0; j < i; ++j) acc -= gso.mu[i][j] * gso.bstar_norms[j] * y[j];
    y[i] = acc / gso.bstar_norms[i];
  }
  const BigReal half = BigReal::from_ratio(1, 2, prec);
  IntVector coeff(n);
  for (std::size_t i = n; i-- > 0;) {
    // c = ceil(y - 1/2) puts c - y in [-1/2, 1/2).
    const BigReal shifted = y[i] - half;
    mpfr_get_z(coeff[i].get_mpz_t(), shifted.get(), MPFR_RNDU);
    if (coeff[i] == 0) continue;
    const BigReal c = BigReal::from_integer(coeff[i], prec);
    for (std::size_t j = 0; j < i; ++j) y[j] -= c * gso.mu[i][j];
  }
  IntVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (coeff[i] == 0) continue;
    const IntVector& b = reduced.column(i);
    for (std::size_t r = 0; r < n; ++r) mpz_addmul(v[r].get_mpz_t(), b[r].get_mpz_t(), coeff[i].get_mpz_t());
  }
  return v;
}

Candidate candidate_from_cvp(const IntVector& w, const IntVector& target, const BuildParams& params) {
  const std::size_t n = static_cast<std::size_t>(params.n);
  if (w.size() != n + 1 || target.size() != n + 1) throw DomainError("candidate_from_cvp: dimension mismatch");
  Candidate c;
  c.sign = -1;
  c.z = w[n];
  c.y = Dyadic{-w[n], kCandidateShift};
  c.params = params;
  c.offset.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) c.offset.push_back(w[i] - target[i]);
  return c;
}

BigReal expected_gap_from_periods(const IntVector& period, const PrecisionContext& ctx) {
  Integer det = 1;
  for (const Integer& p : period) det *= p;
  const mpfr_prec_t prec = ctx.working_bits();
  const BigReal d = BigReal::from_integer(det, std::max<mpfr_prec_t>(prec, bit_length(det) + 1));
  BigReal root(prec);
  root.note_ternary(mpfr_rootn_ui(root.get(), d.get(), static_cast<unsigned long>(period.size() + 1), MPFR_RNDN));
  root.set_exact(root.exact() && d.exact());
  return ldexp(root, -1);
}

BigReal expected_gap(const ZeroTable& table, const BuildParams& params, const PrecisionContext& ctx) {
  return expected_gap_from_periods(embedding_entries(table, params, ctx).period, ctx);
}

}  // namespace mertens
