// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mertens/errors.hpp"

namespace mertens {

void ReductionParams::validate(std::size_t dim) const {
  if (!(delta > 0.25 && delta < 1.0)) throw DomainError("delta must lie in (0.25, 1)");
  if (beta < 2 || static_cast<std::size_t>(beta) > dim) {
    throw DomainError("beta must lie in [2, dim], got " + std::to_string(beta) + " for dim " + std::to_string(dim));
  }
  if (max_tours < 0) throw DomainError("max_tours must be non-negative");
}

unsigned ReductionParams::gso_bits(std::size_t dim) const {
  const unsigned floor_bits = static_cast<unsigned>(2 * dim + 256);
  return std::max(precision_bits, floor_bits);
}

namespace {

constexpr long kMaxLoopSteps = 200'000'000;
constexpr int kMaxSizeReductionPasses = 64;

// Exact integer basis with floating GSO rows derived from the exact Gram
// matrix. Rows [0, k) are valid whenever the main loop sits at index k.
class Engine {
 public:
  Engine(std::vector<IntVector> columns, mpfr_prec_t prec, ReductionStats* stats)
      : cols_(std::move(columns)), n_(cols_.size()), prec_(prec), stats_(stats), tmp_(prec), tmp2_(prec), half_(prec) {
    gram_.resize(n_);
    r_.resize(n_);
    mu_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      gram_[i].resize(i + 1);
      for (std::size_t j = 0; j <= i; ++j) gram_[i][j] = dot(cols_[i], cols_[j]);
      r_[i].assign(i + 1, BigReal(prec));
      mu_[i].assign(i + 1, BigReal(prec));
      mpfr_set_ui(mu_[i][i].get(), 1, MPFR_RNDN);
    }
    mpfr_set_d(half_.get(), 0.5, MPFR_RNDN);
  }

  std::vector<IntVector>& columns() { return cols_; }
  std::size_t dim() const { return n_; }
  const BigReal& norm(std::size_t i) const { return r_[i][i]; }

  void compute_row(std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      mpfr_ptr rkj = r_[k][j].get();
      mpfr_set_z(rkj, gram(k, j).get_mpz_t(), MPFR_RNDN);
      for (std::size_t i = 0; i < j; ++i) {
        mpfr_mul(tmp_.get(), mu_[j][i].get(), r_[k][i].get(), MPFR_RNDN);
        mpfr_sub(rkj, rkj, tmp_.get(), MPFR_RNDN);
      }
      mpfr_div(mu_[k][j].get(), rkj, r_[j][j].get(), MPFR_RNDN);
    }
    mpfr_ptr rkk = r_[k][k].get();
    mpfr_set_z(rkk, gram(k, k).get_mpz_t(), MPFR_RNDN);
    for (std::size_t j = 0; j < k; ++j) {
      mpfr_mul(tmp_.get(), mu_[k][j].get(), r_[k][j].get(), MPFR_RNDN);
      mpfr_sub(rkk, rkk, tmp_.get(), MPFR_RNDN);
    }
    // ||b*_k||^2 below |b_k|^2 * 2^-(prec - guard) carries no significant bits.
    mpfr_set_z(tmp_.get(), gram(k, k).get_mpz_t(), MPFR_RNDN);
    mpfr_mul_2si(tmp_.get(), tmp_.get(), -(static_cast<long>(prec_) - static_cast<long>(PrecisionContext::kGuardBits)),
                 MPFR_RNDN);
    if (mpfr_sgn(rkk) <= 0 || mpfr_cmp(rkk, tmp_.get()) <= 0) {
      throw PrecisionError("GSO lost significance at index " + std::to_string(k));
    }
  }

  void size_reduce_row(std::size_t k) {
    Integer x;
    for (int pass = 0;; ++pass) {
      if (pass > kMaxSizeReductionPasses) throw PrecisionError("size reduction does not converge");
      compute_row(k);
      bool changed = false;
      for (std::size_t j = k; j-- > 0;) {
        if (mpfr_cmpabs(mu_[k][j].get(), half_.get()) <= 0) continue;
        mpfr_get_z(x.get_mpz_t(), mu_[k][j].get(), MPFR_RNDN);
        if (x == 0) continue;
        sub_multiple(k, j, x);
        for (std::size_t i = 0; i < j; ++i) {
          mpfr_mul_z(tmp_.get(), mu_[j][i].get(), x.get_mpz_t(), MPFR_RNDN);
          mpfr_sub(mu_[k][i].get(), mu_[k][i].get(), tmp_.get(), MPFR_RNDN);
        }
        mpfr_sub_z(mu_[k][j].get(), mu_[k][j].get(), x.get_mpz_t(), MPFR_RNDN);
        changed = true;
        if (stats_) ++stats_->size_reductions;
      }
      if (!changed) return;
    }
  }

  // Runs LLL from index `start`; rows [0, start) must be valid.
  void run_lll(std::size_t start, double delta) {
    if (n_ == 0) return;
    std::size_t k = start;
    if (k == 0) {
      compute_row(0);
      k = 1;
    }
    BigReal d(prec_);
    mpfr_set_d(d.get(), delta, MPFR_RNDN);
    long steps = 0;
    while (k < n_) {
      if (++steps > kMaxLoopSteps) throw Error("LLL exceeded its iteration budget");
      size_reduce_row(k);
      // Lovasz: r_k >= (delta - mu^2) r_{k-1}
      mpfr_sqr(tmp_.get(), mu_[k][k - 1].get(), MPFR_RNDN);
      mpfr_sub(tmp2_.get(), d.get(), tmp_.get(), MPFR_RNDN);
      mpfr_mul(tmp2_.get(), tmp2_.get(), r_[k - 1][k - 1].get(), MPFR_RNDN);
      if (mpfr_cmp(r_[k][k].get(), tmp2_.get()) >= 0) {
        ++k;
        continue;
      }
      swap_adjacent(k);
      if (stats_) ++stats_->swaps;
      if (k > 1) {
        --k;
      } else {
        compute_row(0);
      }
    }
  }

  void size_reduce_all() {
    if (n_ == 0) return;
    compute_row(0);
    for (std::size_t k = 1; k < n_; ++k) size_reduce_row(k);
  }

  // Block-local Gram-Schmidt data for [begin, end); rows must be valid.
  GSOData snapshot(std::size_t begin, std::size_t end) const {
    GSOData g;
    g.precision = prec_;
    const std::size_t m = end - begin;
    g.mu.resize(m);
    g.bstar_norms.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      g.mu[i].reserve(i + 1);
      for (std::size_t j = 0; j <= i; ++j) g.mu[i].push_back(mu_[begin + i][begin + j]);
      g.bstar_norms.push_back(r_[begin + i][begin + i]);
    }
    return g;
  }

  // Makes sum_j coeffs[j] * b_{begin+j} the new b_begin through 2x2
  // unimodular steps inside the block.
  void insert(std::size_t begin, const std::vector<std::int64_t>& coeffs) {
    const std::size_t m = coeffs.size();
    std::vector<Integer> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = static_cast<long>(coeffs[j]);
    Integer g, s, t;
    for (std::size_t j = m; j-- > 1;) {
      if (c[j] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c[j - 1].get_mpz_t(), c[j].get_mpz_t());
      const Integer p = c[j - 1] / g;
      const Integer q = c[j] / g;
      IntVector& a = cols_[begin + j - 1];
      IntVector& b = cols_[begin + j];
      for (std::size_t r = 0; r < n_; ++r) {
        Integer na = p * a[r] + q * b[r];
        Integer nb = s * b[r] - t * a[r];
        a[r] = std::move(na);
        b[r] = std::move(nb);
      }
      c[j - 1] = g;
      c[j] = 0;
    }
    if (c[0] == -1) {
      for (Integer& v : cols_[begin]) v = -v;
    } else if (c[0] != 1) {
      throw Error("insert: coefficient vector is not primitive");
    }
    for (std::size_t j = begin; j < begin + m; ++j) refresh_gram(j);
  }

 private:
  Integer& gram(std::size_t i, std::size_t j) { return i >= j ? gram_[i][j] : gram_[j][i]; }

  void refresh_gram(std::size_t k) {
    for (std::size_t i = 0; i < n_; ++i) gram(k, i) = dot(cols_[k], cols_[i]);
  }

  // b_k -= x b_j
  void sub_multiple(std::size_t k, std::size_t j, const Integer& x) {
    IntVector& bk = cols_[k];
    const IntVector& bj = cols_[j];
    for (std::size_t r = 0; r < n_; ++r) mpz_submul(bk[r].get_mpz_t(), bj[r].get_mpz_t(), x.get_mpz_t());
    // G_kk - 2x G_kj + x^2 G_jj, using the old G_kj.
    Integer& gkk = gram(k, k);
    mpz_submul(gkk.get_mpz_t(), gram(k, j).get_mpz_t(), x.get_mpz_t());
    mpz_submul(gkk.get_mpz_t(), gram(k, j).get_mpz_t(), x.get_mpz_t());
    const Integer x2 = x * x;
    mpz_addmul(gkk.get_mpz_t(), gram(j, j).get_mpz_t(), x2.get_mpz_t());
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == k) continue;
      mpz_submul(gram(k, i).get_mpz_t(), gram(j, i).get_mpz_t(), x.get_mpz_t());
    }
  }

  void swap_adjacent(std::size_t k) {
    std::swap(cols_[k - 1], cols_[k]);
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == k || i == k - 1) continue;
      std::swap(gram(k - 1, i), gram(k, i));
    }
    std::swap(gram(k - 1, k - 1), gram(k, k));
  }

  std::vector<IntVector> cols_;
  std::size_t n_;
  mpfr_prec_t prec_;
  ReductionStats* stats_;
  std::vector<std::vector<Integer>> gram_;
  std::vector<std::vector<BigReal>> r_;
  std::vector<std::vector<BigReal>> mu_;
  BigReal tmp_, tmp2_, half_;
};

// Runs `body` on an engine, restarting from the current (still exact) basis
// at doubled precision whenever the floating GSO gives out.
template <typename Body>
LatticeBasis with_escalation(const LatticeBasis& basis, unsigned bits, unsigned max_bits, ReductionStats* stats,
                             Body body) {
  std::vector<IntVector> cols = basis.columns();
  for (;;) {
    Engine engine(std::move(cols), static_cast<mpfr_prec_t>(bits), stats);
    try {
      body(engine);
      if (stats) stats->final_precision_bits = bits;
      return LatticeBasis::from_columns(std::move(engine.columns()));
    } catch (const PrecisionError&) {
      if (2 * bits > max_bits) throw;
      cols = std::move(engine.columns());
      bits *= 2;
    }
  }
}

// ---------------------------------------------------------------------------
// Enumeration

struct Enumerator {
  std::size_t m;
  std::vector<long double> r;                // normalized squared GS norms
  std::vector<std::vector<long double>> mu;  // mu[i][j], j < i
  std::vector<long double> prune;            // per-level bound multiplier
  long double bound;                         // current squared radius
  long double best = std::numeric_limits<long double>::infinity();
  std::vector<std::int64_t> x;
  std::vector<std::pair<std::vector<std::int64_t>, long double>> found;

  static constexpr long double kTieSlack = 1e-9L;

  void record(long double d) {
    if (d < best) {
      best = d;
      bound = std::min(bound, best * (1 + kTieSlack));
    }
    found.emplace_back(x, d);
    if (found.size() > 4096) {
      std::erase_if(found, [&](const auto& f) { return f.second > bound; });
    }
  }

  // highest_nonzero: index of the highest nonzero coordinate above level i,
  // or m if all are zero.
  void search(std::size_t i, long double partial, std::size_t highest_nonzero) {
    long double center = 0;
    for (std::size_t j = i + 1; j < m; ++j) center -= static_cast<long double>(x[j]) * mu[j][i];
    auto visit = [&](std::int64_t v) -> bool {
      const long double diff = static_cast<long double>(v) - center;
      const long double d = partial + diff * diff * r[i];
      if (d > bound * prune[i]) return false;
      x[i] = v;
      if (i == 0) {
        if (v != 0 || highest_nonzero != m) record(d);
      } else {
        search(i - 1, d, (v != 0 && highest_nonzero == m) ? i : highest_nonzero);
      }
      return true;
    };
    if (highest_nonzero == m) {
      // Sign symmetry: the topmost nonzero coefficient is positive.
      for (std::int64_t v = 0;; ++v) {
        if (!visit(v)) break;
      }
    } else {
      const std::int64_t v0 = std::llround(center);
      const std::int64_t step = (center >= static_cast<long double>(v0)) ? 1 : -1;
      bool up_open = visit(v0);
      bool down_open = up_open;
      if (!up_open) {
        // v0 is the nearest integer; nothing further can fit.
        x[i] = 0;
        return;
      }
      for (std::int64_t k = 1; up_open || down_open; ++k) {
        if (up_open) up_open = visit(v0 + step * k);
        if (down_open) down_open = visit(v0 - step * k);
      }
    }
    x[i] = 0;
  }
};

bool lex_less(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void normalize_sign(std::vector<std::int64_t>& c) {
  for (std::int64_t v : c) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& e : c) e = -e;
    return;
  }
}

}  // namespace

LatticeBasis size_reduce(const LatticeBasis& basis, const GSOData& gso) {
  if (gso.dim() != basis.dim()) throw DomainError("size_reduce: GSO dimension mismatch");
  const unsigned bits = std::max<unsigned>(static_cast<unsigned>(gso.precision), 2 * basis.dim() + 256);
  return with_escalation(basis, bits, 16384, nullptr, [](Engine& e) { e.size_reduce_all(); });
}

LatticeBasis lll(const LatticeBasis& basis, const ReductionParams& params, ReductionStats* stats) {
  if (!(params.delta > 0.25 && params.delta < 1.0)) throw DomainError("delta must lie in (0.25, 1)");
  return with_escalation(basis, params.gso_bits(basis.dim()), params.max_precision_bits, stats,
                         [&](Engine& e) { e.run_lll(0, params.delta); });
}

std::optional<EnumerationResult> svp_enumerate(const GSOData& gso, std::size_t begin, std::size_t end,
                                               const BigReal& radius_sq, const ReductionParams& params) {
  if (end <= begin || end > gso.dim()) throw DomainError("svp_enumerate: bad block range");
  const std::size_t m = end - begin;
  if (m > kMaxEnumerationBlock) {
    throw BlockTooLargeError("svp_enumerate: block of " + std::to_string(m) + " exceeds the cap of " +
                             std::to_string(kMaxEnumerationBlock));
  }
  if (radius_sq.sign() <= 0) throw DomainError("svp_enumerate: radius must be positive");

  const BigReal& scale = gso.bstar_norms[begin];
  Enumerator en;
  en.m = m;
  en.r.resize(m);
  en.mu.assign(m, std::vector<long double>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    en.r[i] = mpfr_get_ld((gso.bstar_norms[begin + i] / scale).get(), MPFR_RNDN);
    for (std::size_t j = 0; j < i; ++j) en.mu[i][j] = mpfr_get_ld(gso.mu[begin + i][begin + j].get(), MPFR_RNDN);
  }
  const long double radius = mpfr_get_ld((radius_sq / scale).get(), MPFR_RNDN);
  en.bound = radius * (1 + 1e-12L);
  en.prune.assign(m, 1.0L);
  if (params.pruning) {
    // Level i sits at depth m - i from the top of the tree.
    for (std::size_t i = 0; i < m; ++i) {
      const long double depth = static_cast<long double>(m - i);
      en.prune[i] = std::min<long double>(1.0L, params.pruning_slack * depth / static_cast<long double>(m));
    }
  }
  en.x.assign(m, 0);
  en.search(m - 1, 0.0L, m);
  if (en.found.empty()) return std::nullopt;

  // Exact-ish re-evaluation of the near-minimal candidates at GSO precision.
  const mpfr_prec_t prec = gso.precision;
  std::optional<EnumerationResult> best;
  for (auto& [coeffs, approx] : en.found) {
    if (approx > en.best * (1 + 2 * Enumerator::kTieSlack)) continue;
    BigReal norm(prec);
    for (std::size_t i = 0; i < m; ++i) {
      BigReal y = BigReal::from_long(static_cast<long>(coeffs[i]), prec);
      for (std::size_t j = i + 1; j < m; ++j) {
        if (coeffs[j] == 0) continue;
        y += BigReal::from_long(static_cast<long>(coeffs[j]), prec) * gso.mu[begin + j][begin + i];
      }
      norm += y * y * gso.bstar_norms[begin + i];
    }
    std::vector<std::int64_t> c = coeffs;
    normalize_sign(c);
    if (!best) {
      best = EnumerationResult{std::move(c), std::move(norm)};
      continue;
    }
    const BigReal tol = ldexp(abs(best->norm_sq), -(static_cast<long>(prec) - 2 * static_cast<long>(PrecisionContext::kGuardBits)));
    const BigReal diff = norm - best->norm_sq;
    if (diff < -tol || (abs(diff) <= tol && lex_less(c, best->coefficients))) {
      best = EnumerationResult{std::move(c), std::move(norm)};
    }
  }
  if (!best || best->norm_sq > radius_sq) return std::nullopt;
  return best;
}

LatticeBasis bkz(const LatticeBasis& basis, const ReductionParams& params, ReductionStats* stats) {
  const std::size_t n = basis.dim();
  params.validate(n);
  ReductionStats local;
  ReductionStats* st = stats ? stats : &local;
  int tours_done = 0;
  return with_escalation(basis, params.gso_bits(n), params.max_precision_bits, st, [&](Engine& e) {
    e.run_lll(0, params.delta);
    const std::size_t beta = static_cast<std::size_t>(params.beta);
    while (params.max_tours == 0 || tours_done < params.max_tours) {
      bool inserted = false;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t end = std::min(k + beta, n);
        const GSOData block = e.snapshot(k, end);
        // Strictly shorter than the current b*_k, beyond rounding noise.
        BigReal radius = ldexp(e.norm(k), 0);
        radius -= ldexp(e.norm(k), -64);
        auto found = svp_enumerate(block, 0, end - k, radius, params);
        if (!found) continue;
        e.insert(k, found->coefficients);
        e.run_lll(k, params.delta);
        inserted = true;
        ++st->insertions;
      }
      ++tours_done;
      st->tours = tours_done;
      if (!inserted) break;
    }
  });
}

bool is_lll_reduced(const LatticeBasis& basis, double delta, unsigned bits) {
  const GSOData g = gram_schmidt(basis, PrecisionContext(bits));
  const mpfr_prec_t prec = g.precision;
  const BigReal half = BigReal::from_ratio(1, 2, prec);
  const BigReal slack = ldexp(BigReal::from_long(1, prec), -static_cast<long>(bits / 2));
  BigReal d(prec);
  mpfr_set_d(d.get(), delta, MPFR_RNDN);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (abs(g.mu[i][j]) > half + slack) return false;
    }
    if (i > 0) {
      const BigReal& m = g.mu[i][i - 1];
      const BigReal lhs = d * g.bstar_norms[i - 1];
      const BigReal rhs = g.bstar_norms[i] + m * m * g.bstar_norms[i - 1];
      if (lhs > rhs * (BigReal::from_long(1, prec) + slack)) return false;
    }
  }
  return true;
}

}  // namespace mertens
