// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Exact integer lattice bases (columns are generators), Gram-Schmidt data,
// determinants, Hermite normal form and seeded unimodular randomization.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "mertens/numerics.hpp"

namespace mertens {

using IntVector = std::vector<Integer>;

class LatticeBasis {
 public:
  LatticeBasis() = default;
  // dim x dim zero matrix.
  explicit LatticeBasis(std::size_t dim);

  static LatticeBasis identity(std::size_t dim);
  // rows[r][c]; must be square.
  static LatticeBasis from_rows(const std::vector<std::vector<Integer>>& rows);
  static LatticeBasis from_columns(std::vector<IntVector> columns);

  std::size_t dim() const { return columns_.size(); }
  const IntVector& column(std::size_t j) const { return columns_[j]; }
  IntVector& column(std::size_t j) { return columns_[j]; }
  const std::vector<IntVector>& columns() const { return columns_; }
  std::vector<IntVector>& columns() { return columns_; }
  const Integer& at(std::size_t row, std::size_t col) const { return columns_[col][row]; }
  Integer& at(std::size_t row, std::size_t col) { return columns_[col][row]; }

  friend bool operator==(const LatticeBasis& a, const LatticeBasis& b) { return a.columns_ == b.columns_; }

 private:
  std::vector<IntVector> columns_;
};

Integer dot(const IntVector& a, const IntVector& b);
LatticeBasis multiply(const LatticeBasis& a, const LatticeBasis& b);
// Exact fraction-free (Bareiss) elimination.
Integer determinant(const LatticeBasis& basis);
// Throws ValidationError unless the columns are linearly independent.
void require_full_rank(const LatticeBasis& basis);

// mu[i][j] for j <= i (mu[i][i] == 1) and squared Gram-Schmidt norms.
struct GSOData {
  mpfr_prec_t precision = 0;
  std::vector<std::vector<BigReal>> mu;
  std::vector<BigReal> bstar_norms;

  std::size_t dim() const { return bstar_norms.size(); }
};

// Computed from the exact Gram matrix at ctx.working_bits().
GSOData gram_schmidt(const LatticeBasis& basis, const PrecisionContext& ctx);

// Column Hermite normal form: upper triangular, positive diagonal, and
// 0 <= h[i][j] < h[i][i] for j > i. Exact, modular in |det|.
LatticeBasis hnf(const LatticeBasis& basis);

// mt19937_64 with a platform-independent bounded draw (rejection sampling).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

inline constexpr int kRandomizeEntryBound = 4;

// U = P * T: P a seeded random permutation, T unit lower triangular with
// off-diagonal entries uniform in {-4, ..., 4}.
LatticeBasis random_unimodular(std::size_t dim, std::uint64_t seed);
// basis * random_unimodular(dim, seed), computed without forming U.
LatticeBasis randomize_unimodular(const LatticeBasis& basis, std::uint64_t seed);

// Text form: "<rows> <cols>" then one row per line.
void write_matrix(std::ostream& out, const LatticeBasis& basis);
LatticeBasis read_matrix(std::istream& in);

}  // namespace mertens
