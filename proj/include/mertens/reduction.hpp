// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Lattice reduction: size reduction, LLL, SVP enumeration and BKZ.
//
// The basis is always kept as exact integers; only the Gram-Schmidt data is
// floating (MPFR), recomputed from the exact Gram matrix. When the floating
// data stops being trustworthy the engine restarts at doubled precision.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mertens/lattice_core.hpp"

namespace mertens {

struct ReductionParams {
  double delta = 0.99;
  int beta = 20;
  // 0 means unbounded.
  int max_tours = 32;
  // GSO precision; 0 selects 2 * dim + 256.
  unsigned precision_bits = 0;
  unsigned max_precision_bits = 16384;
  // Linear pruning: the bound at depth k of an m-dimensional block is
  // R * min(1, pruning_slack * k / m). Off by default.
  bool pruning = false;
  double pruning_slack = 1.05;

  // Throws DomainError unless 0.25 < delta < 1 and 2 <= beta <= dim.
  void validate(std::size_t dim) const;
  unsigned gso_bits(std::size_t dim) const;
};

struct ReductionStats {
  long swaps = 0;
  long size_reductions = 0;
  int tours = 0;
  long insertions = 0;
  unsigned final_precision_bits = 0;
};

struct EnumerationResult {
  std::vector<std::int64_t> coefficients;  // over the block's basis vectors
  BigReal norm_sq;
};

inline constexpr std::size_t kMaxEnumerationBlock = 45;

// Every |mu[i][j]| <= 1/2 afterwards. gso supplies the working precision.
LatticeBasis size_reduce(const LatticeBasis& basis, const GSOData& gso);

LatticeBasis lll(const LatticeBasis& basis, const ReductionParams& params, ReductionStats* stats = nullptr);

// Shortest nonzero vector of the projected lattice spanned by block
// [begin, end) with squared norm <= radius_sq. Ties go to the
// lexicographically smallest coefficient vector whose first nonzero entry is
// positive. Returns nullopt when nothing lies inside the ball.
std::optional<EnumerationResult> svp_enumerate(const GSOData& gso, std::size_t begin, std::size_t end,
                                               const BigReal& radius_sq, const ReductionParams& params = {});

LatticeBasis bkz(const LatticeBasis& basis, const ReductionParams& params, ReductionStats* stats = nullptr);

// Independent check of the LLL conditions from a fresh Gram-Schmidt
// computation at `bits` precision.
bool is_lll_reduced(const LatticeBasis& basis, double delta, unsigned bits);

}  // namespace mertens
