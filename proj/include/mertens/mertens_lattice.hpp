// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// The Odlyzko-te Riele embedding. With the zeros in starred order
// (alpha decreasing) and w_i = sqrt(alpha_i), the (n+2)-dimensional basis is
//
//   row i < n : [ -floor(w_i psi_i 2^nu), floor(w_i gamma_i 2^(nu-10)), 0 .. floor(2 pi w_i 2^nu) .. 0 ]
//   row n     : [ 2^nu n^4, 0, ..., 0 ]
//   row n + 1 : [ 0, 1, 0, ..., 0 ]
//
// A reduced basis contains a column (..., +-2^nu n^4, z); y = +-z / 2^10 then
// makes gamma_i y - psi_i small modulo 2 pi for the heaviest zeros.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mertens/lattice_core.hpp"
#include "mertens/numerics.hpp"
#include "mertens/zeta_data.hpp"

namespace mertens {

enum class SignMode { kPositive, kNegative };

std::string to_string(SignMode mode);  // "pos" / "neg"
SignMode parse_sign_mode(std::string_view text);

// Fractional bits of y; fixed by the 2^(nu-10) scale of the gamma column.
inline constexpr unsigned kCandidateShift = 10;

struct BuildParams {
  int n = 0;
  int nu = 0;
  SignMode sign_mode = SignMode::kPositive;

  // Human-readable notes when 2n <= nu <= 4n does not hold. Never fatal.
  std::vector<std::string> warnings() const;
  // 2^nu * n^4
  Integer anchor() const;
};

struct Candidate {
  Integer z;     // last coordinate of the column
  int sign = 1;  // sign of the anchor coordinate
  Dyadic y;      // sign * z / 2^10
  BuildParams params;
  int beta = 0;
  std::uint64_t seed = 0;
  long trial = 0;
  // sign * (column without the anchor coordinate): the lattice-minus-target
  // offset in the (n+1)-dimensional CVP picture.
  IntVector offset;

  Integer max_offset() const;
  // y in [e^7, e^50000]; other candidates are kept but cannot certify.
  bool certifiable() const;
};

bool in_certifiable_range(const Dyadic& y);

// The three floor-scaled columns of the embedding.
struct EmbeddingEntries {
  IntVector phase;      // floor(w_i psi_i 2^nu)
  IntVector frequency;  // floor(w_i gamma_i 2^(nu-10))
  IntVector period;     // floor(2 pi w_i 2^nu)
};

EmbeddingEntries embedding_entries(const ZeroTable& table_by_alpha, const BuildParams& params,
                                   const PrecisionContext& ctx);

LatticeBasis build_basis(const ZeroTable& table_by_alpha, const BuildParams& params, const PrecisionContext& ctx);

struct CvpInstance {
  LatticeBasis basis;  // (n+1) x (n+1)
  IntVector target;    // (-phase_1, ..., -phase_n, 0)
};

CvpInstance build_cvp(const ZeroTable& table_by_alpha, const BuildParams& params, const PrecisionContext& ctx);

std::vector<Candidate> extract_candidates(const LatticeBasis& reduced, const BuildParams& params, int beta,
                                          std::uint64_t seed, long trial);

// Lattice vector v with GSO coordinates of v - target in [-1/2, 1/2).
IntVector babai_nearest_plane(const LatticeBasis& reduced, const GSOData& gso, const IntVector& target);

// A CVP solution w ~ target of build_cvp corresponds to y = -w_last / 2^10
// (the target carries -phase, the embedding +phase).
Candidate candidate_from_cvp(const IntVector& lattice_vector, const IntVector& target, const BuildParams& params);

// (1/2) D^(1/(n+1)) with D = prod floor(2 pi w_i 2^nu).
BigReal expected_gap(const ZeroTable& table_by_alpha, const BuildParams& params, const PrecisionContext& ctx);
BigReal expected_gap_from_periods(const IntVector& period, const PrecisionContext& ctx);

}  // namespace mertens
