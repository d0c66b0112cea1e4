// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Zeta-zero tables: each record carries gamma = Im(rho), alpha = |rho zeta'(rho)|^-1
// and psi = arg(rho zeta'(rho)) as exact decimals.
//
// Canonical text format:
//   # mertens-zeros v1
//   # count=<N> digits=<D>
//   <index> <gamma> <alpha> <psi>        (N lines, gamma ascending)

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mertens/numerics.hpp"

namespace mertens {

// Upper limit of the sum defining h_P.
inline constexpr long kGammaLimit = 14000;

struct ZeroRecord {
  unsigned long index = 0;  // rank by gamma ascending, 1-based
  Decimal gamma;
  Decimal alpha;
  Decimal psi;  // in (-pi, pi]
};

enum class ZeroOrdering { kByGamma, kByAlpha };

struct ZeroTable {
  std::vector<ZeroRecord> records;
  unsigned declared_digits = 0;
  ZeroOrdering ordering = ZeroOrdering::kByGamma;

  std::size_t size() const { return records.size(); }
  const ZeroRecord& operator[](std::size_t i) const { return records[i]; }
  // Largest gamma present (records need not be gamma-ordered).
  const Decimal& max_gamma() const;
};

ZeroTable parse_table(const std::filesystem::path& path);
ZeroTable parse_table(std::istream& in, const std::string& source_name = "<stream>");
std::string render_table(const ZeroTable& table);
void write_table(const ZeroTable& table, const std::filesystem::path& path);

// Re-checks every table invariant; throws ValidationError.
void validate_table(const ZeroTable& table);

// Records with gamma < cut, order preserved.
ZeroTable restrict_gamma_below(const ZeroTable& table, const Decimal& cut);

// Starred indexing: alpha strictly decreasing, ties broken by gamma ascending.
ZeroTable order_by_alpha(const ZeroTable& table);

// psi -> psi + pi, re-centred into (-pi, pi]. Used to search for large
// negative values of h_P. Rendered with declared_digits + 4 digits.
ZeroTable shift_phases_by_pi(const ZeroTable& table);

// exp(-1.5e-6 * gamma^2)
BigReal gaussian_weight(const Decimal& gamma, mpfr_prec_t prec);

struct TailOptions {
  long gamma_limit = kGammaLimit;
  // When false, a table that stops short of gamma_limit is summed as-is
  // (only meaningful for synthetic tables).
  bool require_coverage = true;
};

// 2 * sum_{gamma_cut <= gamma < gamma_limit} alpha * exp(-1.5e-6 gamma^2).
// Bounds |h_P| restricted to the omitted zeros.
BigReal tail_bound(const ZeroTable& table, const Decimal& gamma_cut, const PrecisionContext& ctx,
                   const TailOptions& options = {});

}  // namespace mertens
