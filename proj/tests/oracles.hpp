// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Reference computations used by the tests. None of them call into the
// library's floating-point or reduction code.

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mertens/lattice_core.hpp"

namespace oracle {

using mertens::Integer;
using mertens::IntVector;
using mertens::LatticeBasis;

// atan(1/x) * 2^bits, truncated term by term (error < number of terms).
inline Integer atan_inv_scaled(unsigned long x, unsigned long bits) {
  Integer one = 1;
  one <<= bits;
  Integer power = one / x;  // 2^bits / x^(2k+1)
  const unsigned long x2 = x * x;
  Integer sum = 0;
  for (unsigned long k = 0; power != 0; ++k) {
    const Integer term = power / (2 * k + 1);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
    power /= x2;
  }
  return sum;
}

// floor(pi * 2^bits) from Machin's formula in integer arithmetic.
inline Integer pi_floor_scaled(unsigned long bits) {
  const unsigned long guard = 64;
  const Integer scaled = 16 * atan_inv_scaled(5, bits + guard) - 4 * atan_inv_scaled(239, bits + guard);
  Integer floor_value = scaled >> guard;
  // The truncation error is far below 2^guard / 2; check the floor is stable.
  const Integer low = (scaled - 4096) >> guard;
  const Integer high = (scaled + 4096) >> guard;
  if (low != high) throw std::runtime_error("pi oracle: floor ambiguous");
  return floor_value;
}

// Exact Gram-Schmidt over the rationals.
struct RationalGso {
  std::vector<std::vector<mpq_class>> mu;
  std::vector<mpq_class> norms;
};

inline RationalGso rational_gso(const LatticeBasis& b) {
  const std::size_t n = b.dim();
  std::vector<std::vector<mpq_class>> star(n, std::vector<mpq_class>(n));
  RationalGso g;
  g.mu.assign(n, std::vector<mpq_class>(n));
  g.norms.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) star[i][r] = mpq_class(b.at(r, i));
    for (std::size_t j = 0; j < i; ++j) {
      mpq_class dot = 0;
      for (std::size_t r = 0; r < n; ++r) dot += mpq_class(b.at(r, i)) * star[j][r];
      g.mu[i][j] = dot / g.norms[j];
      for (std::size_t r = 0; r < n; ++r) star[i][r] -= g.mu[i][j] * star[j][r];
    }
    g.mu[i][i] = 1;
    for (std::size_t r = 0; r < n; ++r) g.norms[i] += star[i][r] * star[i][r];
  }
  return g;
}

inline bool is_size_reduced(const RationalGso& g) {
  const mpq_class half(1, 2);
  for (std::size_t i = 0; i < g.mu.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(g.mu[i][j]) > half) return false;
  return true;
}

inline bool satisfies_lovasz(const RationalGso& g, const mpq_class& delta) {
  for (std::size_t i = 1; i < g.norms.size(); ++i) {
    const mpq_class& m = g.mu[i][i - 1];
    if (delta * g.norms[i - 1] > g.norms[i] + m * m * g.norms[i - 1]) return false;
  }
  return true;
}

inline Integer norm_sq(const IntVector& v) {
  Integer s = 0;
  for (const Integer& x : v) s += x * x;
  return s;
}

// Minimum of ||B c||^2 over nonzero integer c with |c_i| <= box. The last
// coefficient is minimised in closed form (the objective is a convex
// quadratic in it), the others are enumerated exhaustively.
inline std::int64_t box_svp_norm(const LatticeBasis& b, int box) {
  const std::size_t n = b.dim();
  std::vector<std::vector<std::int64_t>> col(n, std::vector<std::int64_t>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t r = 0; r < n; ++r) col[j][r] = b.at(r, j).get_si();
  const std::vector<std::int64_t>& last = col[n - 1];
  std::int64_t last_norm = 0;
  for (std::int64_t x : last) last_norm += x * x;

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> c(n - 1, -box);
  std::vector<std::int64_t> v(n, 0);
  auto rebuild = [&] {
    std::fill(v.begin(), v.end(), 0);
    for (std::size_t j = 0; j + 1 < n; ++j)
      for (std::size_t r = 0; r < n; ++r) v[r] += c[j] * col[j][r];
  };
  auto eval_last = [&](bool head_zero) {
    std::int64_t vv = 0, vl = 0;
    for (std::size_t r = 0; r < n; ++r) {
      vv += v[r] * v[r];
      vl += v[r] * last[r];
    }
    // ||v + t last||^2 = vv + 2 t vl + t^2 last_norm
    const double t_star = -static_cast<double>(vl) / static_cast<double>(last_norm);
    for (std::int64_t t : {static_cast<std::int64_t>(std::floor(t_star)), static_cast<std::int64_t>(std::ceil(t_star)),
                           std::int64_t{-box}, std::int64_t{box}, std::int64_t{1}, std::int64_t{-1}}) {
      t = std::clamp<std::int64_t>(t, -box, box);
      if (head_zero && t == 0) continue;
      const std::int64_t val = vv + 2 * t * vl + t * t * last_norm;
      if (val < best) best = val;
    }
  };
  if (n == 1) {
    return last_norm;
  }
  rebuild();
  while (true) {
    bool head_zero = std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
    eval_last(head_zero);
    // Odometer increment with incremental update of v.
    std::size_t j = 0;
    while (j < n - 1 && c[j] == box) {
      for (std::size_t r = 0; r < n; ++r) v[r] -= 2 * box * col[j][r];
      c[j] = -box;
      ++j;
    }
    if (j == n - 1) break;
    ++c[j];
    for (std::size_t r = 0; r < n; ++r) v[r] += col[j][r];
  }
  return best;
}

// Minimum of ||B c - t||^2 over |c_i| <= box (plain enumeration).
inline Integer box_cvp_distance(const LatticeBasis& b, const IntVector& t, int box) {
  const std::size_t n = b.dim();
  std::vector<int> c(n, -box);
  std::optional<Integer> best;
  while (true) {
    Integer d = 0;
    for (std::size_t r = 0; r < n; ++r) {
      Integer x = -t[r];
      for (std::size_t j = 0; j < n; ++j) x += c[j] * b.at(r, j);
      d += x * x;
    }
    if (!best || d < *best) best = d;
    std::size_t j = 0;
    while (j < n && c[j] == box) c[j++] = -box;
    if (j == n) break;
    ++c[j];
  }
  return *best;
}

inline LatticeBasis random_basis(std::size_t n, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-bound, bound);
  while (true) {
    LatticeBasis b(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) b.at(r, c) = d(rng);
    if (mertens::determinant(b) != 0) return b;
  }
}

// Knapsack-style lattice: identity with a column of large random weights,
// the usual hard instance for testing reduction strength.
inline LatticeBasis knapsack_basis(std::size_t n, unsigned bits, std::mt19937_64& rng) {
  LatticeBasis b = LatticeBasis::identity(n);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    Integer w = 0;
    for (unsigned k = 0; k < bits; k += 32) {
      w <<= 32;
      w += static_cast<unsigned long>(rng() & 0xffffffffULL);
    }
    b.at(n - 1, c) = w >> (((bits + 31) / 32) * 32 - bits);
  }
  b.at(n - 1, n - 1) = Integer(1) << bits;
  return b;
}

inline std::filesystem::path source_dir() { return MERTENS_SOURCE_DIR; }

}  // namespace oracle
