// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/lattice_core.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mertens/errors.hpp"

namespace mertens {

LatticeBasis::LatticeBasis(std::size_t dim) : columns_(dim, IntVector(dim)) {}

LatticeBasis LatticeBasis::identity(std::size_t dim) {
  LatticeBasis b(dim);
  for (std::size_t i = 0; i < dim; ++i) b.at(i, i) = 1;
  return b;
}

LatticeBasis LatticeBasis::from_rows(const std::vector<std::vector<Integer>>& rows) {
  const std::size_t n = rows.size();
  LatticeBasis b(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw ValidationError("lattice basis must be square");
    for (std::size_t c = 0; c < n; ++c) b.at(r, c) = rows[r][c];
  }
  return b;
}

LatticeBasis LatticeBasis::from_columns(std::vector<IntVector> columns) {
  for (const auto& c : columns) {
    if (c.size() != columns.size()) throw ValidationError("lattice basis must be square");
  }
  LatticeBasis b;
  b.columns_ = std::move(columns);
  return b;
}

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

LatticeBasis multiply(const LatticeBasis& a, const LatticeBasis& b) {
  const std::size_t n = a.dim();
  LatticeBasis out(n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVector& col = out.column(j);
    for (std::size_t k = 0; k < n; ++k) {
      const Integer& f = b.at(k, j);
      if (f == 0) continue;
      const IntVector& src = a.column(k);
      for (std::size_t i = 0; i < n; ++i) mpz_addmul(col[i].get_mpz_t(), src[i].get_mpz_t(), f.get_mpz_t());
    }
  }
  return out;
}

Integer determinant(const LatticeBasis& basis) {
  const std::size_t n = basis.dim();
  if (n == 0) return 1;
  // Row-major copy; Bareiss keeps every intermediate an exact minor.
  std::vector<IntVector> m(n, IntVector(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m[r][c] = basis.at(r, c);
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(t);
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

void require_full_rank(const LatticeBasis& basis) {
  if (basis.dim() == 0) throw ValidationError("empty lattice basis");
  if (determinant(basis) == 0) throw ValidationError("lattice basis columns are linearly dependent");
}

GSOData gram_schmidt(const LatticeBasis& basis, const PrecisionContext& ctx) {
  const std::size_t n = basis.dim();
  const mpfr_prec_t prec = ctx.working_bits();
  GSOData g;
  g.precision = prec;
  g.mu.assign(n, {});
  g.bstar_norms.assign(n, BigReal(prec));
  // r[i][j] = <b_i, b*_j>
  std::vector<std::vector<BigReal>> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i].assign(i + 1, BigReal(prec));
    g.mu[i].assign(i + 1, BigReal(prec));
    for (std::size_t j = 0; j <= i; ++j) {
      const Integer gij = dot(basis.column(i), basis.column(j));
      BigReal acc = BigReal::from_integer(gij, prec);
      for (std::size_t k = 0; k < j; ++k) acc -= g.mu[j][k] * r[i][k];
      r[i][j] = acc;
      if (j < i) {
        g.mu[i][j] = r[i][j] / g.bstar_norms[j];
      }
    }
    g.bstar_norms[i] = r[i][i];
    g.mu[i][i] = BigReal::from_long(1, prec);
    const BigReal scale = BigReal::from_integer(dot(basis.column(i), basis.column(i)), prec);
    if (g.bstar_norms[i].sign() <= 0 ||
        g.bstar_norms[i] <= ldexp(scale, -(static_cast<long>(ctx.bits())))) {
      throw PrecisionError("gram_schmidt: ||b*_" + std::to_string(i) + "||^2 lost all significant bits at " +
                           std::to_string(ctx.bits()) + " bits");
    }
  }
  return g;
}

LatticeBasis hnf(const LatticeBasis& basis) {
  const std::size_t m = basis.dim();
  Integer modulus = abs(determinant(basis));
  if (modulus == 0) throw ValidationError("hnf: singular basis");

  std::vector<IntVector> a = basis.columns();
  auto reduce = [](IntVector& col, const Integer& mod) {
    for (Integer& x : col) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  };
  for (auto& col : a) reduce(col, modulus);

  std::vector<IntVector> w(m, IntVector(m));
  Integer g, u, v;
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t i = m - 1 - step;  // current row, pivot column k == i
    const std::size_t k = i;
    if (a[k][i] == 0) a[k][i] = modulus;
    for (std::size_t jj = k; jj-- > 0;) {
      if (a[jj][i] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a[k][i].get_mpz_t(), a[jj][i].get_mpz_t());
      const Integer pk = a[k][i] / g;
      const Integer pj = a[jj][i] / g;
      IntVector combined(m);
      for (std::size_t r = 0; r < m; ++r) {
        combined[r] = u * a[k][r] + v * a[jj][r];
        a[jj][r] = pk * a[jj][r] - pj * a[k][r];
      }
      a[k] = std::move(combined);
      reduce(a[k], modulus);
      reduce(a[jj], modulus);
    }
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a[k][i].get_mpz_t(), modulus.get_mpz_t());
    for (std::size_t r = 0; r < m; ++r) w[i][r] = u * a[k][r];
    reduce(w[i], modulus);
    if (w[i][i] == 0) w[i][i] = modulus;
    for (std::size_t j = i + 1; j < m; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), w[j][i].get_mpz_t(), w[i][i].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t r = 0; r <= i; ++r) w[j][r] -= q * w[i][r];
    }
    mpz_divexact(modulus.get_mpz_t(), modulus.get_mpz_t(), g.get_mpz_t());
  }
  return LatticeBasis::from_columns(std::move(w));
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_below(0)");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

struct UnimodularRecipe {
  std::vector<std::size_t> perm;
  std::vector<std::vector<int>> lower;  // lower[i][j], i > j
};

UnimodularRecipe draw_recipe(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  UnimodularRecipe recipe;
  recipe.perm.resize(n);
  std::iota(recipe.perm.begin(), recipe.perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(recipe.perm[i - 1], recipe.perm[rng.uniform_below(i)]);
  }
  recipe.lower.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      recipe.lower[i][j] = static_cast<int>(rng.uniform_int(-kRandomizeEntryBound, kRandomizeEntryBound));
  return recipe;
}

}  // namespace

LatticeBasis random_unimodular(std::size_t dim, std::uint64_t seed) {
  return randomize_unimodular(LatticeBasis::identity(dim), seed);
}

LatticeBasis randomize_unimodular(const LatticeBasis& basis, std::uint64_t seed) {
  const std::size_t n = basis.dim();
  const UnimodularRecipe recipe = draw_recipe(n, seed);
  // (B P)_j = B_{perm[j]};  (B P T)_j = (B P)_j + sum_{i > j} T[i][j] (B P)_i
  std::vector<IntVector> permuted(n);
  for (std::size_t j = 0; j < n; ++j) permuted[j] = basis.column(recipe.perm[j]);
  std::vector<IntVector> out = permuted;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      const int t = recipe.lower[i][j];
      if (t == 0) continue;
      for (std::size_t r = 0; r < n; ++r) {
        if (t > 0) {
          mpz_addmul_ui(out[j][r].get_mpz_t(), permuted[i][r].get_mpz_t(), static_cast<unsigned long>(t));
        } else {
          mpz_submul_ui(out[j][r].get_mpz_t(), permuted[i][r].get_mpz_t(), static_cast<unsigned long>(-t));
        }
      }
    }
  }
  return LatticeBasis::from_columns(std::move(out));
}

void write_matrix(std::ostream& out, const LatticeBasis& basis) {
  const std::size_t n = basis.dim();
  out << n << ' ' << n << '\n';
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c) out << ' ';
      out << basis.at(r, c).get_str(10);
    }
    out << '\n';
  }
}

LatticeBasis read_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw ParseError("matrix: missing '<rows> <cols>' header");
  if (rows != cols || rows == 0) throw ParseError("matrix: expected a non-empty square matrix");
  std::vector<std::vector<Integer>> data(rows, std::vector<Integer>(cols));
  std::string tok;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(in >> tok)) throw ParseError("matrix: truncated at row " + std::to_string(r + 1));
      if (data[r][c].set_str(tok, 10) != 0) throw ParseError("matrix: bad integer '" + tok + "'");
    }
  }
  return LatticeBasis::from_rows(data);
}

}  // namespace mertens
