// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include <doctest.h>

#include <random>

#include "mertens/errors.hpp"
#include "mertens/mertens_lattice.hpp"
#include "mertens/reduction.hpp"
#include "oracles.hpp"

using namespace mertens;

namespace {

const std::filesystem::path kFixture = oracle::source_dir() / "tests/data/zeros_first50.txt";

// Slightly above 1 / (4 pi^2), so floor(2 pi sqrt(alpha) 2^nu) = 2^nu.
const char* kUnitAlpha = "0.025330295910584442860969865802431909726089693668061637211402258";

LatticeBasis cols(std::vector<IntVector> c) { return LatticeBasis::from_columns(std::move(c)); }

ZeroTable unit_table(std::size_t n) {
  ZeroTable t;
  t.declared_digits = 0;
  t.ordering = ZeroOrdering::kByAlpha;
  for (std::size_t i = 0; i < n; ++i) {
    t.records.push_back(ZeroRecord{i + 1, Decimal{static_cast<long>(10 * (i + 1)), 0}, Decimal::parse(kUnitAlpha),
                                   Decimal{0, 0}});
  }
  return t;
}

const ZeroTable& fixture_by_alpha() {
  static const ZeroTable t = order_by_alpha(parse_table(kFixture));
  return t;
}

// offset_i == s * (y * 2^10 * frequency_i - phase_i) modulo period_i.
bool offset_consistent(const Candidate& c, const EmbeddingEntries& e, int s) {
  const Integer y1024 = c.sign * c.z;
  for (std::size_t i = 0; i < e.phase.size(); ++i) {
    const Integer r = c.offset[i] - s * (y1024 * e.frequency[i] - e.phase[i]);
    if (r % e.period[i] != 0) return false;
  }
  return c.offset.back() == s * y1024;
}

}  // namespace

TEST_CASE("sign modes and build parameters") {
  CHECK(to_string(SignMode::kPositive) == "pos");
  CHECK(to_string(SignMode::kNegative) == "neg");
  CHECK(parse_sign_mode("negative") == SignMode::kNegative);
  CHECK(parse_sign_mode("pos") == SignMode::kPositive);
  CHECK_THROWS_AS(parse_sign_mode("both"), ParseError);

  CHECK(BuildParams{5, 20}.anchor() == 655360000);
  CHECK(BuildParams{5, 20}.warnings().empty());
  CHECK(BuildParams{5, 9}.warnings().size() == 1);
  CHECK(BuildParams{5, 21}.warnings().size() == 1);
}

TEST_CASE("basis shape and entries") {
  const PrecisionContext ctx(256);
  const BuildParams p{3, 20};
  const LatticeBasis b = build_basis(unit_table(3), p, ctx);
  REQUIRE(b.dim() == 5);
  const Integer two_nu = Integer(1) << 20;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(b.at(i, 0) == 0);
    CHECK(b.at(i, 2 + i) == two_nu);
    // frequency = floor(10 (i+1) 2^10 / (2 pi))
    const double f = 10.0 * static_cast<double>(i + 1) * 1024.0 / (2 * M_PI);
    CHECK(b.at(i, 1) == static_cast<long>(std::floor(f)));
  }
  CHECK(b.at(3, 0) == BuildParams{3, 20}.anchor());
  CHECK(b.at(4, 1) == 1);
  Integer d = b.at(3, 0);
  for (int i = 0; i < 3; ++i) d *= two_nu;
  CHECK(abs(determinant(b)) == d);
}

TEST_CASE("embedding on real zeros") {
  const PrecisionContext ctx(512);
  const BuildParams p{6, 24};
  const ZeroTable& t = fixture_by_alpha();
  const EmbeddingEntries e = embedding_entries(t, p, ctx);
  const LatticeBasis b = build_basis(t, p, ctx);
  Integer d = p.anchor();
  for (const Integer& x : e.period) d *= x;
  CHECK(abs(determinant(b)) == d);

  // Long double oracle for the leading entries.
  for (std::size_t i = 0; i < 6; ++i) {
    const long double a = std::stold(t[i].alpha.to_string().substr(0, 30));
    const long double g = std::stold(t[i].gamma.to_string().substr(0, 30));
    const long double s = std::stold(t[i].psi.to_string().substr(0, 30));
    const long double w = std::sqrt(a);
    CHECK(static_cast<long double>(e.period[i].get_d()) == doctest::Approx(std::ldexp(2 * M_PIl * w, 24)));
    CHECK(std::fabs(e.frequency[i].get_d() - std::ldexp(w * g, 14)) <= 1.0);
    CHECK(std::fabs(e.phase[i].get_d() - std::ldexp(w * s, 24)) <= 1.0);
  }

  const CvpInstance cvp = build_cvp(t, p, ctx);
  REQUIRE(cvp.basis.dim() == 7);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(cvp.basis.at(i, 0) == e.frequency[i]);
    CHECK(cvp.basis.at(i, 1 + i) == e.period[i]);
    CHECK(cvp.target[i] == -e.phase[i]);
  }
  CHECK(cvp.basis.at(6, 0) == 1);
  CHECK(cvp.target[6] == 0);

  // Negative mode moves each phase by pi.
  const EmbeddingEntries neg = embedding_entries(t, BuildParams{6, 24, SignMode::kNegative}, ctx);
  for (std::size_t i = 0; i < 6; ++i) {
    const Integer half = e.period[i] / 2;
    const Integer diff = abs(neg.phase[i] - e.phase[i]);
    CHECK(abs(diff - half) <= 2);
  }
}

TEST_CASE("build input errors") {
  const PrecisionContext ctx(256);
  const ZeroTable t = unit_table(3);
  CHECK_THROWS_AS(build_basis(t, BuildParams{4, 20}, ctx), TableTooSmallError);
  CHECK_THROWS_AS(build_basis(t, BuildParams{0, 20}, ctx), DomainError);
  CHECK_THROWS_AS(build_basis(t, BuildParams{3, 0}, ctx), DomainError);
  CHECK_THROWS_AS(build_basis(t, BuildParams{3, 200}, ctx), PrecisionError);
  ZeroTable by_gamma = t;
  by_gamma.ordering = ZeroOrdering::kByGamma;
  CHECK_THROWS_AS(build_basis(by_gamma, BuildParams{3, 20}, ctx), DomainError);
}

TEST_CASE("extract_candidates") {
  const BuildParams p{1, 4};
  const Integer a = p.anchor();  // 16
  SUBCASE("positive and negative anchors") {
    const LatticeBasis b = cols({{5, a, 1024}, {-3, -a, 1024}, {0, 0, 1}});
    const auto c = extract_candidates(b, p, 10, 77, 3);
    REQUIRE(c.size() == 2);
    CHECK(c[0].sign == 1);
    CHECK(c[0].y == Dyadic{1, 0});
    CHECK(c[1].sign == -1);
    CHECK(c[1].y == Dyadic{-1, 0});
    CHECK(c[1].offset == IntVector{3, -1024});
    CHECK(c[1].max_offset() == 1024);
    CHECK(c[0].seed == 77);
    CHECK(c[0].trial == 3);
    CHECK(c[0].beta == 10);
    CHECK_FALSE(c[0].certifiable());
  }
  SUBCASE("no anchor column") {
    const LatticeBasis b = cols({{5, a + 1, 0}, {0, 0, 1}, {1, 0, 0}});
    CHECK(extract_candidates(b, p, 10, 0, 0).empty());
  }
  CHECK_THROWS_AS(extract_candidates(LatticeBasis::identity(4), p, 10, 0, 0), DomainError);
}

TEST_CASE("certifiable range") {
  CHECK_FALSE(in_certifiable_range(Dyadic{1096, 0}));
  CHECK(in_certifiable_range(Dyadic{1097, 0}));
  CHECK_FALSE(in_certifiable_range(Dyadic{-5000, 0}));
  CHECK(in_certifiable_range(Dyadic{Integer(1) << 1000, 0}));
  // e^50000 is about 2^72134.
  CHECK(in_certifiable_range(Dyadic{Integer(1) << 72130, 0}));
  CHECK_FALSE(in_certifiable_range(Dyadic{Integer(1) << 72140, 0}));
}

TEST_CASE("babai on an orthogonal basis rounds each coordinate") {
  const LatticeBasis b = cols({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}});
  const GSOData g = gram_schmidt(b, PrecisionContext(128));
  // Coordinates of v - t land in [-1/2, 1/2): 3 / 2 = 1.5 rounds to 1,
  // -3 / 2 to -2; 4 / 3 -> 1; -12 / 5 -> -2.
  CHECK(babai_nearest_plane(b, g, IntVector{3, 4, -12}) == IntVector{2, 3, -10});
  CHECK(babai_nearest_plane(b, g, IntVector{-3, 0, 0}) == IntVector{-4, 0, 0});
}

TEST_CASE("babai returns lattice targets unchanged") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeBasis b = lll(oracle::random_basis(6, 100, rng), ReductionParams{});
    std::uniform_int_distribution<int> d(-50, 50);
    std::vector<std::int64_t> c(6);
    for (auto& x : c) x = d(rng);
    IntVector t(6, 0);
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t r = 0; r < 6; ++r) t[r] += Integer(static_cast<long>(c[j])) * b.at(r, j);
    CHECK(babai_nearest_plane(b, gram_schmidt(b, PrecisionContext(256)), t) == t);
  }
}

TEST_CASE("babai is exact for small errors and bounded in general") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const LatticeBasis b = lll(oracle::random_basis(4, 60, rng), ReductionParams{});
    const oracle::RationalGso exact = oracle::rational_gso(b);
    mpq_class min_star = exact.norms[0], sum_star = 0;
    for (const auto& n : exact.norms) {
      if (n < min_star) min_star = n;
      sum_star += n;
    }
    const GSOData g = gram_schmidt(b, PrecisionContext(256));
    std::uniform_int_distribution<int> coeff(-3, 3);
    IntVector v(4, 0);
    for (std::size_t j = 0; j < 4; ++j) {
      const long k = coeff(rng);
      for (std::size_t r = 0; r < 4; ++r) v[r] += k * b.at(r, j);
    }
    // Random error e; if ||e|| < min ||b*|| / 2 the nearest plane is exact.
    std::uniform_int_distribution<int> err(-20, 20);
    IntVector t = v;
    IntVector e(4);
    for (std::size_t r = 0; r < 4; ++r) {
      e[r] = err(rng);
      t[r] += e[r];
    }
    const IntVector w = babai_nearest_plane(b, g, t);
    IntVector diff(4);
    for (std::size_t r = 0; r < 4; ++r) diff[r] = w[r] - t[r];
    const Integer dist = oracle::norm_sq(diff);
    CHECK(mpq_class(dist) <= sum_star / 4);
    CHECK(dist >= oracle::box_cvp_distance(b, t, 10));
    if (mpq_class(oracle::norm_sq(e)) * 4 < min_star) {
      CHECK(w == v);
      CHECK(dist == oracle::box_cvp_distance(b, t, 10));
    }
  }
}

TEST_CASE("embedding and cvp candidates agree on their offsets") {
  const PrecisionContext ctx(512);
  const ZeroTable& t = fixture_by_alpha();
  ReductionParams rp;
  rp.beta = 8;
  int embedding_hits = 0;
  for (int n = 6; n <= 9; ++n) {
    const BuildParams p{n, 2 * n + 6};
    const EmbeddingEntries e = embedding_entries(t, p, ctx);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const LatticeBasis reduced = bkz(randomize_unimodular(build_basis(t, p, ctx), seed), rp);
      for (const Candidate& c : extract_candidates(reduced, p, 8, seed, 0)) {
        ++embedding_hits;
        CHECK(offset_consistent(c, e, 1));
      }
      const CvpInstance cvp = build_cvp(t, p, ctx);
      ReductionParams cp = rp;
      cp.beta = std::min(rp.beta, static_cast<int>(cvp.basis.dim()));
      const LatticeBasis cb = bkz(randomize_unimodular(cvp.basis, seed), cp);
      const IntVector w = babai_nearest_plane(cb, gram_schmidt(cb, ctx), cvp.target);
      const Candidate c = candidate_from_cvp(w, cvp.target, p);
      CHECK(c.sign == -1);
      CHECK(offset_consistent(c, e, -1));
      // The gap heuristic bounds Babai's output up to a modest factor.
      const double gap = expected_gap_from_periods(e.period, ctx).to_double();
      CHECK(c.max_offset().get_d() <= 64 * gap);
    }
  }
  CHECK(embedding_hits > 0);
}

TEST_CASE("expected gap closed forms") {
  const PrecisionContext ctx(128);
  CHECK(expected_gap_from_periods(IntVector{100}, ctx).to_double() == 5.0);
  CHECK(expected_gap_from_periods(IntVector{8, 8}, ctx).to_double() == doctest::Approx(2.0));
  const BigReal g = expected_gap(unit_table(3), BuildParams{3, 20}, PrecisionContext(256));
  CHECK(g.to_double() == doctest::Approx(std::ldexp(1.0, 14)));
}
