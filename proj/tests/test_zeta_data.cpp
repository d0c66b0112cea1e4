// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mertens/errors.hpp"
#include "mertens/zeta_data.hpp"
#include "oracles.hpp"

using namespace mertens;

namespace {

const std::filesystem::path kFixture = oracle::source_dir() / "tests/data/zeros_first50.txt";

// Published values (Odlyzko's tables) of the first two ordinates.
const std::string kGamma1 = "14.13472514173469379045725198356247027078425711569924317568556746014996342980925676";
const std::string kGamma2 = "21.02203963877155499262847959389690277733434052490278175462952040358759858606889079";

std::string pad(std::string s, unsigned digits) {
  // Append zeros until s carries `digits` significant digits.
  const Decimal d = Decimal::parse(s);
  if (s.find('.') == std::string::npos) s += ".";
  for (unsigned k = d.significant_digits(); k < digits; ++k) s += "0";
  return s;
}

std::string line(unsigned index, const std::string& gamma, const std::string& alpha, const std::string& psi,
                 unsigned digits) {
  return std::to_string(index) + " " + pad(gamma, digits) + " " + pad(alpha, digits) + " " + pad(psi, digits) +
         "\n";
}

std::string table_text(const std::vector<std::string>& lines, unsigned digits) {
  std::string s = "# mertens-zeros v1\n# count=" + std::to_string(lines.size()) + " digits=" + std::to_string(digits) +
                  "\n";
  for (const auto& l : lines) s += l;
  return s;
}

ZeroTable parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_table(in, "test");
}

ZeroRecord record(unsigned index, const char* gamma, const char* alpha, const char* psi) {
  return ZeroRecord{index, Decimal::parse(gamma), Decimal::parse(alpha), Decimal::parse(psi)};
}

}  // namespace

TEST_CASE("fixture parses and matches published ordinates") {
  const ZeroTable t = parse_table(kFixture);
  REQUIRE(t.size() == 50);
  CHECK(t.declared_digits == 256);
  CHECK(t.ordering == ZeroOrdering::kByGamma);
  CHECK(t[0].gamma.to_string().substr(0, kGamma1.size()) == kGamma1);
  CHECK(t[1].gamma.to_string().substr(0, kGamma2.size()) == kGamma2);
  // alpha_1, psi_1 from an independent mpmath evaluation of zeta'(rho_1).
  CHECK(t[0].alpha.to_string().substr(0, 34) == "0.08914152138503449919877338664816");
  CHECK(t[0].psi.to_string().substr(0, 24) == "1.6933111152043717401634");
}

TEST_CASE("two-record table") {
  const std::string text = table_text(
      {line(1, kGamma1, "0.0891415213850344991987733866481", "1.69331111520437174016", 80),
       line(2, kGamma2, "0.0453", "-2.5", 80)},
      80);
  const ZeroTable t = parse_text(text);
  CHECK(t.size() == 2);
  CHECK(render_table(t) == text);
  CHECK(render_table(parse_text(render_table(t))) == text);
}

TEST_CASE("validation errors") {
  const std::string good1 = line(1, kGamma1, "0.1", "1", 80);
  const std::string good2 = line(2, kGamma2, "0.2", "-1", 80);

  SUBCASE("non-monotone gamma") {
    try {
      parse_text(table_text({line(1, kGamma2, "0.1", "1", 80), line(2, kGamma1, "0.2", "-1", 80)}, 80));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("non-monotone gamma") != std::string::npos);
    }
  }
  SUBCASE("insufficient digits") {
    const std::string text = table_text({line(1, kGamma1, "0.1", "1", 200), line(2, kGamma2, "0.2", "-1", 50)}, 200);
    try {
      parse_text(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("insufficient digits") != std::string::npos);
    }
  }
  SUBCASE("field count") {
    CHECK_THROWS_AS(parse_text("# mertens-zeros v1\n# count=1 digits=1\n1 14.1 0.1\n"), ParseError);
  }
  SUBCASE("count mismatch") {
    CHECK_THROWS_AS(parse_text(table_text({good1, good2}, 80).replace(27, 1, "3")), ParseError);
  }
  SUBCASE("header") {
    CHECK_THROWS_AS(parse_text("# other v1\n# count=0 digits=1\n"), ParseError);
    CHECK_THROWS_AS(parse_text("# mertens-zeros v1\n# count=x digits=1\n"), ParseError);
  }
  SUBCASE("value ranges") {
    CHECK_THROWS_AS(parse_text(table_text({line(1, kGamma1, "-0.1", "1", 80)}, 80)), ValidationError);
    CHECK_THROWS_AS(parse_text(table_text({line(1, kGamma1, "0", "1", 80)}, 80)), ValidationError);
    // 3.1415926536 > pi; -3.14159265358979 > -pi is fine.
    CHECK_THROWS_AS(parse_text(table_text({line(1, kGamma1, "0.1", "3.1415926536", 80)}, 80)), ValidationError);
    CHECK_THROWS_AS(parse_text(table_text({line(1, kGamma1, "0.1", "-3.1415926536", 80)}, 80)), ValidationError);
    CHECK_NOTHROW(parse_text(table_text({line(1, kGamma1, "0.1", "-3.14159265358979", 80)}, 80)));
    CHECK_THROWS_AS(parse_text(table_text({line(1, kGamma1, "0.1", "1e-3", 80)}, 80)), ParseError);
  }
}

TEST_CASE("order_by_alpha") {
  ZeroTable t;
  t.declared_digits = 0;
  t.records = {record(1, "10", "0.1", "0"), record(2, "20", "0.3", "0"), record(3, "30", "0.2", "0")};
  const ZeroTable o = order_by_alpha(t);
  CHECK(o.ordering == ZeroOrdering::kByAlpha);
  CHECK(o[0].index == 2);
  CHECK(o[1].index == 3);
  CHECK(o[2].index == 1);
  CHECK_NOTHROW(validate_table(o));
  CHECK(render_table(order_by_alpha(o)) == render_table(o));

  SUBCASE("ties go by gamma") {
    t.records = {record(1, "10", "0.2", "0"), record(2, "20", "0.5", "0"), record(3, "30", "0.20", "0")};
    const ZeroTable tied = order_by_alpha(t);
    CHECK(tied[0].index == 2);
    CHECK(tied[1].index == 1);
    CHECK(tied[2].index == 3);
    CHECK_NOTHROW(validate_table(tied));
  }

  SUBCASE("permutation of the fixture") {
    const ZeroTable f = parse_table(kFixture);
    const ZeroTable a = order_by_alpha(f);
    CHECK_NOTHROW(validate_table(a));
    std::vector<unsigned long> before, after;
    for (const auto& r : f.records) before.push_back(r.index);
    for (const auto& r : a.records) after.push_back(r.index);
    std::sort(after.begin(), after.end());
    CHECK(before == after);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].alpha > a[i].alpha);
  }
}

TEST_CASE("shift_phases_by_pi") {
  const ZeroTable f = parse_table(kFixture);
  const ZeroTable s = shift_phases_by_pi(f);
  CHECK_NOTHROW(validate_table(s));
  const mpfr_prec_t p = 900;
  const BigReal& pi = pi_constant(p);
  for (std::size_t i = 0; i < f.size(); ++i) {
    BigReal diff = s[i].psi.to_big_real(p) - f[i].psi.to_big_real(p);
    // diff is +pi or -pi
    const BigReal err = abs(abs(diff) - pi);
    CHECK(err < ldexp(BigReal::from_long(1, p), -800));
  }
  const ZeroTable twice = shift_phases_by_pi(s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const BigReal err = abs(twice[i].psi.to_big_real(p) - f[i].psi.to_big_real(p));
    CHECK(err < ldexp(BigReal::from_long(1, p), -800));
  }
}

TEST_CASE("tail_bound") {
  const PrecisionContext ctx(256);
  ZeroTable t;
  t.declared_digits = 1;

  SUBCASE("nothing omitted at the limit") {
    t.records = {record(1, "1000", "0.1", "0"), record(2, "14000.5", "0.1", "0")};
    CHECK(tail_bound(t, Decimal{14000, 0}, ctx).is_zero());
  }
  SUBCASE("single synthetic term") {
    t.records = {record(1, "1000", "0.1", "0")};
    TailOptions o;
    o.require_coverage = false;
    const double got = tail_bound(t, Decimal{500, 0}, ctx, o).to_double();
    CHECK(got == doctest::Approx(0.2 * std::exp(-1.5)).epsilon(1e-15));
    CHECK(tail_bound(t, Decimal{1001, 0}, ctx, o).is_zero());
    CHECK_THROWS_AS(tail_bound(t, Decimal{500, 0}, ctx), CoverageError);
  }
  SUBCASE("monotone in the cut") {
    const ZeroTable f = parse_table(kFixture);
    TailOptions o;
    o.require_coverage = false;
    BigReal prev = tail_bound(f, Decimal{0, 0}, ctx, o);
    for (int cut = 10; cut <= 150; cut += 7) {
      const BigReal cur = tail_bound(f, Decimal{cut, 0}, ctx, o);
      CHECK(cur <= prev);
      prev = cur;
    }
    // Oracle: the same sum in long double.
    long double sum = 0;
    for (const auto& r : f.records) {
      const long double g = std::stold(r.gamma.to_string().substr(0, 30));
      if (g >= 40) sum += std::stold(r.alpha.to_string().substr(0, 30)) * std::exp(-1.5e-6L * g * g);
    }
    CHECK(tail_bound(f, Decimal{40, 0}, ctx, o).to_double() == doctest::Approx(static_cast<double>(2 * sum)));
  }
}

TEST_CASE("gaussian weight") {
  CHECK(gaussian_weight(Decimal{5000, 0}, 128).to_double() == doctest::Approx(std::exp(-37.5)).epsilon(1e-14));
  CHECK(gaussian_weight(Decimal{0, 0}, 128).to_double() == 1.0);
}

TEST_CASE("restrict_gamma_below") {
  const ZeroTable f = parse_table(kFixture);
  const ZeroTable r = restrict_gamma_below(f, Decimal{50, 0});
  CHECK(r.size() == 10);
  CHECK(r.records.back().index == 10);
}
