// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/zeta_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

constexpr const char* kMagic = "# mertens-zeros v1";

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  in.imbue(std::locale::classic());
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

// Precision adequate to compare a `digits`-digit decimal against pi.
mpfr_prec_t comparison_bits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.33)) + 128;
}

bool psi_in_range(const Decimal& psi, mpfr_prec_t prec) {
  const BigReal value = psi.to_big_real(prec);
  const BigReal& pi = pi_constant(prec);
  return value > -pi && value <= pi;
}

}  // namespace

const Decimal& ZeroTable::max_gamma() const {
  if (records.empty()) throw ValidationError("empty zero table");
  const auto it = std::max_element(records.begin(), records.end(),
                                   [](const ZeroRecord& a, const ZeroRecord& b) { return a.gamma < b.gamma; });
  return it->gamma;
}

ZeroTable parse_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open zero table " + path.string());
  return parse_table(in, path.string());
}

ZeroTable parse_table(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError(where(source, 1) + "expected header '" + kMagic + "'");
  }
  if (!std::getline(in, line)) throw ParseError(where(source, 2) + "missing count/digits header");
  unsigned long count = 0;
  unsigned digits = 0;
  {
    const auto tok = split_ws(line);
    if (tok.size() != 3 || tok[0] != "#" || tok[1].rfind("count=", 0) != 0 || tok[2].rfind("digits=", 0) != 0) {
      throw ParseError(where(source, 2) + "expected '# count=<N> digits=<D>'");
    }
    try {
      std::size_t pos = 0;
      count = std::stoul(tok[1].substr(6), &pos);
      if (pos != tok[1].size() - 6) throw std::invalid_argument("count");
      digits = static_cast<unsigned>(std::stoul(tok[2].substr(7), &pos));
      if (pos != tok[2].size() - 7) throw std::invalid_argument("digits");
    } catch (const std::exception&) {
      throw ParseError(where(source, 2) + "malformed count/digits header");
    }
  }

  ZeroTable table;
  table.declared_digits = digits;
  table.ordering = ZeroOrdering::kByGamma;
  table.records.reserve(count);
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 4) {
      throw ParseError(where(source, line_no) + "expected 4 fields, got " + std::to_string(tok.size()));
    }
    ZeroRecord rec;
    try {
      std::size_t pos = 0;
      rec.index = std::stoul(tok[0], &pos);
      if (pos != tok[0].size() || tok[0][0] == '-') throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw ParseError(where(source, line_no) + "malformed index '" + tok[0] + "'");
    }
    try {
      rec.gamma = Decimal::parse(tok[1]);
      rec.alpha = Decimal::parse(tok[2]);
      rec.psi = Decimal::parse(tok[3]);
    } catch (const ParseError& e) {
      throw ParseError(where(source, line_no) + e.what());
    }
    table.records.push_back(std::move(rec));
  }
  if (table.records.size() != count) {
    throw ParseError(source + ": header declares " + std::to_string(count) + " records, found " +
                     std::to_string(table.records.size()));
  }
  validate_table(table);
  return table;
}

void validate_table(const ZeroTable& table) {
  const mpfr_prec_t prec = comparison_bits(table.declared_digits + 8);
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    const ZeroRecord& r = table.records[i];
    const std::string at = "record " + std::to_string(r.index) + ": ";
    if (r.index == 0) throw ValidationError(at + "index must be positive");
    if (r.gamma.sign() <= 0) throw ValidationError(at + "gamma must be positive");
    if (r.alpha.sign() <= 0) throw ValidationError(at + "alpha must be positive");
    if (!psi_in_range(r.psi, prec)) throw ValidationError(at + "psi out of range (-pi, pi]");
    for (const Decimal* field : {&r.gamma, &r.alpha, &r.psi}) {
      if (field->significant_digits() < table.declared_digits) {
        throw ValidationError(at + "insufficient digits: " + std::to_string(field->significant_digits()) + " < " +
                              std::to_string(table.declared_digits));
      }
    }
    if (i > 0) {
      const ZeroRecord& prev = table.records[i - 1];
      if (table.ordering == ZeroOrdering::kByGamma) {
        if (!(prev.gamma < r.gamma)) throw ValidationError(at + "non-monotone gamma");
        if (!(prev.index < r.index)) throw ValidationError(at + "non-monotone index");
      } else if (!(prev.alpha > r.alpha || (prev.alpha == r.alpha && prev.gamma < r.gamma))) {
        throw ValidationError(at + "alpha ordering violated");
      }
    }
  }
}

std::string render_table(const ZeroTable& table) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << kMagic << '\n' << "# count=" << table.records.size() << " digits=" << table.declared_digits << '\n';
  for (const ZeroRecord& r : table.records) {
    out << r.index << ' ' << r.gamma.to_string() << ' ' << r.alpha.to_string() << ' ' << r.psi.to_string() << '\n';
  }
  return out.str();
}

void write_table(const ZeroTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << render_table(table);
}

ZeroTable restrict_gamma_below(const ZeroTable& table, const Decimal& cut) {
  ZeroTable out;
  out.declared_digits = table.declared_digits;
  out.ordering = table.ordering;
  for (const ZeroRecord& r : table.records) {
    if (r.gamma < cut) out.records.push_back(r);
  }
  return out;
}

ZeroTable order_by_alpha(const ZeroTable& table) {
  ZeroTable out = table;
  std::stable_sort(out.records.begin(), out.records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.alpha != b.alpha) return a.alpha > b.alpha;
    return a.gamma < b.gamma;
  });
  out.ordering = ZeroOrdering::kByAlpha;
  return out;
}

ZeroTable shift_phases_by_pi(const ZeroTable& table) {
  const int digits = static_cast<int>(table.declared_digits) + 4;
  const mpfr_prec_t prec = comparison_bits(static_cast<unsigned>(digits) + 8);
  const BigReal& pi = pi_constant(prec);
  const BigReal period = two_pi(prec);
  ZeroTable out = table;
  for (ZeroRecord& r : out.records) {
    BigReal shifted = r.psi.to_big_real(prec) + pi;
    if (shifted > pi) shifted -= period;
    std::string text = shifted.to_decimal(digits);
    if (text.find('.') == std::string::npos) text += ".0";
    r.psi = Decimal::parse(text);
  }
  return out;
}

BigReal gaussian_weight(const Decimal& gamma, mpfr_prec_t prec) {
  const BigReal g = gamma.to_big_real(prec);
  BigReal arg = g * g;
  arg *= BigReal::from_ratio(-3, 2000000, prec);
  return exp(arg);
}

BigReal tail_bound(const ZeroTable& table, const Decimal& gamma_cut, const PrecisionContext& ctx,
                   const TailOptions& options) {
  const Decimal limit{Integer(options.gamma_limit), 0};
  if (options.require_coverage && table.max_gamma() < limit) {
    throw CoverageError("zero table ends at gamma = " + table.max_gamma().to_string().substr(0, 12) +
                        ", below " + std::to_string(options.gamma_limit));
  }
  const mpfr_prec_t prec = ctx.working_bits();
  BigReal sum(prec);
  for (const ZeroRecord& r : table.records) {
    if (r.gamma < gamma_cut || !(r.gamma < limit)) continue;
    sum += r.alpha.to_big_real(prec) * gaussian_weight(r.gamma, prec);
  }
  return ldexp(sum, 1);
}

}  // namespace mertens
