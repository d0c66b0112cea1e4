// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// mertens: command-line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mertens/errors.hpp"
#include "mertens/evaluator.hpp"
#include "mertens/lattice_core.hpp"
#include "mertens/mertens_lattice.hpp"
#include "mertens/reduction.hpp"
#include "mertens/search.hpp"
#include "mertens/zeta_data.hpp"

namespace {

using namespace mertens;

LatticeBasis read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const LatticeBasis& basis) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_matrix(out, basis);
  if (!out) throw Error("write to " + path + " failed");
}

std::vector<SignMode> parse_sign_list(const std::string& text) {
  if (text == "both") return {SignMode::kPositive, SignMode::kNegative};
  return {parse_sign_mode(text)};
}

int cmd_zeros_validate(const std::string& path) {
  const ZeroTable t = parse_table(path);
  std::cout << "ok: " << t.size() << " zeros, " << t.declared_digits << " digits, max gamma "
            << t.max_gamma().to_string().substr(0, 24) << '\n';
  if (t.max_gamma() < Decimal{kGammaLimit, 0}) {
    std::cout << "note: table does not reach gamma = " << kGammaLimit << '\n';
  }
  return 0;
}

struct BuildArgs {
  std::string zeros, out, sign = "pos";
  int nu = 0, n = 0;
  unsigned bits = PrecisionContext::kDefaultBits;
};

int cmd_build(const BuildArgs& a) {
  const ZeroTable table = parse_table(a.zeros);
  const ZeroTable starred = order_by_alpha(restrict_gamma_below(table, Decimal{kGammaLimit, 0}));
  const BuildParams params{a.n, a.nu, parse_sign_mode(a.sign)};
  for (const std::string& w : params.warnings()) std::cerr << "warning: " << w << '\n';
  const PrecisionContext ctx(std::max<unsigned>(a.bits, static_cast<unsigned>(a.nu) + 128));
  write_matrix_file(a.out, build_basis(starred, params, ctx));
  std::cerr << "expected gap " << expected_gap(starred, params, ctx).to_decimal(8) << '\n';
  return 0;
}

struct ReduceArgs {
  std::string in, out;
  int beta = 20;
  double delta = 0.99;
  std::uint64_t seed = 0;
  int max_tours = 32;
  bool no_randomize = false;
};

int cmd_reduce(const ReduceArgs& a) {
  LatticeBasis b = read_matrix_file(a.in);
  require_full_rank(b);
  ReductionParams p;
  p.delta = a.delta;
  p.beta = std::min<int>(a.beta, static_cast<int>(b.dim()));
  p.max_tours = a.max_tours;
  if (!a.no_randomize) b = randomize_unimodular(b, a.seed);
  ReductionStats stats;
  b = lll(b, p, &stats);
  if (p.beta > 2) b = bkz(b, p, &stats);
  write_matrix_file(a.out, b);
  std::cerr << "swaps " << stats.swaps << ", tours " << stats.tours << ", insertions " << stats.insertions
            << ", precision " << stats.final_precision_bits << " bits\n";
  return 0;
}

struct EvalArgs {
  std::string zeros, y_text, z_text, cutoff = "14000", out;
  unsigned bits = PrecisionContext::kDefaultBits;
  unsigned verify_bits = PrecisionContext::kVerifyBits;
  bool certify = false;
  bool allow_partial = false;
};

int cmd_eval(const EvalArgs& a) {
  const ZeroTable table = parse_table(a.zeros);
  Dyadic y;
  if (!a.y_text.empty()) {
    y = Dyadic::parse(a.y_text);
  } else {
    Integer z;
    if (z.set_str(a.z_text, 10) != 0) throw ParseError("--z must be an integer");
    y = Dyadic{z, kCandidateShift};
  }
  const PrecisionContext ctx(a.bits);
  EvalOptions eo;
  eo.gamma_cut = Decimal::parse(a.cutoff);
  eo.require_coverage = !a.allow_partial;
  const BigReal hp = h_p_exact(table, y, ctx, eo);
  TailOptions to;
  to.require_coverage = !a.allow_partial;
  const BigReal tail = tail_bound(table, eo.gamma_cut, ctx, to);
  std::cout << "y           = " << y.to_decimal() << '\n'
            << "h_P         = " << hp.to_decimal(60) << '\n'
            << "bits        = " << a.bits << '\n'
            << "gamma_cut   = " << eo.gamma_cut.to_string() << '\n'
            << "tail_bound  = " << tail.to_decimal(6) << '\n'
            << "in_range    = " << (in_certifiable_range(y) ? "yes" : "no") << '\n';

  ResultRecord rec;
  rec.source = "eval";
  rec.key.trial = -1;
  rec.gamma_cut = eo.gamma_cut.to_string();
  rec.y = y.to_decimal();
  if (y.shift == kCandidateShift) rec.z = y.numerator.get_str(10);
  rec.hp_exact = hp.to_decimal(80);
  rec.precision_bits = a.bits;

  if (a.certify) {
    CertifyOptions co;
    co.gamma_cut = eo.gamma_cut;
    co.require_coverage = !a.allow_partial;
    const Evaluation ev = certify(y, table, ctx, PrecisionContext(a.verify_bits), co);
    std::cout << "verdict     = " << to_string(ev.verdict) << '\n';
    if (ev.hp_verify) {
      std::cout << "h_P verify  = " << ev.hp_verify->to_decimal(60) << "  (" << a.verify_bits << " bits, "
                << agreement_digits(ev.hp, *ev.hp_verify) << " digits agree)\n";
      rec.hp_verify = ev.hp_verify->to_decimal(80);
    }
    if (ev.bound) {
      std::cout << "bound       = " << ev.bound->rendered << '\n'
                << "truncated   = " << ev.bound->truncated << '\n';
      rec.bound = ev.bound->rendered;
      rec.bound_truncated = ev.bound->truncated;
    }
    rec.verdict = ev.verdict;
    rec.precision_bits = ev.precision_bits;
  }
  if (!a.out.empty()) {
    rec.timestamp = utc_timestamp();
    std::ofstream out(a.out, std::ios::app);
    if (!out) throw Error("cannot open " + a.out);
    out << rec.to_json_line() << '\n';
  }
  return 0;
}

struct SearchArgs {
  std::string zeros, out, sign = "pos", beta_list = "20", cutoff = "14000";
  int nu_min = 0, nu_max = 0, threads = 1, max_tours = 32;
  std::optional<int> n_min, n_max;
  long trials = 500;
  std::uint64_t seed = 0;
  unsigned bits = PrecisionContext::kDefaultBits;
  unsigned verify_bits = PrecisionContext::kVerifyBits;
  double eval_threshold = 0.5;
  bool resume = false;
  bool quiet = false;
  bool allow_partial = false;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

int cmd_search(const SearchArgs& a) {
  SearchConfig c;
  c.zeros_path = a.zeros;
  c.out_path = a.out;
  c.nu_min = a.nu_min;
  c.nu_max = a.nu_max;
  c.n_min = a.n_min;
  c.n_max = a.n_max;
  c.beta_values = parse_int_list(a.beta_list);
  c.trials = a.trials;
  c.base_seed = a.seed;
  c.sign_modes = parse_sign_list(a.sign);
  c.gamma_cut = Decimal::parse(a.cutoff);
  c.precision_bits = a.bits;
  c.verify_bits = a.verify_bits;
  c.threads = a.threads;
  c.resume = a.resume;
  c.eval_threshold = a.eval_threshold;
  c.max_tours = a.max_tours;
  c.require_coverage = !a.allow_partial;
  const SearchSummary s = run_search(c, a.quiet ? nullptr : &std::cerr);
  std::cout << "trials run " << s.trials_run << ", skipped " << s.skipped << ", errors " << s.errors
            << ", certified " << s.certified << '\n';
  return 0;
}

int cmd_verify(const std::string& zeros, const std::string& results, unsigned bits, bool allow_partial) {
  const ZeroTable table = parse_table(zeros);
  const VerifySummary s = verify_results(table, results, bits, std::cout, 50, !allow_partial);
  std::cout << "checked " << s.checked << ", agreed " << s.agreed << ", disagreed " << s.disagreed
            << ", min digits " << s.min_agreement_digits << '\n';
  return s.disagreed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice search for large values of Pintz's h_P"};
  app.require_subcommand(1);
  int status = 0;

  auto* zeros = app.add_subcommand("zeros", "Zero-table utilities");
  zeros->require_subcommand(1);
  std::string zeros_in;
  auto* validate = zeros->add_subcommand("validate", "Parse and check a zero table");
  validate->add_option("--in", zeros_in, "table file")->required();
  validate->callback([&] { status = cmd_zeros_validate(zeros_in); });

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Write the embedding basis");
  build->add_option("--zeros", build_args.zeros)->required();
  build->add_option("--nu", build_args.nu)->required();
  build->add_option("--n", build_args.n)->required();
  build->add_option("--sign", build_args.sign)->check(CLI::IsMember({"pos", "neg"}));
  build->add_option("--bits", build_args.bits);
  build->add_option("--out", build_args.out)->required();
  build->callback([&] { status = cmd_build(build_args); });

  ReduceArgs reduce_args;
  auto* reduce = app.add_subcommand("reduce", "Randomize, LLL and BKZ-reduce a basis");
  reduce->add_option("--in", reduce_args.in)->required();
  reduce->add_option("--beta", reduce_args.beta)->required();
  reduce->add_option("--delta", reduce_args.delta);
  reduce->add_option("--seed", reduce_args.seed);
  reduce->add_option("--max-tours", reduce_args.max_tours, "0 = until no change");
  reduce->add_flag("--no-randomize", reduce_args.no_randomize);
  reduce->add_option("--out", reduce_args.out)->required();
  reduce->callback([&] { status = cmd_reduce(reduce_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate h_P at a dyadic y");
  eval->add_option("--zeros", eval_args.zeros)->required();
  auto* y_opt = eval->add_option("--y", eval_args.y_text, "decimal y (must be dyadic)");
  auto* z_opt = eval->add_option("--z", eval_args.z_text, "integer z, y = z / 1024");
  y_opt->excludes(z_opt);
  eval->add_option("--cutoff", eval_args.cutoff, "gamma cut (default 14000)");
  eval->add_option("--bits", eval_args.bits);
  eval->add_flag("--certify", eval_args.certify, "run the threshold check with a verify pass");
  eval->add_option("--verify-bits", eval_args.verify_bits);
  eval->add_flag("--allow-partial", eval_args.allow_partial, "accept tables not reaching the cut");
  eval->add_option("--out", eval_args.out, "append a result record");
  eval->callback([&] {
    if (eval_args.y_text.empty() && eval_args.z_text.empty()) throw CLI::RequiredError("--y or --z");
    status = cmd_eval(eval_args);
  });

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Randomized reduction sweep");
  search->add_option("--zeros", search_args.zeros)->required();
  search->add_option("--nu-min", search_args.nu_min)->required();
  search->add_option("--nu-max", search_args.nu_max)->required();
  search->add_option("--n-min", search_args.n_min);
  search->add_option("--n-max", search_args.n_max);
  search->add_option("--beta", search_args.beta_list, "comma-separated block sizes")->required();
  search->add_option("--trials", search_args.trials);
  search->add_option("--seed", search_args.seed);
  search->add_option("--sign", search_args.sign)->check(CLI::IsMember({"pos", "neg", "both"}));
  search->add_option("--threads", search_args.threads);
  search->add_option("--cutoff", search_args.cutoff);
  search->add_option("--bits", search_args.bits);
  search->add_option("--verify-bits", search_args.verify_bits);
  search->add_option("--eval-threshold", search_args.eval_threshold);
  search->add_option("--max-tours", search_args.max_tours);
  search->add_option("--out", search_args.out)->required();
  search->add_flag("--resume", search_args.resume);
  search->add_flag("--quiet", search_args.quiet);
  search->add_flag("--allow-partial", search_args.allow_partial, "accept tables not reaching gamma = 14000");
  search->callback([&] { status = cmd_search(search_args); });

  std::string verify_zeros, verify_results_path;
  unsigned verify_bits = PrecisionContext::kVerifyBits;
  bool verify_partial = false;
  auto* verify = app.add_subcommand("verify", "Re-evaluate recorded h_P values at high precision");
  verify->add_option("--zeros", verify_zeros)->required();
  verify->add_option("--results", verify_results_path)->required();
  verify->add_option("--bits", verify_bits);
  verify->add_flag("--allow-partial", verify_partial, "accept tables not reaching the recorded cut");
  verify->callback([&] { status = cmd_verify(verify_zeros, verify_results_path, verify_bits, verify_partial); });

  std::string report_path;
  std::size_t top = 10;
  auto* rep = app.add_subcommand("report", "Summarize a results file");
  rep->add_option("--results", report_path)->required();
  rep->add_option("--top", top);
  rep->callback([&] { report(report_path, top, std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mertens::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}
