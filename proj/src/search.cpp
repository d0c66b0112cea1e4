// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#include "mertens/search.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mertens/errors.hpp"

namespace mertens {

using nlohmann::json;

void SearchConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (nu_min < 8 || nu_max > 200 || nu_min > nu_max) throw DomainError("nu range must lie within [8, 200]");
  if (beta_values.empty()) throw DomainError("at least one beta is required");
  for (int b : beta_values) {
    if (b < 2) throw DomainError("beta must be >= 2");
  }
  if (sign_modes.empty()) throw DomainError("at least one sign mode is required");
  if (threads < 1) throw DomainError("threads must be >= 1");
  if (n_min && n_max && *n_min > *n_max) throw DomainError("n_min exceeds n_max");
  if (eval_threshold < 0) throw DomainError("evaluation threshold must be non-negative");
}

std::vector<int> SearchConfig::n_values(int nu) const {
  int lo = (nu + 3) / 4;
  int hi = nu / 2;
  if (n_min) lo = std::max(lo, *n_min);
  if (n_max) hi = std::min(hi, *n_max);
  lo = std::max(lo, 1);
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::string TrialKey::to_string() const {
  return "nu=" + std::to_string(nu) + " n=" + std::to_string(n) + " beta=" + std::to_string(beta) +
         " sign=" + mertens::to_string(sign_mode) + " trial=" + std::to_string(trial);
}

std::uint64_t trial_seed(std::uint64_t base_seed, const TrialKey& key) {
  std::uint64_t h = mix64(base_seed);
  for (std::uint64_t v : {static_cast<std::uint64_t>(key.nu), static_cast<std::uint64_t>(key.n),
                          static_cast<std::uint64_t>(key.beta),
                          static_cast<std::uint64_t>(key.sign_mode == SignMode::kNegative ? 1 : 0),
                          static_cast<std::uint64_t>(key.trial)}) {
    h = mix64(h ^ v);
  }
  return h;
}

std::vector<TrialKey> enumerate_trials(const SearchConfig& config) {
  std::vector<TrialKey> keys;
  for (int nu = config.nu_min; nu <= config.nu_max; ++nu) {
    for (int n : config.n_values(nu)) {
      for (int beta : config.beta_values) {
        for (long t = 0; t < config.trials; ++t) {
          for (SignMode s : config.sign_modes) keys.push_back(TrialKey{nu, n, beta, s, t});
        }
      }
    }
  }
  return keys;
}

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

std::string ResultRecord::to_json_line() const {
  json j;
  j["source"] = source;
  j["nu"] = key.nu;
  j["n"] = key.n;
  j["beta"] = key.beta;
  j["sign_mode"] = to_string(key.sign_mode);
  j["trial"] = key.trial;
  j["seed"] = seed;
  j["gamma_cut"] = gamma_cut;
  j["z"] = optional_json(z);
  j["y"] = optional_json(y);
  j["hp_approx"] = optional_json(hp_approx);
  j["hp_exact"] = optional_json(hp_exact);
  j["hp_verify"] = optional_json(hp_verify);
  j["precision_bits"] = precision_bits;
  j["verdict"] = to_string(verdict);
  j["bound"] = optional_json(bound);
  j["bound_truncated"] = optional_json(bound_truncated);
  j["reduction_wall_ms"] = reduction_wall_ms;
  j["timestamp"] = timestamp;
  j["n_candidates"] = n_candidates;
  j["offset_max"] = optional_json(offset_max);
  j["gap_ratio"] = optional_json(gap_ratio);
  j["error"] = optional_json(error);
  return j.dump();
}

ResultRecord ResultRecord::from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    ResultRecord r;
    r.source = j.value("source", std::string("search"));
    r.key.nu = j.at("nu").get<int>();
    r.key.n = j.at("n").get<int>();
    r.key.beta = j.at("beta").get<int>();
    r.key.sign_mode = parse_sign_mode(j.at("sign_mode").get<std::string>());
    r.key.trial = j.at("trial").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.gamma_cut = j.value("gamma_cut", std::string("14000"));
    r.z = optional_field<std::string>(j, "z");
    r.y = optional_field<std::string>(j, "y");
    r.hp_approx = optional_field<std::string>(j, "hp_approx");
    r.hp_exact = optional_field<std::string>(j, "hp_exact");
    r.hp_verify = optional_field<std::string>(j, "hp_verify");
    r.precision_bits = j.at("precision_bits").get<unsigned>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.bound = optional_field<std::string>(j, "bound");
    r.bound_truncated = optional_field<std::string>(j, "bound_truncated");
    r.reduction_wall_ms = j.value("reduction_wall_ms", 0.0);
    r.timestamp = j.value("timestamp", std::string());
    r.n_candidates = j.value("n_candidates", 0L);
    r.offset_max = optional_field<std::string>(j, "offset_max");
    r.gap_ratio = optional_field<double>(j, "gap_ratio");
    r.error = optional_field<std::string>(j, "error");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("result record: ") + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
  return out.str();
}

namespace {

EvalOptions eval_options(const SearchConfig& config) {
  EvalOptions o;
  o.gamma_cut = config.gamma_cut;
  o.require_coverage = config.require_coverage;
  // Trials already run in parallel; keep each evaluation on its own thread.
  o.parallel = false;
  return o;
}

TailOptions tail_options(const SearchConfig& config) {
  TailOptions o;
  o.require_coverage = config.require_coverage;
  return o;
}

}  // namespace

TrialRunner::TrialRunner(const ZeroTable& table_by_gamma, const SearchConfig& config)
    : config_(config),
      by_gamma_(table_by_gamma),
      by_alpha_(order_by_alpha(restrict_gamma_below(table_by_gamma, Decimal{kGammaLimit, 0}))),
      by_alpha_shifted_(shift_phases_by_pi(by_alpha_)),
      work_(config.precision_bits),
      verify_(config.verify_bits),
      evaluator_(table_by_gamma, work_, eval_options(config)),
      tail_(tail_bound(table_by_gamma, config.gamma_cut, work_, tail_options(config))) {}

ResultRecord TrialRunner::run(const TrialKey& key) const {
  ResultRecord rec;
  rec.key = key;
  rec.seed = trial_seed(config_.base_seed, key);
  rec.gamma_cut = config_.gamma_cut.to_string();
  rec.precision_bits = work_.bits();
  try {
    const BuildParams params{key.n, key.nu, key.sign_mode};
    const LatticeBasis basis = build_basis(by_alpha_, params, work_);

    ReductionParams rp;
    rp.delta = config_.delta;
    rp.beta = std::min<int>(key.beta, static_cast<int>(basis.dim()));
    rp.max_tours = config_.max_tours;
    const auto start = std::chrono::steady_clock::now();
    LatticeBasis reduced = randomize_unimodular(basis, rec.seed);
    reduced = lll(reduced, rp);
    reduced = bkz(reduced, rp);
    rec.reduction_wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const std::vector<Candidate> candidates = extract_candidates(reduced, params, key.beta, rec.seed, key.trial);
    rec.n_candidates = static_cast<long>(candidates.size());
    if (candidates.empty()) {
      rec.timestamp = utc_timestamp();
      return rec;
    }

    // Score against the phases the lattice was built from; in negative mode
    // that is psi + pi, and h_P ~ -score.
    const ZeroTable& scoring = key.sign_mode == SignMode::kNegative ? by_alpha_shifted_ : by_alpha_;
    std::size_t best = 0;
    std::optional<BigReal> best_score;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      BigReal s = h_p_approx(scoring, candidates[i].y, static_cast<std::size_t>(key.n), work_);
      if (!best_score || s > *best_score) {
        best_score = std::move(s);
        best = i;
      }
    }
    const Candidate& c = candidates[best];
    const BigReal approx = key.sign_mode == SignMode::kNegative ? -*best_score : *best_score;
    rec.z = c.z.get_str(10);
    rec.y = c.y.to_decimal();
    rec.hp_approx = approx.to_decimal(20);
    const Integer offset = c.max_offset();
    rec.offset_max = offset.get_str(10);
    const BigReal gap = expected_gap(by_alpha_, params, work_);
    rec.gap_ratio = (BigReal::from_integer(offset, work_.working_bits()) / gap).to_double();

    if (std::fabs(approx.to_double()) > config_.eval_threshold) {
      const BigReal hp = evaluator_(c.y);
      rec.hp_exact = hp.to_decimal(80);
      if (abs(hp) > certification_threshold(work_.working_bits()) - tail_) {
        CertifyOptions co;
        co.gamma_cut = config_.gamma_cut;
        co.require_coverage = config_.require_coverage;
        const Evaluation ev = certify(c.y, by_gamma_, work_, verify_, co);
        rec.verdict = ev.verdict;
        rec.precision_bits = ev.precision_bits;
        if (ev.hp_verify) rec.hp_verify = ev.hp_verify->to_decimal(80);
        if (ev.bound) {
          rec.bound = ev.bound->rendered;
          rec.bound_truncated = ev.bound->truncated;
        }
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.verdict = Verdict::kFail;
  }
  rec.timestamp = utc_timestamp();
  return rec;
}

std::vector<TrialKey> completed_keys(const std::filesystem::path& results_path) {
  std::vector<TrialKey> keys;
  std::ifstream in(results_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const ResultRecord r = ResultRecord::from_json_line(line);
      if (r.source == "search") keys.push_back(r.key);
    } catch (const Error&) {
      // A torn final line from an interrupted run; that trial reruns.
    }
  }
  return keys;
}

SearchSummary run_search(const SearchConfig& config, std::ostream* progress) {
  config.validate();
  const ZeroTable table = parse_table(config.zeros_path);
  const TrialRunner runner(table, config);

  std::vector<TrialKey> keys = enumerate_trials(config);
  SearchSummary summary;
  if (config.resume) {
    const std::vector<TrialKey> done_list = completed_keys(config.out_path);
    const std::set<TrialKey> done(done_list.begin(), done_list.end());
    const auto before = keys.size();
    std::erase_if(keys, [&](const TrialKey& k) { return done.count(k) > 0; });
    summary.skipped = static_cast<long>(before - keys.size());
  }

  if (config.resume && std::filesystem::exists(config.out_path)) {
    // Terminate a torn final line so the next record starts cleanly.
    std::ifstream check(config.out_path, std::ios::binary);
    check.seekg(0, std::ios::end);
    if (check.tellg() > 0) {
      check.seekg(-1, std::ios::end);
      char last = 0;
      check.get(last);
      if (last != '\n') std::ofstream(config.out_path, std::ios::app) << '\n';
    }
  }
  std::ofstream out(config.out_path, config.resume ? std::ios::app : std::ios::trunc);
  if (!out) throw Error("cannot open results file " + config.out_path.string());

  const long count = static_cast<long>(keys.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.threads)
  for (long i = 0; i < count; ++i) {
    const ResultRecord rec = runner.run(keys[i]);
    const std::string line = rec.to_json_line();
#pragma omp critical(mertens_results_writer)
    {
      out << line << '\n';
      out.flush();
      ++summary.trials_run;
      if (rec.error) ++summary.errors;
      if (rec.verdict == Verdict::kCertified) ++summary.certified;
      if (progress) {
        *progress << "[" << summary.trials_run << "/" << count << "] " << rec.key.to_string()
                  << " candidates=" << rec.n_candidates;
        if (rec.hp_approx) *progress << " approx=" << rec.hp_approx->substr(0, 10);
        if (rec.hp_exact) *progress << " exact=" << rec.hp_exact->substr(0, 12);
        if (rec.error) *progress << " error=" << *rec.error;
        *progress << '\n';
      }
    }
  }
  if (!out) throw Error("write to " + config.out_path.string() + " failed");
  return summary;
}

int heuristic_nu_for_target(double log10_y) {
  if (!(log10_y >= 3 && log10_y <= 60)) throw DomainError("log10_y must lie in [3, 60]");
  return static_cast<int>(std::lround((log10_y + 5.5) / std::log10(2.0)));
}

ResultsFile read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open results file " + path.string());
  ResultsFile file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      file.records.push_back(ResultRecord::from_json_line(line));
    } catch (const Error&) {
      ++file.skipped_lines;
    }
  }
  return file;
}

namespace {

// |value| for ranking; records without any value rank last.
std::optional<Decimal> magnitude(const ResultRecord& r) {
  const std::optional<std::string>& v = r.hp_exact ? r.hp_exact : r.hp_approx;
  if (!v) return std::nullopt;
  Decimal d = Decimal::parse(*v);
  if (d.mantissa < 0) d.mantissa = -d.mantissa;
  return d;
}

std::string shorten(const std::optional<std::string>& v, std::size_t width) {
  if (!v) return "-";
  return v->size() > width ? v->substr(0, width) + "..." : *v;
}

}  // namespace

std::size_t report(const std::filesystem::path& results_path, std::size_t top_k, std::ostream& out) {
  const ResultsFile file = read_results(results_path);
  std::vector<std::pair<std::optional<Decimal>, const ResultRecord*>> ranked;
  ranked.reserve(file.records.size());
  for (const ResultRecord& r : file.records) ranked.emplace_back(magnitude(r), &r);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first && b.first) return *a.first > *b.first;
    return a.first.has_value() && !b.first.has_value();
  });

  const std::size_t shown = std::min(top_k, ranked.size());
  out << std::left << std::setw(5) << "rank" << std::setw(5) << "nu" << std::setw(5) << "n" << std::setw(6)
      << "beta" << std::setw(6) << "sign" << std::setw(7) << "trial" << std::setw(44) << "y" << std::setw(18)
      << "h_P" << std::setw(11) << "verdict"
      << "bound\n";
  for (std::size_t i = 0; i < shown; ++i) {
    const ResultRecord& r = *ranked[i].second;
    const std::optional<std::string>& hp = r.hp_exact ? r.hp_exact : r.hp_approx;
    std::string flag = to_string(r.verdict);
    if (r.verdict == Verdict::kCertified) flag += " *";
    out << std::setw(5) << (i + 1) << std::setw(5) << r.key.nu << std::setw(5) << r.key.n << std::setw(6)
        << r.key.beta << std::setw(6) << to_string(r.key.sign_mode) << std::setw(7) << r.key.trial
        << std::setw(44) << r.y.value_or("-") << std::setw(18) << shorten(hp, 12) << std::setw(11) << flag
        << r.bound.value_or("") << '\n';
  }

  const ResultRecord* best = nullptr;
  for (const ResultRecord& r : file.records) {
    if (r.verdict != Verdict::kCertified || !r.y || !r.bound) continue;
    if (!best || Decimal::parse(*r.y) < Decimal::parse(*best->y)) best = &r;
  }
  if (best) {
    out << "best bound: " << *best->bound;
    if (best->bound_truncated) out << "  (truncated: " << *best->bound_truncated << ")";
    out << "  at y = " << *best->y << '\n';
  } else {
    out << "best bound: none certified\n";
  }
  if (file.skipped_lines) out << "skipped " << file.skipped_lines << " unparseable line(s)\n";
  return shown;
}

VerifySummary verify_results(const ZeroTable& table, const std::filesystem::path& results_path, unsigned bits,
                             std::ostream& out, int required_digits, bool require_coverage) {
  const ResultsFile file = read_results(results_path);
  const PrecisionContext ctx(bits);
  std::map<std::string, std::unique_ptr<HpEvaluator>> evaluators;
  VerifySummary summary;
  summary.min_agreement_digits = std::numeric_limits<double>::infinity();
  for (const ResultRecord& r : file.records) {
    if (!r.hp_exact || !r.y) continue;
    auto& ev = evaluators[r.gamma_cut];
    if (!ev) {
      EvalOptions o;
      o.gamma_cut = Decimal::parse(r.gamma_cut);
      o.require_coverage = require_coverage;
      ev = std::make_unique<HpEvaluator>(table, ctx, o);
    }
    const Dyadic y = Dyadic::parse(*r.y);
    const BigReal verified = (*ev)(y);
    const BigReal recorded = BigReal::from_decimal(*r.hp_exact, ctx.working_bits());
    // The stored value is rounded to its printed digits; agreement cannot
    // exceed that.
    const double digits = agreement_digits(verified, recorded);
    ++summary.checked;
    summary.min_agreement_digits = std::min(summary.min_agreement_digits, digits);
    const bool ok = digits >= required_digits;
    if (ok) {
      ++summary.agreed;
    } else {
      ++summary.disagreed;
    }
    out << (ok ? "agree    " : "DISAGREE ") << "y = " << *r.y << "  h_P = " << verified.to_decimal(30)
        << "  digits = " << std::fixed << std::setprecision(1) << digits << std::defaultfloat << '\n';
  }
  if (summary.checked == 0) summary.min_agreement_digits = 0;
  return summary;
}

}  // namespace mertens
