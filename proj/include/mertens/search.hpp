// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Randomized reduction sweeps. Every trial is a pure function of
// (base_seed, nu, n, beta, sign_mode, trial) and produces exactly one JSON
// Lines record, appended and flushed as soon as the trial finishes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mertens/evaluator.hpp"
#include "mertens/mertens_lattice.hpp"
#include "mertens/reduction.hpp"
#include "mertens/zeta_data.hpp"

namespace mertens {

struct SearchConfig {
  int nu_min = 0;
  int nu_max = 0;
  // Empty bounds follow the rule 2n <= nu <= 4n.
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::vector<int> beta_values{20};
  long trials = 500;
  std::uint64_t base_seed = 0;
  std::vector<SignMode> sign_modes{SignMode::kPositive};
  std::filesystem::path zeros_path;
  Decimal gamma_cut = Decimal{kGammaLimit, 0};
  unsigned precision_bits = PrecisionContext::kDefaultBits;
  unsigned verify_bits = PrecisionContext::kVerifyBits;
  int threads = 1;
  std::filesystem::path out_path;
  bool resume = false;
  // Candidates with |hp_approx| above this get an exact evaluation.
  double eval_threshold = 0.5;
  double delta = 0.99;
  int max_tours = 32;
  // Off only for partial tables; the tail bound is then not rigorous.
  bool require_coverage = true;

  // trials >= 1, 8 <= nu_min <= nu_max <= 200, betas >= 2, threads >= 1.
  void validate() const;
  // ceil(nu/4) .. floor(nu/2), clipped to [n_min, n_max] when given.
  std::vector<int> n_values(int nu) const;
};

struct TrialKey {
  int nu = 0;
  int n = 0;
  int beta = 0;
  SignMode sign_mode = SignMode::kPositive;
  long trial = 0;

  auto operator<=>(const TrialKey&) const = default;
  std::string to_string() const;
};

// h = mix64(base_seed); then h = mix64(h ^ v) for v = nu, n, beta,
// sign (0 pos, 1 neg), trial, each as an unsigned 64-bit value.
std::uint64_t trial_seed(std::uint64_t base_seed, const TrialKey& key);

// Trials in (nu, n, beta, trial, sign) order; sign modes interleave.
std::vector<TrialKey> enumerate_trials(const SearchConfig& config);

struct ResultRecord {
  std::string source = "search";  // "search" or "eval"
  TrialKey key;
  std::uint64_t seed = 0;
  std::string gamma_cut = "14000";
  std::optional<std::string> z;
  std::optional<std::string> y;
  std::optional<std::string> hp_approx;
  std::optional<std::string> hp_exact;
  std::optional<std::string> hp_verify;
  unsigned precision_bits = 0;
  Verdict verdict = Verdict::kFail;
  std::optional<std::string> bound;
  std::optional<std::string> bound_truncated;
  double reduction_wall_ms = 0;
  std::string timestamp;
  long n_candidates = 0;
  std::optional<std::string> offset_max;
  std::optional<double> gap_ratio;
  std::optional<std::string> error;

  std::string to_json_line() const;
  // Throws ParseError.
  static ResultRecord from_json_line(std::string_view line);
};

// Current UTC time, ISO 8601 with milliseconds.
std::string utc_timestamp();

class TrialRunner {
 public:
  TrialRunner(const ZeroTable& table_by_gamma, const SearchConfig& config);

  // Never throws for per-trial failures; they land in ResultRecord::error.
  ResultRecord run(const TrialKey& key) const;

 private:
  SearchConfig config_;
  ZeroTable by_gamma_;
  ZeroTable by_alpha_;
  ZeroTable by_alpha_shifted_;
  PrecisionContext work_;
  PrecisionContext verify_;
  HpEvaluator evaluator_;
  BigReal tail_;
};

struct SearchSummary {
  long trials_run = 0;
  long skipped = 0;
  long errors = 0;
  long certified = 0;
};

// Keys already present in a results file; unparseable lines are ignored.
std::vector<TrialKey> completed_keys(const std::filesystem::path& results_path);

// Fatal errors (bad table, unwritable output) throw; everything else is
// recorded per trial.
SearchSummary run_search(const SearchConfig& config, std::ostream* progress = nullptr);

// round((log10_y + 5.5) / log10(2)); log10_y must lie in [3, 60].
int heuristic_nu_for_target(double log10_y);

struct ResultsFile {
  std::vector<ResultRecord> records;
  long skipped_lines = 0;
};
ResultsFile read_results(const std::filesystem::path& path);

// Top-k by |hp_exact| (else |hp_approx|), certified flags, best bound.
// Returns the number of records listed.
std::size_t report(const std::filesystem::path& results_path, std::size_t top_k, std::ostream& out);

struct VerifySummary {
  long checked = 0;
  long agreed = 0;
  long disagreed = 0;
  double min_agreement_digits = 0;
};

// Re-evaluates every record with hp_exact at `bits` (using the record's own
// gamma_cut) and compares digits.
VerifySummary verify_results(const ZeroTable& table_by_gamma, const std::filesystem::path& results_path,
                             unsigned bits, std::ostream& out, int required_digits = 50,
                             bool require_coverage = true);

}  // namespace mertens
