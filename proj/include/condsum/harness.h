// Copyright 2026 The condsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONDSUM_HARNESS_H_
#define CONDSUM_HARNESS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condsum/generators.h"
#include "condsum/oracle.h"
#include "condsum/sum_estimators.h"
#include "condsum/support_estimators.h"
#include "condsum/universe.h"
#include "json.hpp"

namespace condsum {

enum class Algorithm { kSumMonotone, kSumUnimodal, kSupportSize, kTestUniformity };

const char* to_string(Algorithm a);
// "sum-monotone", "sum-unimodal", "support-size" or "test-uniformity".
Algorithm parse_algorithm(std::string_view text);

enum class ReportFormat { kCsv, kJson };

const char* to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

struct RunConfig {
  Algorithm algorithm = Algorithm::kSumMonotone;
  GeneratorSpec generator;
  // When set, every trial runs on this universe file instead of a generated
  // one.
  std::optional<std::string> universe_path;
  double epsilon = 0.25;
  std::uint64_t trials = 1;
  std::optional<std::uint64_t> master_seed;
  SupportVariant variant = SupportVariant::kUnion;
  SumConstants sum_constants;
  SupportConstants support_constants;
  std::string output_path;  // empty: no files are written
  ReportFormat format = ReportFormat::kCsv;
  unsigned threads = 1;
  bool timing = false;  // wall_ms stays 0 unless set

  // Throws std::invalid_argument: trials >= 1, epsilon in (0, 1), seed
  // present, threads >= 1.
  void validate() const;
};

struct ReportRow {
  std::uint64_t run_id = 0;  // trial index
  std::string algorithm;
  std::string variant;
  Index n = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;  // trial seed
  double estimate = 0.0;
  double exact = 0.0;
  std::optional<double> relative_error;  // |estimate - exact| / exact, exact > 0
  std::string branch;
  QueryStats stats;
  double wall_ms = 0.0;

  // Not serialized.
  std::optional<double> main_loop_value;
  std::optional<Index> valley;
};

// ReportRow field names in serialization order; the CSV header.
inline constexpr std::array<std::string_view, 17> kReportFields = {
    "run_id",          "algorithm",             "variant",
    "n",               "epsilon",               "seed",
    "estimate",        "exact",                 "relative_error",
    "branch",          "weighted_cond_queries", "uniform_cond_queries",
    "eval_queries",    "weighted_full_queries", "uniform_full_queries",
    "zero_mass_fallbacks", "wall_ms"};

// Seed of trial t; the universe is generated from it and the oracle uses a
// sibling substream.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);
std::uint64_t trial_oracle_seed(std::uint64_t master_seed, std::uint64_t trial);

// One row per trial, in trial order regardless of cfg.threads. Throws
// std::invalid_argument on an invalid config or generator, IoError when the
// universe file cannot be read.
std::vector<ReportRow> run_trials(const RunConfig& cfg);

// Shortest round-trip decimal form.
std::string format_double(double x);

void write_csv(std::ostream& out, std::span<const ReportRow> rows);
void write_json(std::ostream& out, std::span<const ReportRow> rows);
std::string format_report(std::span<const ReportRow> rows, ReportFormat format);

struct BandStats {
  std::string name;
  std::string definition;
  std::uint64_t hits = 0;
  double rate = 0.0;
};

struct RunSummary {
  std::string algorithm;
  std::uint64_t trials = 0;
  double mean_estimate = 0.0;
  double mean_exact = 0.0;
  std::optional<double> mean_relative_error;
  std::optional<double> max_relative_error;
  std::uint64_t exact_hits = 0;  // rows with estimate == exact
  std::vector<BandStats> bands;
};

// Guarantee bands per algorithm. Sums: "proof" (1-2e)W < est < (1+e)W and
// "statement" (1-2e)W <= est <= (1-e)W. Support: "theorem"
// k - 2en <= est <= k + en. Uniformity tests report no band.
RunSummary summarize(const RunConfig& cfg, std::span<const ReportRow> rows);
nlohmann::ordered_json to_json(const RunSummary& s);

// Writes the report to cfg.output_path and the summary to
// "<output_path>.summary.json". Throws IoError.
void write_report_files(const RunConfig& cfg, std::span<const ReportRow> rows);

struct ScalingAuditConfig {
  std::vector<Index> ns = {1000, 10000, 100000};
  std::vector<double> epsilons = {0.2, 0.35, 0.5};
  // Monotone family run at each grid point; n is overwritten.
  GeneratorSpec generator = parse_generator_spec("power-law");
  SumConstants constants;
  std::uint64_t seed = 0;
  // Adds one strict-unimodal valley search per n.
  bool unimodal = false;
  double min_ratio = 0.5;
  double max_ratio = 2.0;
};

struct ScalingPoint {
  Index n = 0;
  double epsilon = 0.0;
  std::uint64_t measured = 0;  // conditional queries of one run
  double predicted = 0.0;
  double ratio = 0.0;  // measured / predicted
  bool within = false;
  // The run's query log starts with planned_sum_queries(...).
  bool follows_plan = false;
};

struct UnimodalEvalCheck {
  Index n = 0;
  std::uint64_t eval_queries = 0;
  std::uint64_t bound = 0;  // 3 ceil(log2 n) + 8
  bool within = false;
};

struct ScalingAudit {
  double a = 0.0;  // coefficient of (1/e^3) ln n
  double b = 0.0;  // coefficient of 1/e^6
  std::vector<ScalingPoint> points;
  std::vector<UnimodalEvalCheck> unimodal;
  bool all_within = false;
};

// Fits measured counts to a (1/e^3) ln n + b / e^6 by least squares on
// relative residuals and flags ratios outside [min_ratio, max_ratio].
// Throws std::invalid_argument with fewer than three distinct n.
ScalingAudit audit_query_scaling(const ScalingAuditConfig& cfg);
nlohmann::ordered_json to_json(const ScalingAudit& audit);

// True when `log` begins with `plan` block for block. The last planned
// block may be longer in the log, since later queries on the same set merge
// into it.
bool follows_plan(std::span<const QueryBlock> log, std::span<const QueryBlock> plan);

std::uint64_t valley_eval_bound(Index n);

}  // namespace condsum

#endif  // CONDSUM_HARNESS_H_
