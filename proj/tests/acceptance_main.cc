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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
// if any criterion fails. Tolerances are fixed here and not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "condsum/conformance.h"
#include "condsum/generators.h"
#include "condsum/harness.h"
#include "condsum/oracle.h"
#include "condsum/partition.h"
#include "condsum/sum_estimators.h"
#include "condsum/support_estimators.h"
#include "condsum/universe.h"
#include "oracles.h"

namespace condsum {
namespace {

constexpr std::uint64_t kMasterSeed = 20261019;

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* pattern, double a = 0, double b = 0, double c = 0, double d = 0,
                double e = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d, e);
  return buf;
}

RunConfig trial_config(Algorithm algorithm, const std::string& generator, double eps,
                       std::uint64_t trials, std::uint64_t seed) {
  RunConfig cfg;
  cfg.algorithm = algorithm;
  cfg.generator = parse_generator_spec(generator);
  cfg.epsilon = eps;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.threads = worker_threads();
  return cfg;
}

std::uint64_t count_exact(const std::vector<ReportRow>& rows) {
  return static_cast<std::uint64_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.relative_error && *r.relative_error == 0.0;
  }));
}

// 1. Sampler conformance.
Outcome oracle_conformance() {
  OracleConformanceConfig cfg;
  cfg.max_n = 50;
  cfg.universes = 20;
  cfg.intervals_per_universe = 5;
  cfg.samples = 100000;
  cfg.alpha = 0.01;
  cfg.seed = kMasterSeed;
  const OracleConformanceSummary s = verify_oracles(cfg);
  return {s.failures <= 2, fmt("%.0f chi-square tests at alpha 0.01, %.0f below (<= 2 allowed)",
                               static_cast<double>(s.checks.size()), s.failures)};
}

// 2. Partition structure and closeness.
std::vector<double> random_monotone(Rng& rng, Index n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  switch (rng.below(4)) {
    case 0: {
      const double p = rng.uniform(0.0, 3.0);
      for (Index i = 1; i <= n; ++i) w[i - 1] = std::pow(static_cast<double>(i), -p);
      break;
    }
    case 1: {
      double level = 1.0;
      for (double& x : w) {
        if (rng.uniform01() < 0.05) level *= rng.uniform01();
        x = level;
      }
      break;
    }
    case 2: {
      const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      for (Index i = 0; i < k; ++i) w[i] = 1.0;
      break;
    }
    default: {
      for (double& x : w) x = rng.uniform01();
      std::sort(w.begin(), w.end(), std::greater<>());
      if (w.front() == 0.0) w.front() = 1.0;
    }
  }
  return w;
}

Outcome birge_properties() {
  const double grid[] = {0.05, 0.1, 0.25, 0.5, 0.9};
  std::uint64_t structure_bad = 0;
  std::uint64_t bound_bad = 0;
  std::uint64_t worst_bad = 0;
  for (double eps : grid) {
    for (Index n = 1; n <= 2000; ++n) {
      for (Direction dir : {Direction::kDecreasing, Direction::kIncreasing}) {
        const IntervalPartition p = make_partition(n, eps, dir);
        Index next = 1;
        for (const Interval& iv : p.intervals()) {
          if (iv.lo != next || iv.hi < iv.lo) ++structure_bad;
          next = iv.hi + 1;
        }
        if (next != n + 1) ++structure_bad;
        if (p.size() > interval_count_bound(n, eps)) ++bound_bad;
        if (dir == Direction::kDecreasing && testing::worst_case_flattening_tv(p) > eps) {
          ++worst_bad;
        }
      }
    }
  }
  Rng rng(substream_seed(kMasterSeed, 2));
  std::uint64_t tv_bad = 0;
  double worst_ratio = 0.0;
  for (Direction dir : {Direction::kDecreasing, Direction::kIncreasing}) {
    for (int t = 0; t < 500; ++t) {
      const Index n = 1 + static_cast<Index>(rng.below(500));
      const double eps = grid[rng.below(5)];
      std::vector<double> w = random_monotone(rng, n);
      if (dir == Direction::kIncreasing) std::reverse(w.begin(), w.end());
      const Universe u(std::move(w));
      const double tv = exact_tv_distance(induced_distribution(u),
                                          flatten(u, make_partition(n, eps, dir)));
      worst_ratio = std::max(worst_ratio, tv / eps);
      if (tv > eps) ++tv_bad;
    }
  }
  const bool pass = structure_bad == 0 && bound_bad == 0 && worst_bad == 0 && tv_bad == 0;
  return {pass, fmt("grid: %.0f structure, %.0f count-bound, %.0f worst-case violations; "
                    "1000 random instances: %.0f d_TV violations, max d_TV/eps %.3f",
                    structure_bad, bound_bad, worst_bad, tv_bad, worst_ratio)};
}

// 3. Uniformity tester.
Outcome uniformity_tester() {
  const double eps = 0.5;
  const SumParams p = SumParams::make(eps, 100);
  const Universe constant(std::vector<double>(100, 1.3));
  std::uint64_t false_rejects = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    OracleSession s(constant, substream_seed(kMasterSeed, t, 3));
    false_rejects += test_uniformity(s, constant.domain(), eps, p.t1, p.t2).verdict ==
                     Verdict::kReject;
  }
  std::vector<double> w(100, 2.0);
  std::fill(w.begin() + 50, w.end(), 1.0);
  const Universe far(w);
  std::uint64_t rejects = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    OracleSession s(far, substream_seed(kMasterSeed, t, 4));
    rejects += test_uniformity(s, far.domain(), eps, p.t1, p.t2).verdict == Verdict::kReject;
  }
  const double exact = testing::exact_single_reject_probability(far, far.domain(), eps, p.t1, p.t2);
  return {false_rejects == 0 && rejects >= 120,
          fmt("constant: %.0f/1000 rejections; half 2 / half 1: %.0f/200 rejections "
              "(>= 120 required, exact probability %.6f)",
              false_rejects, rejects, exact)};
}

struct ExactBranchRuns {
  std::vector<ReportRow> constant;
  std::vector<ReportRow> flat;
  RunConfig constant_cfg;
  RunConfig flat_cfg;
};

// 4. Exact branches.
ExactBranchRuns run_exact_branches() {
  ExactBranchRuns r;
  r.constant_cfg = trial_config(Algorithm::kSumMonotone, "constant:n=10000,c=1.7", 0.25, 100,
                                substream_seed(kMasterSeed, 4));
  r.constant = run_trials(r.constant_cfg);
  r.flat_cfg = trial_config(Algorithm::kSumMonotone, "birge-flat:n=10000,sum_eps=0.25", 0.25, 100,
                            substream_seed(kMasterSeed, 5));
  r.flat = run_trials(r.flat_cfg);
  return r;
}

Outcome exact_branches(const ExactBranchRuns& r) {
  const std::uint64_t a = count_exact(r.constant);
  const std::uint64_t b = count_exact(r.flat);
  return {a == 100 && b == 100,
          fmt("constant n=1e4: %.0f/100 zero-error; birge-flat n=1e4 eps=0.25: %.0f/100 "
              "zero-error",
              a, b)};
}

// 5. Main-loop mean against the exact expectation on power-law universes.
struct MainLoopRuns {
  RunConfig cfg;
  std::vector<ReportRow> rows;
};

Outcome main_loop_equivalence(MainLoopRuns& runs) {
  const double eps = 0.25;
  runs.cfg = trial_config(Algorithm::kSumMonotone, "power-law:n=10000,exponent=0.5", eps, 200,
                          substream_seed(kMasterSeed, 6));
  runs.rows = run_trials(runs.cfg);
  const Universe u = generate(runs.cfg.generator, 0);
  const SumParams p = SumParams::make(eps, u.n());
  const IntervalPartition part = make_partition(u.n(), p.epsilon1, Direction::kDecreasing);
  std::vector<std::size_t> j_det;
  std::uint64_t undecided = 0;
  double mixture = 0.0;
  for (std::size_t j = 1; j <= part.size(); ++j) {
    const double reject = testing::majority_probability(
        testing::exact_single_reject_probability(u, part.interval(j), eps, p.t1, p.t2),
        p.amplification);
    if (reject >= 0.99) j_det.push_back(j);
    if (reject > 0.01 && reject < 0.99) ++undecided;
    double sq = 0.0;
    for (Index i = part.interval(j).lo; i <= part.interval(j).hi; ++i) sq += u.weight(i) * u.weight(i);
    mixture += (1.0 - reject) * sq / exact_sum(u);
  }
  const double expected = testing::main_loop_expectation(u, u.domain(), part, j_det);
  double sum = 0.0, sum_sq = 0.0;
  for (const ReportRow& r : runs.rows) {
    sum += *r.main_loop_value;
    sum_sq += *r.main_loop_value * *r.main_loop_value;
  }
  const double n = static_cast<double>(runs.rows.size());
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  const double z = std::abs(mean - expected) / se;
  return {z <= 3.0,
          fmt("mean %.6f vs exact %.6f (|J_det| = %.0f, W = %.4f): %.2f standard errors",
              mean, expected, static_cast<double>(j_det.size()), exact_sum(u), z) +
              fmt("; mixture expectation %.6f, undecided intervals %.0f", mixture,
                  static_cast<double>(undecided))};
}

// 6. Band report.
Outcome band_report(const MainLoopRuns& power, const ExactBranchRuns& exact,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  RunConfig cfg = power.cfg;
  cfg.output_path = (dir / "power_law.csv").string();
  write_report_files(cfg, power.rows);
  RunConfig c = exact.constant_cfg;
  c.output_path = (dir / "constant.csv").string();
  write_report_files(c, exact.constant);
  RunConfig f = exact.flat_cfg;
  f.output_path = (dir / "birge_flat.csv").string();
  write_report_files(f, exact.flat);
  const bool produced = std::filesystem::exists(cfg.output_path + ".summary.json");
  const RunSummary ps = summarize(power.cfg, power.rows);
  const RunSummary cs = summarize(exact.constant_cfg, exact.constant);
  const RunSummary fs = summarize(exact.flat_cfg, exact.flat);
  return {produced && cs.bands[0].rate == 1.0 && fs.bands[0].rate == 1.0,
          fmt("power-law proof band %.3f, statement band %.3f; constant proof band %.3f; "
              "birge-flat proof band %.3f",
              ps.bands[0].rate, ps.bands[1].rate, cs.bands[0].rate, fs.bands[0].rate) +
              "; reports in " + dir.string()};
}

// 7. Unimodal.
Outcome unimodal() {
  Rng rng(substream_seed(kMasterSeed, 7));
  std::uint64_t wrong = 0;
  std::uint64_t over = 0;
  double worst_use = 0.0;
  for (int t = 0; t < 1000; ++t) {
    GeneratorSpec spec = parse_generator_spec("strict-unimodal");
    spec.n = 1 + static_cast<Index>(rng.below(100000));
    const Universe u = generate(spec, rng.next_u64());
    OracleSession s(u, rng.next_u64());
    const Index m = find_valley(s);
    const auto w = u.weights();
    if (m != std::min_element(w.begin(), w.end()) - w.begin() + 1) ++wrong;
    const auto bound = valley_eval_bound(u.n());
    if (s.stats().eval > bound) ++over;
    worst_use = std::max(worst_use, static_cast<double>(s.stats().eval) / bound);
  }
  const RunConfig cfg = trial_config(Algorithm::kSumUnimodal,
                                     "birge-flat:n=10000,sum_eps=0.25,valley=4000", 0.25, 100,
                                     substream_seed(kMasterSeed, 8));
  const std::vector<ReportRow> rows = run_trials(cfg);
  const std::uint64_t exact = count_exact(rows);
  return {wrong == 0 && over == 0 && exact == 100,
          fmt("1000 strict instances: %.0f wrong valleys, %.0f over the eval bound "
              "(max eval/bound %.2f); V-shaped birge-flat: %.0f/100 zero-error",
              wrong, over, worst_use, exact)};
}

// 8, 9 and the support half of 10.
struct SupportRuns {
  std::vector<std::vector<ReportRow>> rows;  // per k
  RunConfig literal_cfg;
  std::vector<ReportRow> literal;
};

const Index kSupportSizes[] = {1000, 3000, 5000};

SupportRuns run_support() {
  SupportRuns r;
  for (Index k : kSupportSizes) {
    r.rows.push_back(run_trials(trial_config(Algorithm::kSupportSize,
                                             "sparse-support:n=10000,k=" + std::to_string(k), 0.2,
                                             100, substream_seed(kMasterSeed, 9, k))));
  }
  r.literal_cfg = trial_config(Algorithm::kSupportSize, "constant:n=10000,c=1", 0.2, 3,
                               substream_seed(kMasterSeed, 10));
  r.literal_cfg.variant = SupportVariant::kLiteral;
  r.literal_cfg.support_constants.c_S = 1e-4;
  r.literal = run_trials(r.literal_cfg);
  return r;
}

Outcome support_size(const SupportRuns& r) {
  const double eps = 0.2;
  const double n = 10000;
  bool pass = true;
  std::string detail = "union band hits";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double kk = static_cast<double>(kSupportSizes[k]);
    std::uint64_t hits = 0;
    for (const ReportRow& row : r.rows[k]) {
      hits += kk - 2 * eps * n <= row.estimate && row.estimate <= kk + eps * n;
    }
    pass = pass && hits >= 90;
    detail += fmt(" k=%.0f: %.0f/100", kk, hits);
  }
  const SupportParams lp = SupportParams::make(eps, 10000, SupportVariant::kLiteral,
                                               r.literal_cfg.support_constants);
  std::uint64_t literal_exact = 0;
  for (const ReportRow& row : r.literal) {
    literal_exact += row.estimate == static_cast<double>(lp.R_budget) * n;
  }
  pass = pass && literal_exact == r.literal.size();
  detail += fmt("; literal on constant: %.0f/%.0f runs equal R_budget*n = %.0f", literal_exact,
                r.literal.size(), lp.R_budget * n);
  return {pass, detail};
}

Outcome cover_lemma() {
  const double eps = 0.2;
  bool pass = true;
  std::string detail = "W(uncovered) <= eps W";
  for (Index k : kSupportSizes) {
    std::uint64_t good = 0;
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      const Universe u = generate(
          parse_generator_spec("sparse-support:n=10000,k=" + std::to_string(k)),
          substream_seed(kMasterSeed, t, 11 + k));
      const SupportParams p = SupportParams::make(eps, u.n());
      OracleSession s(u, substream_seed(kMasterSeed, t, 12 + k));
      std::vector<double> centers;
      for (std::uint64_t j = 0; j < p.R_budget; ++j) centers.push_back(s.weighted_full_sample().weight);
      const double frac = testing::uncovered_weight(u, centers, eps) / exact_sum(u);
      worst = std::max(worst, frac);
      good += frac <= eps;
    }
    pass = pass && good >= 95;
    detail += fmt(" k=%.0f: %.0f/100 (max uncovered fraction %.2e)", static_cast<double>(k), good,
                  worst);
  }
  return {pass, detail};
}

// 10. Query scaling.
Outcome query_scaling(const SupportRuns& support) {
  ScalingAuditConfig cfg;
  cfg.ns = {1000, 10000, 100000};
  cfg.epsilons = {0.2, 0.35, 0.5};
  cfg.seed = substream_seed(kMasterSeed, 13);
  cfg.unimodal = true;
  const ScalingAudit audit = audit_query_scaling(cfg);
  double lo = 1e300, hi = 0.0;
  bool plans = true;
  for (const ScalingPoint& p : audit.points) {
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
    plans = plans && p.follows_plan;
  }
  std::uint64_t budget_bad = 0;
  std::uint64_t rows = 0;
  for (std::size_t k = 0; k < support.rows.size(); ++k) {
    const SupportParams p = SupportParams::make(0.2, 10000);
    for (const ReportRow& r : support.rows[k]) {
      ++rows;
      budget_bad += r.stats.weighted_full != p.R_budget || r.stats.uniform_full != p.S_budget;
    }
  }
  const SupportParams lp = SupportParams::make(0.2, 10000, SupportVariant::kLiteral,
                                               support.literal_cfg.support_constants);
  for (const ReportRow& r : support.literal) {
    ++rows;
    budget_bad += r.stats.weighted_full != lp.R_budget ||
                  r.stats.uniform_full != lp.R_budget * lp.S_budget;
  }
  return {audit.all_within && plans && budget_bad == 0,
          fmt("fit a=%.4g b=%.4g, ratios in [%.3f, %.3f]; ", audit.a, audit.b, lo, hi) +
              (plans ? "all runs follow the precomputed plan; " : "plan mismatch; ") +
              fmt("support counters off budget in %.0f of %.0f rows", budget_bad, rows)};
}

// 11. Reproducibility.
Outcome reproducibility(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<RunConfig> configs = {
      trial_config(Algorithm::kSumMonotone, "power-law:n=10000", 0.35, 12, 1),
      trial_config(Algorithm::kSumUnimodal, "strict-unimodal:n=20000", 0.5, 8, 2),
      trial_config(Algorithm::kSupportSize, "sparse-support:n=2000,k=500", 0.3, 8, 3),
      trial_config(Algorithm::kTestUniformity, "step:n=500,steps=2", 0.5, 20, 4)};
  std::uint64_t differing = 0;
  std::uint64_t compared = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (ReportFormat format : {ReportFormat::kCsv, ReportFormat::kJson}) {
      std::vector<std::string> outputs;
      for (unsigned threads : {1u, 1u, 4u, 4u}) {
        RunConfig cfg = configs[c];
        cfg.threads = threads;
        cfg.format = format;
        cfg.output_path =
            (dir / ("run" + std::to_string(outputs.size()) + "." + to_string(format))).string();
        write_report_files(cfg, run_trials(cfg));
        std::ifstream in(cfg.output_path, std::ios::binary);
        std::ifstream side(cfg.output_path + ".summary.json", std::ios::binary);
        outputs.push_back(std::string(std::istreambuf_iterator<char>(in), {}) +
                          std::string(std::istreambuf_iterator<char>(side), {}));
      }
      for (std::size_t k = 1; k < outputs.size(); ++k) {
        ++compared;
        differing += outputs[k] != outputs[0];
      }
    }
  }
  return {differing == 0, fmt("%.0f report pairs compared (serial and 4 threads, csv and json), "
                              "%.0f differ",
                              compared, differing)};
}

}  // namespace
}  // namespace condsum

int main() {
  using condsum::Outcome;
  namespace fs = std::filesystem;
  const fs::path out = fs::current_path() / "acceptance_reports";
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report(1, "oracle conformance", condsum::oracle_conformance);
  report(2, "partition properties", condsum::birge_properties);
  report(3, "uniformity tester", condsum::uniformity_tester);
  condsum::ExactBranchRuns exact;
  report(4, "exact branches", [&] {
    exact = condsum::run_exact_branches();
    return condsum::exact_branches(exact);
  });
  condsum::MainLoopRuns power;
  report(5, "main-loop expectation", [&] { return condsum::main_loop_equivalence(power); });
  report(6, "band report", [&] { return condsum::band_report(power, exact, out); });
  report(7, "unimodal", condsum::unimodal);
  condsum::SupportRuns support;
  report(8, "support size", [&] {
    support = condsum::run_support();
    return condsum::support_size(support);
  });
  report(9, "cover lemma", condsum::cover_lemma);
  report(10, "query scaling", [&] { return condsum::query_scaling(support); });
  report(11, "reproducibility", [&] { return condsum::reproducibility(out / "repro"); });
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
