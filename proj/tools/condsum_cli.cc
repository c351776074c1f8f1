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

// Command-line front end: universe generation, seeded estimator trials,
// query-scaling audits and sampler conformance checks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "condsum/conformance.h"
#include "condsum/generators.h"
#include "condsum/harness.h"
#include "condsum/universe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

struct Options {
  std::optional<std::int64_t> n;
  double epsilon = 0.25;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1;
  std::string generator;
  std::string variant = "union";
  std::string out;
  std::string format = "csv";
  std::optional<double> c_T, c_U, c_S, c_R;
  std::optional<std::uint64_t> amplification;
  unsigned threads = 1;
  bool timing = false;
  std::string universe;
  // audit-queries
  std::vector<std::int64_t> grid_n = {1000, 10000, 100000};
  std::vector<double> grid_epsilon = {0.2, 0.35, 0.5};
  bool unimodal = false;
  // verify-oracles
  std::uint64_t samples = 100000;
  int universes = 20;
  int intervals = 5;
  double alpha = 0.01;
};

bool has_key(const std::string& spec, const std::string& key) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) return false;
  std::stringstream items(spec.substr(colon + 1));
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.rfind(key + "=", 0) == 0) return true;
  }
  return false;
}

condsum::GeneratorSpec resolve_generator(const Options& o, const char* fallback_kind) {
  const std::string text = o.generator.empty() ? fallback_kind : o.generator;
  condsum::GeneratorSpec spec = condsum::parse_generator_spec(text);
  if (o.n) {
    spec.n = *o.n;
  } else if (!has_key(text, "n")) {
    throw std::invalid_argument("--n is required unless the generator sets n");
  }
  return spec;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw condsum::IoError("cannot write " + o.out);
  file << text;
  file.flush();
  if (!file) throw condsum::IoError("cannot write " + o.out);
}

int cmd_generate(const Options& o) {
  const condsum::GeneratorSpec spec = resolve_generator(o, "power-law");
  const condsum::Universe u = condsum::generate(spec, condsum::trial_seed(*o.seed, 0));
  if (o.out.empty()) {
    std::cout << condsum::universe_to_json(u).dump() << '\n';
  } else {
    condsum::write_universe_file(o.out, u);
  }
  return kExitOk;
}

int cmd_trials(const Options& o, condsum::Algorithm algorithm, const char* fallback_kind) {
  condsum::RunConfig cfg;
  cfg.algorithm = algorithm;
  if (o.universe.empty()) {
    cfg.generator = resolve_generator(o, fallback_kind);
  } else {
    cfg.universe_path = o.universe;
  }
  cfg.epsilon = o.epsilon;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  cfg.variant = condsum::parse_support_variant(o.variant);
  if (o.c_T) cfg.sum_constants.c_T = *o.c_T;
  if (o.c_U) cfg.sum_constants.c_U = *o.c_U;
  if (o.c_S) cfg.support_constants.c_S = *o.c_S;
  if (o.c_R) cfg.support_constants.c_R = *o.c_R;
  cfg.sum_constants.amplification = o.amplification;
  cfg.output_path = o.out;
  cfg.format = condsum::parse_report_format(o.format);
  cfg.threads = o.threads;
  cfg.timing = o.timing;
  cfg.validate();

  const std::vector<condsum::ReportRow> rows = condsum::run_trials(cfg);
  if (cfg.output_path.empty()) {
    std::cout << condsum::format_report(rows, cfg.format);
    std::cerr << condsum::to_json(condsum::summarize(cfg, rows)).dump(2) << '\n';
  } else {
    condsum::write_report_files(cfg, rows);
  }
  return kExitOk;
}

int cmd_audit(const Options& o) {
  condsum::ScalingAuditConfig cfg;
  cfg.ns.assign(o.grid_n.begin(), o.grid_n.end());
  cfg.epsilons = o.grid_epsilon;
  if (!o.generator.empty()) cfg.generator = condsum::parse_generator_spec(o.generator);
  if (o.c_T) cfg.constants.c_T = *o.c_T;
  if (o.c_U) cfg.constants.c_U = *o.c_U;
  cfg.constants.amplification = o.amplification;
  cfg.seed = *o.seed;
  cfg.unimodal = o.unimodal;
  for (double e : cfg.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("grid epsilon must lie in (0, 1)");
  }
  const condsum::ScalingAudit audit = condsum::audit_query_scaling(cfg);
  emit(o, condsum::to_json(audit).dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const Options& o) {
  condsum::OracleConformanceConfig cfg;
  cfg.max_n = o.n.value_or(50);
  cfg.universes = o.universes;
  cfg.intervals_per_universe = o.intervals;
  cfg.samples = o.samples;
  cfg.alpha = o.alpha;
  cfg.seed = *o.seed;
  const condsum::OracleConformanceSummary summary = condsum::verify_oracles(cfg);
  std::ostringstream text;
  text << "label,n,lo,hi,statistic,dof,p_value,passed\n";
  for (const condsum::ConformanceCheck& c : summary.checks) {
    text << c.label << ',' << c.n << ',' << c.set.lo << ',' << c.set.hi << ','
         << condsum::format_double(c.result.statistic) << ',' << c.result.dof << ','
         << condsum::format_double(c.result.p_value) << ',' << (c.passed ? "true" : "false")
         << '\n';
  }
  emit(o, text.str());
  std::cerr << summary.checks.size() << " tests, " << summary.failures
            << " below significance " << cfg.alpha << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum and support-size estimation over simulated weighted universes"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed")->required();
    sub->add_option("--n", o.n, "Universe size");
    sub->add_option("--generator", o.generator, "Generator spec, kind[:key=value,...]");
    sub->add_option("--out", o.out, "Output path (default: stdout)");
  };
  auto add_trial_options = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--epsilon", o.epsilon, "Accuracy parameter in (0,1)");
    sub->add_option("--trials", o.trials, "Number of trials");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--universe", o.universe, "Universe JSON file used for every trial");
    sub->add_option("--c-T", o.c_T, "Main-loop sample constant");
    sub->add_option("--c-U", o.c_U, "Uniformity tester sample constant");
    sub->add_option("--amplification", o.amplification, "Majority-vote repetitions");
    sub->add_option("--threads", o.threads, "Worker threads for trials");
    sub->add_flag("--timing", o.timing, "Record wall_ms per trial");
  };

  CLI::App* gen = app.add_subcommand("generate", "Write a generated universe as JSON");
  add_common(gen);
  CLI::App* mono = app.add_subcommand("sum-monotone", "Total weight of a monotone universe");
  add_trial_options(mono);
  CLI::App* uni = app.add_subcommand("sum-unimodal", "Total weight of a unimodal universe");
  add_trial_options(uni);
  CLI::App* sup = app.add_subcommand("support-size", "Support size under the min-weight promise");
  add_trial_options(sup);
  sup->add_option("--variant", o.variant, "union or literal");
  sup->add_option("--c-S", o.c_S, "Neighbourhood sample constant");
  sup->add_option("--c-R", o.c_R, "Cover sample constant");
  CLI::App* uniform = app.add_subcommand("test-uniformity", "Uniformity test on [1..n]");
  add_trial_options(uniform);
  CLI::App* audit = app.add_subcommand("audit-queries", "Fit conditional-query counts");
  add_common(audit);
  audit->add_option("--grid-n", o.grid_n, "Universe sizes")->delimiter(',');
  audit->add_option("--grid-epsilon", o.grid_epsilon, "Accuracy parameters")->delimiter(',');
  audit->add_option("--c-T", o.c_T, "Main-loop sample constant");
  audit->add_option("--c-U", o.c_U, "Uniformity tester sample constant");
  audit->add_option("--amplification", o.amplification, "Majority-vote repetitions");
  audit->add_flag("--unimodal", o.unimodal, "Also check valley-search eval counts");
  CLI::App* verify = app.add_subcommand("verify-oracles", "Chi-square checks of the samplers");
  verify->add_option("--seed", o.seed, "Master seed")->required();
  verify->add_option("--n", o.n, "Largest universe size");
  verify->add_option("--samples", o.samples, "Samples per test");
  verify->add_option("--universes", o.universes, "Random universes");
  verify->add_option("--intervals", o.intervals, "Intervals per universe");
  verify->add_option("--alpha", o.alpha, "Significance level");
  verify->add_option("--out", o.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (mono->parsed()) return cmd_trials(o, condsum::Algorithm::kSumMonotone, "power-law");
    if (uni->parsed()) return cmd_trials(o, condsum::Algorithm::kSumUnimodal, "strict-unimodal");
    if (sup->parsed()) return cmd_trials(o, condsum::Algorithm::kSupportSize, "sparse-support");
    if (uniform->parsed()) return cmd_trials(o, condsum::Algorithm::kTestUniformity, "constant");
    if (audit->parsed()) return cmd_audit(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const condsum::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
