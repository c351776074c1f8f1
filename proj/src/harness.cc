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

#include "condsum/harness.h"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace condsum {
namespace {

ReportRow run_one(const RunConfig& cfg, const Universe& universe, std::uint64_t t) {
  const std::uint64_t master = *cfg.master_seed;
  ReportRow row;
  row.run_id = t;
  row.algorithm = to_string(cfg.algorithm);
  row.n = universe.n();
  row.epsilon = cfg.epsilon;
  row.seed = trial_seed(master, t);

  const auto start = std::chrono::steady_clock::now();
  OracleSession session(universe, trial_oracle_seed(master, t));
  switch (cfg.algorithm) {
    case Algorithm::kSumMonotone: {
      const SumEstimate est = estimate_sum_monotone(session, cfg.epsilon, cfg.sum_constants);
      row.estimate = est.value;
      row.exact = exact_sum(universe);
      row.branch = to_string(est.branch);
      row.main_loop_value = est.main_loop_value;
      break;
    }
    case Algorithm::kSumUnimodal: {
      const UnimodalSumEstimate est =
          estimate_sum_unimodal(session, cfg.epsilon, cfg.sum_constants);
      row.estimate = est.value;
      row.exact = exact_sum(universe);
      row.branch = to_string(est.left.branch);
      if (est.right) row.branch += std::string("|") + to_string(est.right->branch);
      row.valley = est.valley;
      break;
    }
    case Algorithm::kSupportSize: {
      const SupportParams params =
          SupportParams::make(cfg.epsilon, universe.n(), cfg.variant, cfg.support_constants);
      const SupportEstimate est = estimate_support_size(session, params);
      row.variant = to_string(cfg.variant);
      row.estimate = est.value;
      row.exact = static_cast<double>(exact_support(universe));
      break;
    }
    case Algorithm::kTestUniformity: {
      const SumParams params = SumParams::make(cfg.epsilon, universe.n(), cfg.sum_constants);
      Verdict v;
      if (cfg.sum_constants.amplification) {
        v = amplified_uniformity(session, universe.domain(), params);
      } else {
        v = test_uniformity(session, universe.domain(), cfg.epsilon, params.t1, params.t2)
                .verdict;
      }
      row.estimate = v == Verdict::kReject ? 1.0 : 0.0;
      const std::vector<double> d = induced_distribution(universe);
      const std::vector<double> flat(d.size(), 1.0 / static_cast<double>(d.size()));
      row.exact = exact_tv_distance(d, flat);
      row.branch = v == Verdict::kReject ? "reject" : "accept";
      break;
    }
  }
  if (cfg.algorithm != Algorithm::kTestUniformity && row.exact > 0.0) {
    row.relative_error = std::abs(row.estimate - row.exact) / row.exact;
  }
  row.stats = session.stats();
  if (cfg.timing) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
  }
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json row_to_json(const ReportRow& r) {
  nlohmann::ordered_json j;
  j["run_id"] = r.run_id;
  j["algorithm"] = r.algorithm;
  j["variant"] = r.variant;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["seed"] = r.seed;
  j["estimate"] = r.estimate;
  j["exact"] = r.exact;
  j["relative_error"] = r.relative_error ? nlohmann::ordered_json(*r.relative_error) : nullptr;
  j["branch"] = r.branch;
  j["weighted_cond_queries"] = r.stats.weighted_cond;
  j["uniform_cond_queries"] = r.stats.uniform_cond;
  j["eval_queries"] = r.stats.eval;
  j["weighted_full_queries"] = r.stats.weighted_full;
  j["uniform_full_queries"] = r.stats.uniform_full;
  j["zero_mass_fallbacks"] = r.stats.zero_mass_fallbacks;
  j["wall_ms"] = r.wall_ms;
  return j;
}

void ensure_written(const std::ofstream& out, const std::string& path) {
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSumMonotone: return "sum-monotone";
    case Algorithm::kSumUnimodal: return "sum-unimodal";
    case Algorithm::kSupportSize: return "support-size";
    case Algorithm::kTestUniformity: return "test-uniformity";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : {Algorithm::kSumMonotone, Algorithm::kSumUnimodal, Algorithm::kSupportSize,
                      Algorithm::kTestUniformity}) {
    if (text == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

const char* to_string(ReportFormat f) { return f == ReportFormat::kCsv ? "csv" : "json"; }

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw std::invalid_argument("format must be 'csv' or 'json', got '" + std::string(text) + "'");
}

void RunConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (!master_seed) throw std::invalid_argument("a master seed is required");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return substream_seed(master_seed, trial, 0);
}

std::uint64_t trial_oracle_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return substream_seed(master_seed, trial, 1);
}

std::vector<ReportRow> run_trials(const RunConfig& cfg) {
  cfg.validate();
  std::optional<Universe> fixed;
  if (cfg.universe_path) fixed.emplace(read_universe_file(*cfg.universe_path));

  std::vector<ReportRow> rows(cfg.trials);
  auto run_index = [&](std::uint64_t t) {
    if (fixed) {
      rows[t] = run_one(cfg, *fixed, t);
    } else {
      const Universe u = generate(cfg.generator, trial_seed(*cfg.master_seed, t));
      rows[t] = run_one(cfg, u, t);
    }
  };

  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(cfg.threads, cfg.trials));
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < cfg.trials; ++t) run_index(t);
    return rows;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < workers; ++k) {
    pool.emplace_back([&] {
      for (std::uint64_t t = next++; t < cfg.trials; t = next++) {
        try {
          run_index(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = cfg.trials;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const ReportRow> rows) {
  for (std::size_t k = 0; k < kReportFields.size(); ++k) {
    if (k > 0) out << ',';
    out << kReportFields[k];
  }
  out << '\n';
  for (const ReportRow& r : rows) {
    out << r.run_id << ',' << csv_field(r.algorithm) << ',' << csv_field(r.variant) << ','
        << r.n << ',' << format_double(r.epsilon) << ',' << r.seed << ','
        << format_double(r.estimate) << ',' << format_double(r.exact) << ','
        << (r.relative_error ? format_double(*r.relative_error) : "") << ','
        << csv_field(r.branch) << ',' << r.stats.weighted_cond << ',' << r.stats.uniform_cond
        << ',' << r.stats.eval << ',' << r.stats.weighted_full << ',' << r.stats.uniform_full
        << ',' << r.stats.zero_mass_fallbacks << ',' << format_double(r.wall_ms) << '\n';
  }
}

void write_json(std::ostream& out, std::span<const ReportRow> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReportRow& r : rows) arr.push_back(row_to_json(r));
  out << arr.dump(2) << '\n';
}

std::string format_report(std::span<const ReportRow> rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    write_csv(out, rows);
  } else {
    write_json(out, rows);
  }
  return out.str();
}

RunSummary summarize(const RunConfig& cfg, std::span<const ReportRow> rows) {
  RunSummary s;
  s.algorithm = to_string(cfg.algorithm);
  s.trials = rows.size();
  if (rows.empty()) return s;
  const double e = cfg.epsilon;

  std::vector<BandStats> bands;
  if (cfg.algorithm == Algorithm::kSumMonotone || cfg.algorithm == Algorithm::kSumUnimodal) {
    bands.push_back({"proof", "(1-2e)W < estimate < (1+e)W", 0, 0.0});
    bands.push_back({"statement", "(1-2e)W <= estimate <= (1-e)W", 0, 0.0});
  } else if (cfg.algorithm == Algorithm::kSupportSize) {
    bands.push_back({"theorem", "k-2en <= estimate <= k+en", 0, 0.0});
  }

  double rel_sum = 0.0;
  std::uint64_t rel_count = 0;
  for (const ReportRow& r : rows) {
    s.mean_estimate += r.estimate;
    s.mean_exact += r.exact;
    if (r.estimate == r.exact) ++s.exact_hits;
    if (r.relative_error) {
      rel_sum += *r.relative_error;
      ++rel_count;
      s.max_relative_error = std::max(s.max_relative_error.value_or(0.0), *r.relative_error);
    }
    const double x = r.estimate;
    const double w = r.exact;
    if (cfg.algorithm == Algorithm::kSumMonotone || cfg.algorithm == Algorithm::kSumUnimodal) {
      if ((1 - 2 * e) * w < x && x < (1 + e) * w) ++bands[0].hits;
      if ((1 - 2 * e) * w <= x && x <= (1 - e) * w) ++bands[1].hits;
    } else if (cfg.algorithm == Algorithm::kSupportSize) {
      const auto n = static_cast<double>(r.n);
      if (w - 2 * e * n <= x && x <= w + e * n) ++bands[0].hits;
    }
  }
  const auto count = static_cast<double>(rows.size());
  s.mean_estimate /= count;
  s.mean_exact /= count;
  if (rel_count > 0) s.mean_relative_error = rel_sum / static_cast<double>(rel_count);
  for (BandStats& b : bands) b.rate = static_cast<double>(b.hits) / count;
  s.bands = std::move(bands);
  return s;
}

nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["algorithm"] = s.algorithm;
  j["trials"] = s.trials;
  j["mean_estimate"] = s.mean_estimate;
  j["mean_exact"] = s.mean_exact;
  j["mean_relative_error"] =
      s.mean_relative_error ? nlohmann::ordered_json(*s.mean_relative_error) : nullptr;
  j["max_relative_error"] =
      s.max_relative_error ? nlohmann::ordered_json(*s.max_relative_error) : nullptr;
  j["exact_hits"] = s.exact_hits;
  nlohmann::ordered_json bands = nlohmann::ordered_json::array();
  for (const BandStats& b : s.bands) {
    bands.push_back({{"name", b.name}, {"definition", b.definition}, {"hits", b.hits},
                     {"rate", b.rate}});
  }
  j["bands"] = bands;
  return j;
}

void write_report_files(const RunConfig& cfg, std::span<const ReportRow> rows) {
  if (cfg.output_path.empty()) throw IoError("no output path");
  {
    std::ofstream out(cfg.output_path, std::ios::binary);
    ensure_written(out, cfg.output_path);
    out << format_report(rows, cfg.format);
    out.flush();
    ensure_written(out, cfg.output_path);
  }
  const std::string sidecar = cfg.output_path + ".summary.json";
  std::ofstream out(sidecar, std::ios::binary);
  ensure_written(out, sidecar);
  out << to_json(summarize(cfg, rows)).dump(2) << '\n';
  out.flush();
  ensure_written(out, sidecar);
}

bool follows_plan(std::span<const QueryBlock> log, std::span<const QueryBlock> plan) {
  if (plan.empty()) return true;
  if (log.size() < plan.size()) return false;
  for (std::size_t k = 0; k + 1 < plan.size(); ++k) {
    if (!(log[k] == plan[k])) return false;
  }
  const QueryBlock& want = plan.back();
  const QueryBlock& got = log[plan.size() - 1];
  return got.model == want.model && got.set == want.set && got.count >= want.count;
}

std::uint64_t valley_eval_bound(Index n) {
  std::uint64_t bits = 0;
  while ((Index{1} << bits) < n) ++bits;
  return 3 * bits + 8;
}

ScalingAudit audit_query_scaling(const ScalingAuditConfig& cfg) {
  const std::set<Index> distinct(cfg.ns.begin(), cfg.ns.end());
  if (distinct.size() < 3) {
    throw std::invalid_argument("query scaling audit needs at least three distinct n");
  }
  if (cfg.epsilons.empty()) throw std::invalid_argument("no epsilon values");

  ScalingAudit audit;
  std::vector<double> xs;
  std::vector<double> ys;
  std::uint64_t stream = 0;
  for (Index n : cfg.ns) {
    for (double eps : cfg.epsilons) {
      GeneratorSpec spec = cfg.generator;
      spec.n = n;
      const Universe u = generate(spec, substream_seed(cfg.seed, stream, 0));
      OracleSession session(u, substream_seed(cfg.seed, stream, 1));
      ++stream;
      session.set_recording(true);
      const SumEstimate est = estimate_sum_monotone(session, eps, cfg.constants);
      ScalingPoint p;
      p.n = n;
      p.epsilon = eps;
      p.measured = est.stats.conditional();
      p.follows_plan = follows_plan(
          session.query_log(), planned_sum_queries(u.domain(), Direction::kDecreasing, est.params));
      audit.points.push_back(p);
      xs.push_back(std::log(static_cast<double>(n)) / std::pow(eps, 3));
      ys.push_back(1.0 / std::pow(eps, 6));
    }
  }

  // Minimize sum ((m - a x - b y) / m)^2.
  double sxx = 0, sxy = 0, syy = 0, sxm = 0, sym = 0;
  for (std::size_t k = 0; k < audit.points.size(); ++k) {
    const double m = static_cast<double>(audit.points[k].measured);
    const double x = xs[k] / m;
    const double y = ys[k] / m;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sxm += x;
    sym += y;
  }
  const double det = sxx * syy - sxy * sxy;
  if (std::abs(det) > 0.0) {
    audit.a = (sxm * syy - sym * sxy) / det;
    audit.b = (sym * sxx - sxm * sxy) / det;
  }
  audit.all_within = true;
  for (std::size_t k = 0; k < audit.points.size(); ++k) {
    ScalingPoint& p = audit.points[k];
    p.predicted = audit.a * xs[k] + audit.b * ys[k];
    p.ratio = p.predicted > 0.0 ? static_cast<double>(p.measured) / p.predicted : 0.0;
    p.within = cfg.min_ratio <= p.ratio && p.ratio <= cfg.max_ratio;
    audit.all_within = audit.all_within && p.within && p.follows_plan;
  }

  if (cfg.unimodal) {
    for (Index n : distinct) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::kStrictUnimodal;
      spec.n = n;
      const Universe u = generate(spec, substream_seed(cfg.seed, stream, 0));
      OracleSession session(u, substream_seed(cfg.seed, stream, 1));
      ++stream;
      find_valley(session);
      UnimodalEvalCheck c;
      c.n = n;
      c.eval_queries = session.stats().eval;
      c.bound = valley_eval_bound(n);
      c.within = c.eval_queries <= c.bound;
      audit.all_within = audit.all_within && c.within;
      audit.unimodal.push_back(c);
    }
  }
  return audit;
}

nlohmann::ordered_json to_json(const ScalingAudit& audit) {
  nlohmann::ordered_json j;
  j["model"] = "a * ln(n) / eps^3 + b / eps^6";
  j["a"] = audit.a;
  j["b"] = audit.b;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const ScalingPoint& p : audit.points) {
    pts.push_back({{"n", p.n},
                   {"epsilon", p.epsilon},
                   {"conditional_queries", p.measured},
                   {"predicted", p.predicted},
                   {"ratio", p.ratio},
                   {"within", p.within},
                   {"follows_plan", p.follows_plan}});
  }
  j["points"] = pts;
  nlohmann::ordered_json uni = nlohmann::ordered_json::array();
  for (const UnimodalEvalCheck& c : audit.unimodal) {
    uni.push_back({{"n", c.n},
                   {"eval_queries", c.eval_queries},
                   {"bound", c.bound},
                   {"within", c.within}});
  }
  j["unimodal"] = uni;
  j["all_within"] = audit.all_within;
  return j;
}

}  // namespace condsum
