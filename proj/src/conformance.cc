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

#include "condsum/conformance.h"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <stdexcept>

#include "condsum/oracle.h"
#include "condsum/rng.h"

namespace condsum {

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> pmf, double min_expected) {
  if (observed.size() != pmf.size()) {
    throw std::invalid_argument("observed and pmf lengths differ");
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : observed) total += c;
  if (total == 0) throw std::invalid_argument("empty sample");

  ChiSquareResult r;
  const auto n = static_cast<double>(total);
  std::vector<double> exp_bins;
  std::vector<double> obs_bins;
  double e = 0.0;
  double o = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] <= 0.0) {
      if (observed[k] > 0) r.impossible_outcome = true;
      continue;
    }
    e += n * pmf[k];
    o += static_cast<double>(observed[k]);
    if (e >= min_expected) {
      exp_bins.push_back(e);
      obs_bins.push_back(o);
      e = o = 0.0;
    }
  }
  if (e > 0.0) {
    if (exp_bins.empty()) {
      exp_bins.push_back(e);
      obs_bins.push_back(o);
    } else {
      exp_bins.back() += e;
      obs_bins.back() += o;
    }
  }
  r.bins = static_cast<int>(exp_bins.size());
  if (r.impossible_outcome) {
    r.p_value = 0.0;
    return r;
  }
  for (std::size_t k = 0; k < exp_bins.size(); ++k) {
    const double d = obs_bins[k] - exp_bins[k];
    r.statistic += d * d / exp_bins[k];
  }
  r.dof = r.bins - 1;
  r.p_value = r.dof > 0 ? boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0) : 1.0;
  return r;
}

ChiSquareResult verify_sampler(const std::function<Index()>& draw, Interval support,
                               std::span<const double> pmf, std::uint64_t samples) {
  if (static_cast<std::size_t>(support.size()) != pmf.size()) {
    throw std::invalid_argument("pmf length does not match the support");
  }
  std::vector<std::uint64_t> counts(pmf.size(), 0);
  bool stray = false;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Index i = draw();
    if (support.contains(i)) {
      ++counts[static_cast<std::size_t>(i - support.lo)];
    } else {
      stray = true;
    }
  }
  if (stray) {
    ChiSquareResult r;
    r.impossible_outcome = true;
    r.p_value = 0.0;
    return r;
  }
  return chi_square_test(counts, pmf);
}

OracleConformanceSummary verify_oracles(const OracleConformanceConfig& config) {
  if (config.max_n < 2 || config.universes < 1 || config.intervals_per_universe < 1 ||
      config.samples == 0) {
    throw std::invalid_argument("invalid conformance configuration");
  }
  OracleConformanceSummary summary;
  auto record = [&](std::string label, Index n, Interval set, const ChiSquareResult& r) {
    ConformanceCheck c{std::move(label), n, set, r, r.p_value >= config.alpha};
    if (!c.passed) ++summary.failures;
    summary.checks.push_back(std::move(c));
  };

  for (int u = 0; u < config.universes; ++u) {
    Rng rng(substream_seed(config.seed, static_cast<std::uint64_t>(u), 0));
    const Index n = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(config.max_n - 1)));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& x : w) x = rng.uniform01() < 0.15 ? 0.0 : rng.uniform(0.05, 1.0);
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[0] = 1.0;
    const Universe universe(std::move(w));
    OracleSession session(universe, substream_seed(config.seed, static_cast<std::uint64_t>(u), 1));
    const std::string tag = "u" + std::to_string(u) + " ";

    for (int k = 0; k < config.intervals_per_universe; ++k) {
      Index a = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      Index b = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      if (a > b) std::swap(a, b);
      const Interval iv{a, b};
      const std::vector<double> wpmf = exact_pmf(universe, iv, CondModel::kWeighted);
      record(tag + "weighted-cond " + to_string(iv), n, iv,
             verify_sampler([&] { return session.weighted_cond_sample(iv).index; }, iv, wpmf,
                            config.samples));
      const std::vector<double> upmf = exact_pmf(universe, iv, CondModel::kUniform);
      record(tag + "uniform-cond " + to_string(iv), n, iv,
             verify_sampler([&] { return session.uniform_cond_sample(iv).index; }, iv, upmf,
                            config.samples));
    }
    const Interval all = universe.domain();
    record(tag + "weighted-full", n, all,
           verify_sampler([&] { return session.weighted_full_sample().index; }, all,
                          induced_distribution(universe), config.samples));
    record(tag + "uniform-full", n, all,
           verify_sampler([&] { return session.uniform_full_sample().index; }, all,
                          exact_pmf(universe, all, CondModel::kUniform), config.samples));
  }
  return summary;
}

}  // namespace condsum
