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

#ifndef CONDSUM_CONFORMANCE_H_
#define CONDSUM_CONFORMANCE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "condsum/universe.h"

namespace condsum {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;  // after merging
  // An observation landed where the expected probability is zero.
  bool impossible_outcome = false;
};

// Pearson goodness of fit of `observed` counts against `pmf`. Bins with
// expected count below `min_expected` are pooled with their neighbours in
// index order. The p-value is the upper regularized incomplete gamma
// function; an impossible outcome gives p = 0. Throws std::invalid_argument
// on mismatched lengths or an empty sample.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> pmf, double min_expected = 5.0);

// Draws `samples` indices from `draw` and tests them against `pmf`, whose
// entry k is the probability of index support.lo + k. An index outside
// `support` counts as an impossible outcome.
ChiSquareResult verify_sampler(const std::function<Index()>& draw, Interval support,
                               std::span<const double> pmf, std::uint64_t samples);

struct ConformanceCheck {
  std::string label;  // e.g. "u7 weighted-cond [3,9]"
  Index n = 0;
  Interval set;
  ChiSquareResult result;
  bool passed = false;
};

struct OracleConformanceConfig {
  Index max_n = 50;
  int universes = 20;
  int intervals_per_universe = 5;
  std::uint64_t samples = 100000;
  double alpha = 0.01;
  std::uint64_t seed = 0;
};

struct OracleConformanceSummary {
  std::vector<ConformanceCheck> checks;
  int failures = 0;
};

// Random universes (n uniform in [2, max_n], some zero weights) and random
// intervals. Each interval is tested under both conditional samplers and
// each universe under both full-domain samplers.
OracleConformanceSummary verify_oracles(const OracleConformanceConfig& config);

}  // namespace condsum

#endif  // CONDSUM_CONFORMANCE_H_
