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

#ifndef CONDSUM_SUM_ESTIMATORS_H_
#define CONDSUM_SUM_ESTIMATORS_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "condsum/oracle.h"
#include "condsum/partition.h"
#include "condsum/universe.h"

namespace condsum {

// Overridable constants of the sum estimators.
struct SumConstants {
  double c_T = 50.0;  // main-loop samples T = ceil(c_T / eps^6)
  double c_U = 4.0;   // tester samples t1 = t2 = ceil((c_U / eps) ln(100 / eps))
  // Majority-vote repetitions per interval; default 2 ceil(log2(10 l)) + 1.
  std::optional<std::uint64_t> amplification;
  // Relative tolerance of the w(first) == w(last) check; 0 means exact.
  double equality_tolerance = 0.0;
};

// Parameters of one monotone run over a domain of a given size.
struct SumParams {
  double epsilon = 0.0;
  double delta = 0.0;     // sqrt(1 - epsilon)
  double epsilon1 = 0.0;  // epsilon * (1 - delta), the partition parameter
  std::size_t intervals = 0;  // l, intervals in the partition
  std::uint64_t T = 0;
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  std::uint64_t amplification = 0;
  double c_T = 0.0;
  double c_U = 0.0;
  double equality_tolerance = 0.0;

  // Throws std::invalid_argument unless 0 < epsilon < 1 and the constants
  // are positive.
  static SumParams make(double epsilon, Index domain_size, const SumConstants& constants = {});

  // Weighted- plus uniform-conditional queries of the non-adaptive phase:
  // l * amplification * (t1 + t2) + T.
  std::uint64_t planned_conditional_queries() const;
};

enum class Verdict { kAccept, kReject };

struct UniformityVerdict {
  Verdict verdict = Verdict::kAccept;
  // (weighted draw, uniform draw) whose weight ratio exceeded 1 + eps/2.
  std::optional<std::pair<SamplePair, SamplePair>> witness;
  bool zero_mass = false;
};

// Draws t1 weighted-conditional then t2 uniform-conditional pairs on iv and
// rejects iff some w(i) / w(j) > 1 + eps/2 (weighted draw over uniform draw;
// w(j) = 0 counts as infinite). A zero-mass interval rejects with
// zero_mass set. Throws std::invalid_argument if t1 or t2 is zero.
UniformityVerdict test_uniformity(OracleSession& session, Interval iv, double epsilon,
                                  std::uint64_t t1, std::uint64_t t2);

// Majority vote over `repetitions` independent runs of test_uniformity.
Verdict amplified_uniformity(OracleSession& session, Interval iv, const SumParams& params);

enum class SumBranch { kMainLoop, kConstantUniverse, kPerIntervalFlat };

const char* to_string(SumBranch branch);

struct SumEstimate {
  double value = 0.0;
  SumBranch branch = SumBranch::kMainLoop;
  // Mean of the X_i over the T full-domain draws. Equals `value` on the
  // main-loop branch; still reported when a J = {} branch returns.
  double main_loop_value = 0.0;
  Interval domain;
  Direction direction = Direction::kDecreasing;
  std::vector<std::size_t> rejected_intervals;  // J, 1-based ordinals
  QueryStats stats;
  SumParams params;
};

// Monotone estimator over a sub-domain of the session's universe. The
// domain must be non-increasing for kDecreasing and non-decreasing for
// kIncreasing; neither is checked. All conditioning sets of the tester and
// main-loop phase are fixed by (domain, epsilon, direction) before the first
// draw. Throws std::invalid_argument unless 0 < epsilon < 1.
SumEstimate estimate_sum_on(OracleSession& session, Interval domain, Direction direction,
                            double epsilon, const SumConstants& constants = {});

// estimate_sum_on over [1..n], decreasing.
SumEstimate estimate_sum_monotone(OracleSession& session, double epsilon,
                                  const SumConstants& constants = {});

// The tester and main-loop queries estimate_sum_on issues, in order, before
// any J = {} branch query.
std::vector<QueryBlock> planned_sum_queries(Interval domain, Direction direction,
                                            const SumParams& params);

// Binary search for the minimum of a decreasing-then-increasing universe
// using EVAL queries only; at most 3 ceil(log2 n) + 8 of them.
Index find_valley(OracleSession& session);

struct UnimodalSumEstimate {
  double value = 0.0;
  Index valley = 0;
  SumEstimate left;
  std::optional<SumEstimate> right;  // empty when the valley is at n
  QueryStats stats;
};

// find_valley, then the decreasing estimator on [1..m] and the increasing
// one on [m+1..n]; the estimate is their sum.
UnimodalSumEstimate estimate_sum_unimodal(OracleSession& session, double epsilon,
                                          const SumConstants& constants = {});

}  // namespace condsum

#endif  // CONDSUM_SUM_ESTIMATORS_H_
