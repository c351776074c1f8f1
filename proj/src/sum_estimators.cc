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

#include "condsum/sum_estimators.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "condsum/numeric.h"

namespace condsum {
namespace {

void check_sum_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

std::uint64_t ceil_count(double x) { return static_cast<std::uint64_t>(std::ceil(x)); }

bool weights_equal(double a, double b, double tolerance) {
  if (tolerance == 0.0) return a == b;
  return std::abs(a - b) <= tolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

SumParams SumParams::make(double epsilon, Index domain_size, const SumConstants& constants) {
  check_sum_epsilon(epsilon);
  if (domain_size < 1) throw std::invalid_argument("domain must be non-empty");
  if (!(constants.c_T > 0.0) || !(constants.c_U > 0.0)) {
    throw std::invalid_argument("c_T and c_U must be positive");
  }
  if (constants.amplification && *constants.amplification == 0) {
    throw std::invalid_argument("amplification must be at least 1");
  }
  SumParams p;
  p.epsilon = epsilon;
  p.delta = std::sqrt(1.0 - epsilon);
  p.epsilon1 = epsilon * (1.0 - p.delta);
  p.intervals = birge_sizes(domain_size, p.epsilon1).size();
  p.c_T = constants.c_T;
  p.c_U = constants.c_U;
  p.T = ceil_count(constants.c_T / std::pow(epsilon, 6));
  p.t1 = ceil_count(constants.c_U / epsilon * std::log(100.0 / epsilon));
  p.t2 = p.t1;
  p.amplification = constants.amplification.value_or(
      2 * ceil_count(std::log2(10.0 * static_cast<double>(p.intervals))) + 1);
  p.equality_tolerance = constants.equality_tolerance;
  return p;
}

std::uint64_t SumParams::planned_conditional_queries() const {
  return static_cast<std::uint64_t>(intervals) * amplification * (t1 + t2) + T;
}

UniformityVerdict test_uniformity(OracleSession& session, Interval iv, double epsilon,
                                  std::uint64_t t1, std::uint64_t t2) {
  if (t1 == 0 || t2 == 0) throw std::invalid_argument("t1 and t2 must be positive");
  const bool zero_mass = !(session.universe().mass(iv) > 0.0);

  SamplePair heaviest = session.weighted_cond_sample(iv);
  for (std::uint64_t k = 1; k < t1; ++k) {
    const SamplePair s = session.weighted_cond_sample(iv);
    if (s.weight > heaviest.weight) heaviest = s;
  }
  SamplePair lightest = session.uniform_cond_sample(iv);
  for (std::uint64_t k = 1; k < t2; ++k) {
    const SamplePair s = session.uniform_cond_sample(iv);
    if (s.weight < lightest.weight) lightest = s;
  }

  UniformityVerdict result;
  result.zero_mass = zero_mass;
  // Division is monotone in both arguments, so the extreme pair decides.
  const bool far = zero_mass || lightest.weight == 0.0 ||
                   heaviest.weight / lightest.weight > 1.0 + epsilon / 2.0;
  if (far) {
    result.verdict = Verdict::kReject;
    result.witness = std::make_pair(heaviest, lightest);
  }
  return result;
}

Verdict amplified_uniformity(OracleSession& session, Interval iv, const SumParams& params) {
  std::uint64_t rejections = 0;
  for (std::uint64_t r = 0; r < params.amplification; ++r) {
    if (test_uniformity(session, iv, params.epsilon, params.t1, params.t2).verdict ==
        Verdict::kReject) {
      ++rejections;
    }
  }
  return 2 * rejections > params.amplification ? Verdict::kReject : Verdict::kAccept;
}

const char* to_string(SumBranch branch) {
  switch (branch) {
    case SumBranch::kMainLoop: return "main-loop";
    case SumBranch::kConstantUniverse: return "constant-universe";
    case SumBranch::kPerIntervalFlat: return "per-interval-flat";
  }
  return "unknown";
}

std::vector<QueryBlock> planned_sum_queries(Interval domain, Direction direction,
                                            const SumParams& params) {
  const IntervalPartition partition = make_partition(domain, params.epsilon1, direction);
  std::vector<QueryBlock> plan;
  for (const Interval& iv : partition.intervals()) {
    for (std::uint64_t r = 0; r < params.amplification; ++r) {
      plan.push_back({AccessModel::kWeightedCond, iv, params.t1});
      plan.push_back({AccessModel::kUniformCond, iv, params.t2});
    }
  }
  // Adjacent blocks on the same set and model merge in the session log.
  std::vector<QueryBlock> merged;
  for (const QueryBlock& b : plan) {
    if (!merged.empty() && merged.back().model == b.model && merged.back().set == b.set) {
      merged.back().count += b.count;
    } else {
      merged.push_back(b);
    }
  }
  merged.push_back({AccessModel::kWeightedCond, domain, params.T});
  return merged;
}

SumEstimate estimate_sum_on(OracleSession& session, Interval domain, Direction direction,
                            double epsilon, const SumConstants& constants) {
  check_sum_epsilon(epsilon);
  session.universe().check(domain);
  const QueryStats before = session.stats();

  SumEstimate est;
  est.domain = domain;
  est.direction = direction;
  est.params = SumParams::make(epsilon, domain.size(), constants);
  const IntervalPartition partition = make_partition(domain, est.params.epsilon1, direction);

  std::vector<bool> rejected(partition.size() + 1, false);
  for (std::size_t j = 1; j <= partition.size(); ++j) {
    if (amplified_uniformity(session, partition.interval(j), est.params) == Verdict::kReject) {
      rejected[j] = true;
      est.rejected_intervals.push_back(j);
    }
  }

  CompensatedSum total;
  for (std::uint64_t k = 0; k < est.params.T; ++k) {
    const SamplePair s = session.weighted_cond_sample(domain);
    if (!rejected[partition.interval_of(s.index)]) total.add(s.weight);
  }
  est.main_loop_value = total.value() / static_cast<double>(est.params.T);
  est.value = est.main_loop_value;
  est.branch = SumBranch::kMainLoop;

  if (est.rejected_intervals.empty()) {
    const double first = session.weighted_cond_sample({domain.lo, domain.lo}).weight;
    const double last = session.weighted_cond_sample({domain.hi, domain.hi}).weight;
    if (weights_equal(first, last, est.params.equality_tolerance)) {
      est.value = static_cast<double>(domain.size()) * first;
      est.branch = SumBranch::kConstantUniverse;
    } else {
      CompensatedSum flat;
      for (const Interval& iv : partition.intervals()) {
        flat.add(static_cast<double>(iv.size()) * session.uniform_cond_sample(iv).weight);
      }
      est.value = flat.value();
      est.branch = SumBranch::kPerIntervalFlat;
    }
  }
  est.stats = session.stats() - before;
  return est;
}

SumEstimate estimate_sum_monotone(OracleSession& session, double epsilon,
                                  const SumConstants& constants) {
  return estimate_sum_on(session, session.universe().domain(), Direction::kDecreasing, epsilon,
                         constants);
}

Index find_valley(OracleSession& session) {
  std::map<Index, double> seen;
  auto w = [&](Index i) {
    const auto it = seen.find(i);
    if (it != seen.end()) return it->second;
    const double x = session.eval_query(i);
    seen.emplace(i, x);
    return x;
  };

  Index lo = 1;
  Index hi = session.universe().n();
  while (hi - lo + 1 > 4) {
    const Index mid = lo + (hi - lo) / 2;
    const double left = w(mid - 1);
    const double here = w(mid);
    const double right = w(mid + 1);
    if (here > right) {
      lo = mid + 1;  // descending
    } else if (left < here) {
      hi = mid - 1;  // ascending
    } else if (left > here && here < right) {
      return mid;
    } else if (w(hi) < here) {
      lo = mid + 1;  // plateau above the right end lies on the descending side
    } else if (left == here) {
      hi = mid - 1;  // ties go left
    } else {
      return mid;  // left > here == right
    }
  }
  Index best = lo;
  for (Index i = lo + 1; i <= hi; ++i) {
    if (w(i) < w(best)) best = i;
  }
  return best;
}

UnimodalSumEstimate estimate_sum_unimodal(OracleSession& session, double epsilon,
                                          const SumConstants& constants) {
  check_sum_epsilon(epsilon);
  const QueryStats before = session.stats();
  const Index n = session.universe().n();

  UnimodalSumEstimate est;
  est.valley = find_valley(session);
  est.left = estimate_sum_on(session, {1, est.valley}, Direction::kDecreasing, epsilon, constants);
  est.value = est.left.value;
  if (est.valley < n) {
    est.right = estimate_sum_on(session, {est.valley + 1, n}, Direction::kIncreasing, epsilon,
                                constants);
    est.value += est.right->value;
  }
  est.stats = session.stats() - before;
  return est;
}

}  // namespace condsum
