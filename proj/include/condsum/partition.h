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

#ifndef CONDSUM_PARTITION_H_
#define CONDSUM_PARTITION_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "condsum/universe.h"

namespace condsum {

enum class Direction { kDecreasing, kIncreasing };

const char* to_string(Direction d);

// Birgé oblivious partition of a domain into consecutive intervals.
//
// For kDecreasing the interval sizes grow geometrically from the left end of
// the domain; kIncreasing lays the same size sequence out from the right end.
// Ordinals are 1-based in index order.
class IntervalPartition {
 public:
  // Throws std::invalid_argument unless the intervals are non-empty,
  // consecutive and disjoint.
  IntervalPartition(std::vector<Interval> intervals, Direction direction, double epsilon);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  const Interval& interval(std::size_t ordinal) const { return intervals_.at(ordinal - 1); }
  Interval domain() const { return {intervals_.front().lo, intervals_.back().hi}; }
  Direction direction() const { return direction_; }
  double epsilon() const { return epsilon_; }

  // Ordinal of the interval holding i, by binary search. Throws
  // std::out_of_range outside the domain.
  std::size_t interval_of(Index i) const;

 private:
  std::vector<Interval> intervals_;
  Direction direction_;
  double epsilon_;
};

// Added before flooring (1+eps)^j. Plain flooring keeps too many singleton
// intervals for small eps and overshoots the interval-count bound by one;
// 0.2 keeps the bound on eps in {0.05, 0.1, 0.25, 0.5, 0.9}, n <= 2000 while
// the worst-case flattening distance over all monotone distributions stays
// below 0.84 * eps.
inline constexpr double kSizeRoundingOffset = 0.2;

// Interval sizes max(1, floor((1+eps)^j + offset)), j = 1, 2, ..., with the
// last one truncated so they sum to `length`. Smallest first.
std::vector<Index> birge_sizes(Index length, double epsilon);

// eps must lie in (0, 1]; throws std::invalid_argument otherwise. The upper
// end is closed so eps = 1 (sizes 2, 4, 8, ...) is available.
IntervalPartition make_partition(Index n, double epsilon, Direction direction);
// Same layout over an arbitrary domain, expressed in global indices.
IntervalPartition make_partition(Interval domain, double epsilon, Direction direction);

// Partition parameter used by the sum estimators for accuracy eps:
// eps * (1 - delta) with delta = sqrt(1 - eps).
inline double estimator_partition_epsilon(double eps) {
  return eps * (1.0 - std::sqrt(1.0 - eps));
}

// ceil(log(n*eps + 1) / log(1 + eps)) + 2.
std::size_t interval_count_bound(Index n, double epsilon);

// Averages `dist` over each interval. The partition domain must be
// [1..dist.size()].
std::vector<double> flatten(std::span<const double> dist, const IntervalPartition& p);
// Flattening of the induced distribution D = w / W.
std::vector<double> flatten(const Universe& u, const IntervalPartition& p);

}  // namespace condsum

#endif  // CONDSUM_PARTITION_H_
