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

#include "condsum/partition.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "condsum/numeric.h"

namespace condsum {

const char* to_string(Direction d) {
  return d == Direction::kDecreasing ? "decreasing" : "increasing";
}

IntervalPartition::IntervalPartition(std::vector<Interval> intervals, Direction direction,
                                     double epsilon)
    : intervals_(std::move(intervals)), direction_(direction), epsilon_(epsilon) {
  if (intervals_.empty()) throw std::invalid_argument("empty partition");
  for (std::size_t j = 0; j < intervals_.size(); ++j) {
    if (intervals_[j].lo > intervals_[j].hi) {
      throw std::invalid_argument("empty interval " + to_string(intervals_[j]));
    }
    if (j > 0 && intervals_[j].lo != intervals_[j - 1].hi + 1) {
      throw std::invalid_argument("intervals are not consecutive at " +
                                  to_string(intervals_[j]));
    }
  }
}

std::size_t IntervalPartition::interval_of(Index i) const {
  if (!domain().contains(i)) {
    throw std::out_of_range("index " + std::to_string(i) + " outside partition domain " +
                            to_string(domain()));
  }
  const auto it = std::lower_bound(intervals_.begin(), intervals_.end(), i,
                                   [](const Interval& iv, Index x) { return iv.hi < x; });
  return static_cast<std::size_t>(it - intervals_.begin()) + 1;
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("partition epsilon must lie in (0, 1], got " +
                                std::to_string(epsilon));
  }
}

}  // namespace

std::vector<Index> birge_sizes(Index length, double epsilon) {
  check_epsilon(epsilon);
  if (length < 1) throw std::invalid_argument("partition length must be positive");
  std::vector<Index> sizes;
  Index covered = 0;
  for (int j = 1; covered < length; ++j) {
    const double nominal = std::floor(std::pow(1.0 + epsilon, j) + kSizeRoundingOffset);
    Index size = nominal >= static_cast<double>(length) ? length : static_cast<Index>(nominal);
    size = std::clamp<Index>(size, 1, length - covered);
    sizes.push_back(size);
    covered += size;
  }
  return sizes;
}

IntervalPartition make_partition(Interval domain, double epsilon, Direction direction) {
  if (domain.lo < 1 || domain.lo > domain.hi) {
    throw std::invalid_argument("invalid partition domain " + to_string(domain));
  }
  const std::vector<Index> sizes = birge_sizes(domain.size(), epsilon);
  std::vector<Interval> intervals;
  intervals.reserve(sizes.size());
  if (direction == Direction::kDecreasing) {
    Index lo = domain.lo;
    for (Index s : sizes) {
      intervals.push_back({lo, lo + s - 1});
      lo += s;
    }
  } else {
    Index hi = domain.hi;
    for (Index s : sizes) {
      intervals.push_back({hi - s + 1, hi});
      hi -= s;
    }
    std::reverse(intervals.begin(), intervals.end());
  }
  return IntervalPartition(std::move(intervals), direction, epsilon);
}

IntervalPartition make_partition(Index n, double epsilon, Direction direction) {
  if (n < 1) throw std::invalid_argument("partition needs n >= 1");
  return make_partition(Interval{1, n}, epsilon, direction);
}

std::size_t interval_count_bound(Index n, double epsilon) {
  const double raw = std::log(static_cast<double>(n) * epsilon + 1.0) / std::log1p(epsilon);
  return static_cast<std::size_t>(std::ceil(raw)) + 2;
}

std::vector<double> flatten(std::span<const double> dist, const IntervalPartition& p) {
  if (p.domain() != Interval{1, static_cast<Index>(dist.size())}) {
    throw std::invalid_argument("partition domain " + to_string(p.domain()) +
                                " does not match distribution length");
  }
  std::vector<double> out(dist.size());
  for (const Interval& iv : p.intervals()) {
    const auto block = dist.subspan(static_cast<std::size_t>(iv.lo - 1),
                                    static_cast<std::size_t>(iv.size()));
    const double level = compensated_sum(block) / static_cast<double>(iv.size());
    std::fill_n(out.begin() + (iv.lo - 1), iv.size(), level);
  }
  return out;
}

std::vector<double> flatten(const Universe& u, const IntervalPartition& p) {
  return flatten(induced_distribution(u), p);
}

}  // namespace condsum
