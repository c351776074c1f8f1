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

#ifndef CONDSUM_UNIVERSE_H_
#define CONDSUM_UNIVERSE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace condsum {

// 1-based element index.
using Index = std::int64_t;

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] of 1-based indices.
struct Interval {
  Index lo = 1;
  Index hi = 1;

  Index size() const { return hi - lo + 1; }
  bool contains(Index i) const { return lo <= i && i <= hi; }

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

std::string to_string(Interval iv);

// Immutable array of non-negative weights w(1..n) with cached prefix sums.
//
// prefix()[0] == 0 and prefix()[i] is the compensated running sum of
// w(1..i), so total() is the compensated sum of all weights. When every
// partial sum is exactly representable (all generated universes are built
// that way) prefix()[i] - prefix()[i - 1] == w(i) bit-exactly.
class Universe {
 public:
  // Throws std::invalid_argument on an empty vector, a negative or non-finite
  // weight, or an all-zero vector.
  explicit Universe(std::vector<double> weights);

  Index n() const { return static_cast<Index>(weights_.size()); }
  Interval domain() const { return {1, n()}; }

  // Unchecked; 1 <= i <= n.
  double weight(Index i) const { return weights_[static_cast<std::size_t>(i - 1)]; }
  // Throws std::out_of_range.
  double at(Index i) const;

  std::span<const double> weights() const { return weights_; }
  std::span<const double> prefix() const { return prefix_; }

  double total() const { return prefix_.back(); }
  // W(iv) from the prefix sums.
  double mass(Interval iv) const {
    return prefix_[static_cast<std::size_t>(iv.hi)] -
           prefix_[static_cast<std::size_t>(iv.lo - 1)];
  }

  bool contains(Interval iv) const { return 1 <= iv.lo && iv.lo <= iv.hi && iv.hi <= n(); }
  // Throws std::out_of_range unless 1 <= lo <= hi <= n.
  void check(Interval iv) const;

 private:
  std::vector<double> weights_;
  std::vector<double> prefix_;
};

Universe new_universe(std::vector<double> weights);

double exact_sum(const Universe& u);
Index exact_support(const Universe& u);

bool is_monotone_nonincreasing(const Universe& u);
bool is_monotone_nondecreasing(const Universe& u);

// Smallest j with w(1..j) non-increasing and w(j..n) non-decreasing.
std::optional<Index> is_unimodal_decreasing_increasing(const Universe& u);

// Minimum positive weight is at least W/n.
bool satisfies_min_weight_promise(const Universe& u);

// D(i) = w(i) / W.
std::vector<double> induced_distribution(const Universe& u);

// Half the L1 distance. Both inputs must have equal length and sum to 1
// within 1e-9; throws std::invalid_argument otherwise.
double exact_tv_distance(std::span<const double> p, std::span<const double> q);

// {"n": <int>, "weights": [...]}
nlohmann::json universe_to_json(const Universe& u);
Universe universe_from_json(const nlohmann::json& j);
Universe read_universe_file(const std::filesystem::path& path);
void write_universe_file(const std::filesystem::path& path, const Universe& u);

}  // namespace condsum

#endif  // CONDSUM_UNIVERSE_H_
