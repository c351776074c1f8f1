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

#include "condsum/universe.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "condsum/numeric.h"

namespace condsum {

std::string to_string(Interval iv) {
  return "[" + std::to_string(iv.lo) + ".." + std::to_string(iv.hi) + "]";
}

Universe::Universe(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("universe must have at least one element");
  prefix_.reserve(weights_.size() + 1);
  prefix_.push_back(0.0);
  CompensatedSum running;
  bool any_positive = false;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("weight " + std::to_string(i + 1) +
                                  " is negative or not finite");
    }
    any_positive = any_positive || w > 0.0;
    running.add(w);
    prefix_.push_back(std::max(prefix_.back(), running.value()));
  }
  if (!any_positive) throw std::invalid_argument("all-zero weight vector (W = 0)");
}

double Universe::at(Index i) const {
  if (i < 1 || i > n()) {
    throw std::out_of_range("index " + std::to_string(i) + " outside [1.." +
                            std::to_string(n()) + "]");
  }
  return weight(i);
}

void Universe::check(Interval iv) const {
  if (!contains(iv)) {
    throw std::out_of_range("interval " + to_string(iv) + " not within [1.." +
                            std::to_string(n()) + "]");
  }
}

Universe new_universe(std::vector<double> weights) { return Universe(std::move(weights)); }

double exact_sum(const Universe& u) { return u.total(); }

Index exact_support(const Universe& u) {
  return std::count_if(u.weights().begin(), u.weights().end(),
                       [](double w) { return w > 0.0; });
}

bool is_monotone_nonincreasing(const Universe& u) {
  const auto w = u.weights();
  return std::is_sorted(w.begin(), w.end(), std::greater<>());
}

bool is_monotone_nondecreasing(const Universe& u) {
  const auto w = u.weights();
  return std::is_sorted(w.begin(), w.end());
}

std::optional<Index> is_unimodal_decreasing_increasing(const Universe& u) {
  const auto w = u.weights();
  const Index n = u.n();
  // Last index of the longest non-increasing prefix.
  Index prefix_end = 1;
  while (prefix_end < n && w[prefix_end - 1] >= w[prefix_end]) ++prefix_end;
  // First index of the longest non-decreasing suffix.
  Index suffix_start = n;
  while (suffix_start > 1 && w[suffix_start - 2] <= w[suffix_start - 1]) --suffix_start;
  if (suffix_start <= prefix_end) return suffix_start;
  return std::nullopt;
}

bool satisfies_min_weight_promise(const Universe& u) {
  const double floor_weight = u.total() / static_cast<double>(u.n());
  return std::all_of(u.weights().begin(), u.weights().end(),
                     [&](double w) { return w == 0.0 || w >= floor_weight; });
}

std::vector<double> induced_distribution(const Universe& u) {
  std::vector<double> d(u.weights().begin(), u.weights().end());
  const double total = u.total();
  for (double& x : d) x /= total;
  return d;
}

double exact_tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("probability vectors differ in length");
  }
  constexpr double kTolerance = 1e-9;
  if (std::abs(compensated_sum(p) - 1.0) > kTolerance ||
      std::abs(compensated_sum(q) - 1.0) > kTolerance) {
    throw std::invalid_argument("probability vector does not sum to 1");
  }
  CompensatedSum l1;
  for (std::size_t i = 0; i < p.size(); ++i) l1.add(std::abs(p[i] - q[i]));
  return std::clamp(0.5 * l1.value(), 0.0, 1.0);
}

nlohmann::json universe_to_json(const Universe& u) {
  return nlohmann::json{{"n", u.n()},
                        {"weights", std::vector<double>(u.weights().begin(), u.weights().end())}};
}

Universe universe_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("weights")) {
    throw std::invalid_argument("universe JSON needs \"n\" and \"weights\"");
  }
  if (!j["n"].is_number_integer() || !j["weights"].is_array()) {
    throw std::invalid_argument("universe JSON has malformed \"n\" or \"weights\"");
  }
  const auto n = j["n"].get<Index>();
  std::vector<double> weights;
  weights.reserve(j["weights"].size());
  for (const auto& w : j["weights"]) {
    if (!w.is_number()) throw std::invalid_argument("non-numeric weight in universe JSON");
    weights.push_back(w.get<double>());
  }
  if (n != static_cast<Index>(weights.size())) {
    throw std::invalid_argument("universe JSON: n = " + std::to_string(n) +
                                " but weights has " + std::to_string(weights.size()) +
                                " entries");
  }
  return Universe(std::move(weights));
}

Universe read_universe_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return universe_from_json(j);
}

void write_universe_file(const std::filesystem::path& path, const Universe& u) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << universe_to_json(u).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace condsum
