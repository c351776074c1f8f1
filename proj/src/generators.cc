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

#include "condsum/generators.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "condsum/numeric.h"
#include "condsum/partition.h"
#include "condsum/rng.h"

namespace condsum {
namespace {

const std::map<std::string, GeneratorKind, std::less<>>& kind_names() {
  static const std::map<std::string, GeneratorKind, std::less<>> names = {
      {"constant", GeneratorKind::kConstant},
      {"power-law", GeneratorKind::kPowerLaw},
      {"step", GeneratorKind::kStep},
      {"birge-flat", GeneratorKind::kBirgeFlat},
      {"sparse-support", GeneratorKind::kSparseSupport},
      {"strict-unimodal", GeneratorKind::kStrictUnimodal},
  };
  return names;
}

double parse_double(std::string_view key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument("generator parameter " + std::string(key) +
                                ": not a number: '" + value + "'");
  }
  return x;
}

Index parse_index(std::string_view key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) {
    throw std::invalid_argument("generator parameter " + std::string(key) +
                                ": not an integer: '" + value + "'");
  }
  return static_cast<Index>(x);
}

// Distinct values from {0, ..., population - 1}, in random order.
std::vector<Index> sample_without_replacement(Index population, Index count, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(population));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(population - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

void fill_levels(const IntervalPartition& p, std::span<const double> levels,
                 std::vector<double>& weights) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Interval& iv = p.intervals()[j];
    std::fill(weights.begin() + (iv.lo - 1), weights.begin() + iv.hi, levels[j]);
  }
}

bool flat_on(const Universe& u, const IntervalPartition& p) {
  for (const Interval& iv : p.intervals()) {
    for (Index i = iv.lo + 1; i <= iv.hi; ++i) {
      if (u.weight(i) != u.weight(iv.lo)) return false;
    }
  }
  return true;
}

std::vector<double> constant_weights(const GeneratorSpec& spec) {
  if (!(spec.level > 0.0) || !std::isfinite(spec.level)) {
    throw std::invalid_argument("constant generator needs c > 0");
  }
  return std::vector<double>(static_cast<std::size_t>(spec.n), spec.level);
}

std::vector<double> power_law_weights(const GeneratorSpec& spec) {
  if (!(spec.exponent >= 0.0) || !std::isfinite(spec.exponent)) {
    throw std::invalid_argument("power-law generator needs exponent >= 0");
  }
  std::vector<double> w(static_cast<std::size_t>(spec.n));
  for (Index i = 1; i <= spec.n; ++i) {
    w[static_cast<std::size_t>(i - 1)] = std::pow(static_cast<double>(i), -spec.exponent);
  }
  return w;
}

std::vector<double> step_weights(const GeneratorSpec& spec, Rng& rng) {
  if (spec.steps < 1 || spec.steps > spec.n) {
    throw std::invalid_argument("step generator needs 1 <= steps <= n");
  }
  std::vector<Index> breaks = sample_without_replacement(spec.n - 1, spec.steps - 1, rng);
  for (Index& b : breaks) b += 1;  // step after index b
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(static_cast<std::size_t>(spec.steps));
  levels.back() = rng.uniform(1.0, 2.0);
  for (std::size_t j = levels.size() - 1; j-- > 0;) {
    levels[j] = levels[j + 1] + rng.uniform(0.5, 1.5);
  }
  std::vector<double> w(static_cast<std::size_t>(spec.n));
  std::size_t level = 0;
  for (Index i = 1; i <= spec.n; ++i) {
    w[static_cast<std::size_t>(i - 1)] = levels[level];
    if (level < breaks.size() && breaks[level] == i) ++level;
  }
  return w;
}

std::vector<double> birge_flat_weights(const GeneratorSpec& spec, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(spec.n));
  if (!spec.valley) {
    const IntervalPartition p = make_partition(spec.n, spec.partition_epsilon,
                                               Direction::kDecreasing);
    std::vector<double> levels(p.size());
    levels.back() = rng.uniform(1.0, 2.0);
    for (std::size_t j = levels.size() - 1; j-- > 0;) {
      levels[j] = levels[j + 1] + rng.uniform(0.5, 1.5);
    }
    fill_levels(p, levels, w);
    return w;
  }
  // V shape. The left half ends in a singleton interval at the global
  // minimum; every right level sits strictly between the bottom and the
  // second-lowest left level.
  const Index v = snap_birge_valley(*spec.valley, spec.partition_epsilon);
  const IntervalPartition left = make_partition(Interval{1, v}, spec.partition_epsilon,
                                                Direction::kDecreasing);
  const double bottom = rng.uniform(1.0, 1.5);
  std::vector<double> left_levels(left.size());
  left_levels.back() = bottom;
  if (left_levels.size() >= 2) {
    left_levels[left_levels.size() - 2] = bottom + 1.0 + rng.uniform(0.0, 0.5);
    for (std::size_t j = left_levels.size() - 2; j-- > 0;) {
      left_levels[j] = left_levels[j + 1] + rng.uniform(0.5, 1.5);
    }
  }
  fill_levels(left, left_levels, w);
  if (v < spec.n) {
    const IntervalPartition right = make_partition(Interval{v + 1, spec.n},
                                                   spec.partition_epsilon,
                                                   Direction::kIncreasing);
    const auto q = static_cast<double>(right.size());
    std::vector<double> right_levels(right.size());
    for (std::size_t k = 0; k < right.size(); ++k) {
      right_levels[k] =
          bottom + 0.25 + 0.5 * (static_cast<double>(k) + rng.uniform(0.1, 0.9)) / q;
    }
    fill_levels(right, right_levels, w);
  }
  return w;
}

std::vector<double> sparse_support_weights(const GeneratorSpec& spec, Rng& rng) {
  if (spec.support < 1 || 2 * spec.support > spec.n) {
    throw std::invalid_argument(
        "sparse-support generator needs 1 <= k <= n/2 (weights in [1,2] guarantee "
        "min weight >= W/n only then)");
  }
  std::vector<double> w(static_cast<std::size_t>(spec.n), 0.0);
  for (Index pos : sample_without_replacement(spec.n, spec.support, rng)) {
    w[static_cast<std::size_t>(pos)] = rng.uniform(1.0, 2.0);
  }
  return w;
}

std::vector<double> strict_unimodal_weights(const GeneratorSpec& spec, Rng& rng) {
  if (!(spec.jitter >= 0.0) || !std::isfinite(spec.jitter)) {
    throw std::invalid_argument("strict-unimodal generator needs jitter >= 0");
  }
  const Index v = spec.valley ? *spec.valley
                              : 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.n)));
  if (v < 1 || v > spec.n) throw std::invalid_argument("valley outside [1..n]");
  std::vector<double> w(static_cast<std::size_t>(spec.n));
  w[static_cast<std::size_t>(v - 1)] = 1.0;
  for (Index i = v - 1; i >= 1; --i) {
    w[static_cast<std::size_t>(i - 1)] = w[static_cast<std::size_t>(i)] + 1.0 + spec.jitter * rng.uniform01();
  }
  for (Index i = v + 1; i <= spec.n; ++i) {
    w[static_cast<std::size_t>(i - 1)] = w[static_cast<std::size_t>(i - 2)] + 1.0 + spec.jitter * rng.uniform01();
  }
  return w;
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name.c_str();
  }
  return "unknown";
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const auto it = kind_names().find(kind);
  if (it == kind_names().end()) {
    throw std::invalid_argument("unknown generator kind '" + std::string(kind) + "'");
  }
  spec.kind = it->second;
  if (colon == std::string_view::npos) return spec;

  std::stringstream params{std::string(text.substr(colon + 1))};
  std::string item;
  while (std::getline(params, item, ',')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("generator parameter '" + item + "' lacks '='");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_index(key, value);
    } else if (key == "c") {
      spec.level = parse_double(key, value);
    } else if (key == "exponent") {
      spec.exponent = parse_double(key, value);
    } else if (key == "steps") {
      spec.steps = parse_index(key, value);
    } else if (key == "eps") {
      spec.partition_epsilon = parse_double(key, value);
    } else if (key == "sum_eps") {
      const double eps = parse_double(key, value);
      if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("sum_eps must lie in (0,1)");
      spec.partition_epsilon = estimator_partition_epsilon(eps);
    } else if (key == "valley") {
      spec.valley = parse_index(key, value);
    } else if (key == "k") {
      spec.support = parse_index(key, value);
    } else if (key == "jitter") {
      spec.jitter = parse_double(key, value);
    } else {
      throw std::invalid_argument("unknown generator parameter '" + key + "'");
    }
  }
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << to_string(spec.kind) << ":n=" << spec.n;
  switch (spec.kind) {
    case GeneratorKind::kConstant: out << ",c=" << spec.level; break;
    case GeneratorKind::kPowerLaw: out << ",exponent=" << spec.exponent; break;
    case GeneratorKind::kStep: out << ",steps=" << spec.steps; break;
    case GeneratorKind::kBirgeFlat:
      out << ",eps=" << spec.partition_epsilon;
      if (spec.valley) out << ",valley=" << *spec.valley;
      break;
    case GeneratorKind::kSparseSupport: out << ",k=" << spec.support; break;
    case GeneratorKind::kStrictUnimodal:
      if (spec.valley) out << ",valley=" << *spec.valley;
      out << ",jitter=" << spec.jitter;
      break;
  }
  return out.str();
}

std::vector<double> snap_to_sum_grid(std::vector<double> weights) {
  const double total = compensated_sum(weights);
  if (!(total > 0.0) || !std::isfinite(total)) return weights;
  const double grid = std::ldexp(1.0, std::ilogb(total) + 2 - 53);
  for (double& w : weights) {
    if (w <= 0.0) continue;
    const double snapped = std::floor(w / grid) * grid;
    w = snapped > 0.0 ? snapped : grid;
  }
  return weights;
}

Index snap_birge_valley(Index v, double partition_epsilon) {
  if (v < 1) throw std::invalid_argument("valley must be >= 1");
  for (Index length = v; length > 1; --length) {
    if (birge_sizes(length, partition_epsilon).back() == 1) return length;
  }
  return 1;
}

Universe generate(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw std::invalid_argument("generator needs n >= 1");
  Rng rng(seed);
  std::vector<double> w;
  switch (spec.kind) {
    case GeneratorKind::kConstant: w = constant_weights(spec); break;
    case GeneratorKind::kPowerLaw: w = power_law_weights(spec); break;
    case GeneratorKind::kStep: w = step_weights(spec, rng); break;
    case GeneratorKind::kBirgeFlat: w = birge_flat_weights(spec, rng); break;
    case GeneratorKind::kSparseSupport: w = sparse_support_weights(spec, rng); break;
    case GeneratorKind::kStrictUnimodal: w = strict_unimodal_weights(spec, rng); break;
  }
  return Universe(snap_to_sum_grid(std::move(w)));
}

bool satisfies_generator_contract(const GeneratorSpec& spec, const Universe& u) {
  if (u.n() != spec.n) return false;
  const auto w = u.weights();
  switch (spec.kind) {
    case GeneratorKind::kConstant:
      return std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
    case GeneratorKind::kPowerLaw:
    case GeneratorKind::kStep:
      return is_monotone_nonincreasing(u);
    case GeneratorKind::kBirgeFlat: {
      if (!spec.valley) {
        const IntervalPartition p = make_partition(u.n(), spec.partition_epsilon,
                                                   Direction::kDecreasing);
        if (!flat_on(u, p)) return false;
        for (std::size_t j = 1; j < p.size(); ++j) {
          if (!(u.weight(p.intervals()[j - 1].lo) > u.weight(p.intervals()[j].lo))) return false;
        }
        return true;
      }
      const Index v = snap_birge_valley(*spec.valley, spec.partition_epsilon);
      if (is_unimodal_decreasing_increasing(u) != v) return false;
      if (!flat_on(u, make_partition(Interval{1, v}, spec.partition_epsilon,
                                     Direction::kDecreasing))) {
        return false;
      }
      return v == u.n() || flat_on(u, make_partition(Interval{v + 1, u.n()},
                                                     spec.partition_epsilon,
                                                     Direction::kIncreasing));
    }
    case GeneratorKind::kSparseSupport:
      return exact_support(u) == spec.support && satisfies_min_weight_promise(u);
    case GeneratorKind::kStrictUnimodal: {
      const auto v = static_cast<std::size_t>(
          std::min_element(w.begin(), w.end()) - w.begin());
      if (spec.valley && static_cast<Index>(v) + 1 != *spec.valley) return false;
      for (std::size_t i = 0; i < v; ++i) {
        if (!(w[i] > w[i + 1])) return false;
      }
      for (std::size_t i = v; i + 1 < w.size(); ++i) {
        if (!(w[i] < w[i + 1])) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace condsum
