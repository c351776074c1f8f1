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

#include "condsum/oracle.h"

namespace condsum {

QueryStats& QueryStats::operator+=(const QueryStats& other) {
  weighted_cond += other.weighted_cond;
  uniform_cond += other.uniform_cond;
  eval += other.eval;
  weighted_full += other.weighted_full;
  uniform_full += other.uniform_full;
  zero_mass_fallbacks += other.zero_mass_fallbacks;
  return *this;
}

QueryStats operator-(const QueryStats& a, const QueryStats& b) {
  QueryStats d;
  d.weighted_cond = a.weighted_cond - b.weighted_cond;
  d.uniform_cond = a.uniform_cond - b.uniform_cond;
  d.eval = a.eval - b.eval;
  d.weighted_full = a.weighted_full - b.weighted_full;
  d.uniform_full = a.uniform_full - b.uniform_full;
  d.zero_mass_fallbacks = a.zero_mass_fallbacks - b.zero_mass_fallbacks;
  return d;
}

const char* to_string(AccessModel model) {
  switch (model) {
    case AccessModel::kWeightedCond: return "weighted-cond";
    case AccessModel::kUniformCond: return "uniform-cond";
    case AccessModel::kEval: return "eval";
    case AccessModel::kWeightedFull: return "weighted-full";
    case AccessModel::kUniformFull: return "uniform-full";
  }
  return "unknown";
}

Index OracleSession::draw_weighted(Interval iv) {
  const auto prefix = universe_->prefix();
  const double base = prefix[static_cast<std::size_t>(iv.lo - 1)];
  const double target = base + rng_.uniform01() * universe_->mass(iv);
  // Smallest i in iv with prefix[i] > target. Zero weights have
  // prefix[i] == prefix[i - 1] and are never selected.
  Index lo = iv.lo;
  Index hi = iv.hi;
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    ++search_comparisons_;
    if (prefix[static_cast<std::size_t>(mid)] > target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  ++search_comparisons_;
  if (prefix[static_cast<std::size_t>(lo)] > target) return lo;
  // target rounded up to W(iv); take the last positive weight.
  Index i = iv.hi;
  while (i > iv.lo && universe_->weight(i) == 0.0) --i;
  return i;
}

void OracleSession::record(AccessModel model, Interval set, std::uint64_t count) {
  if (!log_.empty() && log_.back().model == model && log_.back().set == set) {
    log_.back().count += count;
  } else {
    log_.push_back({model, set, count});
  }
}

std::vector<double> exact_pmf(const Universe& u, Interval iv, CondModel model) {
  u.check(iv);
  const auto size = static_cast<std::size_t>(iv.size());
  const double mass = u.mass(iv);
  if (model == CondModel::kUniform || !(mass > 0.0)) {
    return std::vector<double>(size, 1.0 / static_cast<double>(size));
  }
  std::vector<double> pmf(size);
  for (std::size_t k = 0; k < size; ++k) {
    pmf[k] = u.weight(iv.lo + static_cast<Index>(k)) / mass;
  }
  return pmf;
}

}  // namespace condsum
