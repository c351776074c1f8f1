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

#ifndef CONDSUM_ORACLE_H_
#define CONDSUM_ORACLE_H_

#include <cstdint>
#include <vector>

#include "condsum/rng.h"
#include "condsum/universe.h"

namespace condsum {

// An element index together with its weight, as every oracle returns it.
struct SamplePair {
  Index index = 0;
  double weight = 0.0;

  friend bool operator==(const SamplePair&, const SamplePair&) = default;
};

// Per-access-model query counters.
struct QueryStats {
  std::uint64_t weighted_cond = 0;
  std::uint64_t uniform_cond = 0;
  std::uint64_t eval = 0;
  std::uint64_t weighted_full = 0;
  std::uint64_t uniform_full = 0;
  std::uint64_t zero_mass_fallbacks = 0;

  std::uint64_t conditional() const { return weighted_cond + uniform_cond; }

  QueryStats& operator+=(const QueryStats& other);
  friend bool operator==(const QueryStats&, const QueryStats&) = default;
};

QueryStats operator-(const QueryStats& a, const QueryStats& b);

enum class AccessModel { kWeightedCond, kUniformCond, kEval, kWeightedFull, kUniformFull };

const char* to_string(AccessModel model);

// Run of consecutive queries of one model against one conditioning set.
struct QueryBlock {
  AccessModel model;
  Interval set;
  std::uint64_t count;

  friend bool operator==(const QueryBlock&, const QueryBlock&) = default;
};

// Simulated access to a universe: weighted and uniform conditional sampling
// on intervals, EVAL queries, and full-domain weighted and uniform sampling.
//
// A session owns its random stream and counters and is used by one thread at
// a time; any number of sessions may share one Universe, which must outlive
// them. Equal seeds and equal query sequences give equal answers.
class OracleSession {
 public:
  OracleSession(const Universe& universe, std::uint64_t seed)
      : universe_(&universe), rng_(seed) {}

  const Universe& universe() const { return *universe_; }
  const QueryStats& stats() const { return stats_; }

  // Index comparisons made by weighted draws so far (binary search on the
  // prefix sums).
  std::uint64_t search_comparisons() const { return search_comparisons_; }

  // When on, every query is appended to query_log() (run-length encoded).
  void set_recording(bool on) { recording_ = on; }
  const std::vector<QueryBlock>& query_log() const { return log_; }

  // i in iv with probability w(i) / W(iv). A zero-mass interval yields a
  // uniform draw over iv and bumps zero_mass_fallbacks. Throws
  // std::out_of_range on an invalid interval.
  SamplePair weighted_cond_sample(Interval iv) {
    universe_->check(iv);
    ++stats_.weighted_cond;
    if (recording_) record(AccessModel::kWeightedCond, iv);
    if (!(universe_->mass(iv) > 0.0)) {
      ++stats_.zero_mass_fallbacks;
      return pair_at(draw_uniform(iv));
    }
    return pair_at(draw_weighted(iv));
  }

  // i in iv with probability 1 / |iv|.
  SamplePair uniform_cond_sample(Interval iv) {
    universe_->check(iv);
    ++stats_.uniform_cond;
    if (recording_) record(AccessModel::kUniformCond, iv);
    return pair_at(draw_uniform(iv));
  }

  // w(i); throws std::out_of_range unless 1 <= i <= n.
  double eval_query(Index i) {
    const double w = universe_->at(i);
    ++stats_.eval;
    if (recording_) record(AccessModel::kEval, {i, i});
    return w;
  }

  // i in [1..n] with probability w(i) / W.
  SamplePair weighted_full_sample() {
    ++stats_.weighted_full;
    if (recording_) record(AccessModel::kWeightedFull, universe_->domain());
    return pair_at(draw_weighted(universe_->domain()));
  }

  // i in [1..n] with probability 1 / n.
  SamplePair uniform_full_sample() {
    ++stats_.uniform_full;
    if (recording_) record(AccessModel::kUniformFull, universe_->domain());
    return pair_at(draw_uniform(universe_->domain()));
  }

  // Same draws, counters and log as `count` calls of uniform_full_sample(),
  // each result passed to visit(SamplePair) in order.
  template <typename Visit>
  void uniform_full_samples(std::uint64_t count, Visit&& visit) {
    if (count == 0) return;
    Rng rng = rng_;
    const Universe& u = *universe_;
    const auto n = static_cast<std::uint64_t>(u.n());
    for (std::uint64_t k = 0; k < count; ++k) {
      const Index i = 1 + static_cast<Index>(rng.below(n));
      visit(SamplePair{i, u.weight(i)});
    }
    rng_ = rng;
    stats_.uniform_full += count;
    if (recording_) record(AccessModel::kUniformFull, u.domain(), count);
  }

 private:
  SamplePair pair_at(Index i) const { return {i, universe_->weight(i)}; }

  Index draw_uniform(Interval iv) {
    return iv.lo + static_cast<Index>(rng_.below(static_cast<std::uint64_t>(iv.size())));
  }

  Index draw_weighted(Interval iv);
  void record(AccessModel model, Interval set, std::uint64_t count = 1);

  const Universe* universe_;
  Rng rng_;
  QueryStats stats_;
  std::uint64_t search_comparisons_ = 0;
  bool recording_ = false;
  std::vector<QueryBlock> log_;
};

enum class CondModel { kWeighted, kUniform };

// Exact sampling law of the conditional oracles over iv, in index order.
// Zero-mass intervals under kWeighted give the uniform fallback law.
std::vector<double> exact_pmf(const Universe& u, Interval iv, CondModel model);

}  // namespace condsum

#endif  // CONDSUM_ORACLE_H_
