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

#include "condsum/support_estimators.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace condsum {

const char* to_string(SupportVariant v) {
  return v == SupportVariant::kLiteral ? "literal" : "union";
}

SupportVariant parse_support_variant(std::string_view text) {
  if (text == "literal") return SupportVariant::kLiteral;
  if (text == "union") return SupportVariant::kUnion;
  throw std::invalid_argument("variant must be 'literal' or 'union', got '" + std::string(text) +
                              "'");
}

SupportParams SupportParams::make(double epsilon, Index n, SupportVariant variant,
                                  const SupportConstants& constants) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(constants.c_S > 0.0) || !(constants.c_R > 0.0)) {
    throw std::invalid_argument("c_S and c_R must be positive");
  }
  SupportParams p;
  p.epsilon = epsilon;
  p.n = n;
  p.variant = variant;
  p.c_S = constants.c_S;
  p.c_R = constants.c_R;

  const double log_ratio = std::log(static_cast<double>(n) / epsilon);
  const double cap = epsilon / 4.0;
  p.alpha_formula = std::pow(epsilon, 3) / (log_ratio * std::log(log_ratio));
  if (!(p.alpha_formula > 0.0) || !std::isfinite(p.alpha_formula)) {
    p.alpha = cap;
    p.alpha_clamped = true;
  } else {
    p.alpha = std::min(p.alpha_formula, cap);
    p.alpha_clamped = p.alpha_formula > cap;
  }

  const double r = constants.c_R * (log_ratio / (epsilon * epsilon)) *
                   std::log(log_ratio / epsilon);
  p.R_budget = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::max(r, 0.0))));
  const double s = constants.c_S * std::log(10.0 * static_cast<double>(p.R_budget)) /
                   (p.alpha * p.alpha);
  p.S_budget = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(s)));
  return p;
}

std::uint64_t SupportParams::expected_uniform_full() const {
  return variant == SupportVariant::kLiteral ? R_budget * S_budget : S_budget;
}

bool in_neighborhood(double w_center, double w_other, double epsilon) {
  if (!(w_center > 0.0)) {
    throw std::invalid_argument("neighbourhood centre must have positive weight");
  }
  const double factor = 1.0 + epsilon;
  return w_center / factor <= w_other && w_other <= factor * w_center;
}

NeighborhoodCover::NeighborhoodCover(std::span<const double> center_weights, double epsilon) {
  std::vector<double> centers(center_weights.begin(), center_weights.end());
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  const double factor = 1.0 + epsilon;
  for (double c : centers) {
    if (!(c > 0.0)) {
      throw std::invalid_argument("neighbourhood centre must have positive weight");
    }
    const double lo = c / factor;
    const double hi = factor * c;
    if (!hi_.empty() && lo <= hi_.back()) {
      hi_.back() = std::max(hi_.back(), hi);
    } else {
      lo_.push_back(lo);
      hi_.push_back(hi);
    }
  }
}

bool NeighborhoodCover::covers_sorted(double w) const {
  // Last range starting at or below w.
  const auto it = std::upper_bound(lo_.begin(), lo_.end(), w);
  if (it == lo_.begin()) return false;
  return w <= hi_[static_cast<std::size_t>(it - lo_.begin()) - 1];
}

NeighborhoodEstimate estimate_neighborhood_fraction(OracleSession& session, SamplePair center,
                                                    const SupportParams& params) {
  if (!(center.weight > 0.0)) {
    throw std::invalid_argument("neighbourhood centre must have positive weight");
  }
  const double factor = 1.0 + params.epsilon;
  const double lo = center.weight / factor;
  const double hi = factor * center.weight;
  NeighborhoodEstimate est;
  est.center = center;
  std::uint64_t hits = 0;
  session.uniform_full_samples(params.S_budget, [&](SamplePair s) {
    hits += (lo <= s.weight) & (s.weight <= hi);
  });
  est.hits = hits;
  est.fraction = static_cast<double>(est.hits) / static_cast<double>(params.S_budget);
  return est;
}

SupportEstimate estimate_support_size(OracleSession& session, const SupportParams& params) {
  assert(satisfies_min_weight_promise(session.universe()));
  if (params.n != session.universe().n()) {
    throw std::invalid_argument("support parameters were built for a different n");
  }
  const QueryStats before = session.stats();
  SupportEstimate est;
  est.variant = params.variant;
  est.centers.reserve(params.R_budget);
  for (std::uint64_t r = 0; r < params.R_budget; ++r) {
    est.centers.push_back(session.weighted_full_sample());
  }
  est.cover_set_size = est.centers.size();
  const auto n = static_cast<double>(params.n);

  if (params.variant == SupportVariant::kLiteral) {
    double total = 0.0;
    for (const SamplePair& c : est.centers) {
      total += n * estimate_neighborhood_fraction(session, c, params).fraction;
    }
    est.value = total;
  } else {
    std::vector<double> center_weights;
    center_weights.reserve(est.centers.size());
    for (const SamplePair& c : est.centers) center_weights.push_back(c.weight);
    const NeighborhoodCover cover(center_weights, params.epsilon);
    std::uint64_t covered = 0;
    session.uniform_full_samples(params.S_budget,
                                 [&](SamplePair s) { covered += cover.covers(s.weight); });
    est.value = n * static_cast<double>(covered) / static_cast<double>(params.S_budget);
  }
  est.stats = session.stats() - before;
  return est;
}

}  // namespace condsum
