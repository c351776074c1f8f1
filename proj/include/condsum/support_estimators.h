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

#ifndef CONDSUM_SUPPORT_ESTIMATORS_H_
#define CONDSUM_SUPPORT_ESTIMATORS_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "condsum/oracle.h"
#include "condsum/universe.h"

namespace condsum {

enum class SupportVariant {
  kLiteral,  // k = sum over centres r of n * f_r
  kUnion,    // k = n * (fraction of a shared pool covered by some centre)
};

const char* to_string(SupportVariant v);
// "literal" or "union"; throws std::invalid_argument.
SupportVariant parse_support_variant(std::string_view text);

struct SupportConstants {
  double c_S = 1.0;
  double c_R = 1.0;
};

struct SupportParams {
  double epsilon = 0.0;
  Index n = 0;
  // alpha = min(eps^3 / (ln(n/eps) ln ln(n/eps)), eps/4); the formula value
  // is kept in alpha_formula and alpha_clamped records whether the cap (or
  // a degenerate ln ln <= 0) applied.
  double alpha = 0.0;
  double alpha_formula = 0.0;
  bool alpha_clamped = false;
  std::uint64_t S_budget = 0;  // ceil(c_S ln(10 R) / alpha^2)
  std::uint64_t R_budget = 0;  // ceil(c_R (ln(n/eps) / eps^2) ln(ln(n/eps) / eps)), >= 1
  SupportVariant variant = SupportVariant::kUnion;
  double c_S = 1.0;
  double c_R = 1.0;

  // Throws std::invalid_argument unless 0 < epsilon < 1, n >= 1 and the
  // constants are positive.
  static SupportParams make(double epsilon, Index n, SupportVariant variant = SupportVariant::kUnion,
                            const SupportConstants& constants = {});

  std::uint64_t expected_uniform_full() const;
  std::uint64_t expected_weighted_full() const { return R_budget; }
};

// w_center / (1+eps) <= w_other <= (1+eps) w_center. Throws
// std::invalid_argument when w_center <= 0.
bool in_neighborhood(double w_center, double w_other, double epsilon);

// Union of the closed neighbourhoods of a set of centre weights, merged into
// disjoint ranges. covers(w) agrees exactly with "in_neighborhood(c, w, eps)
// for some centre c".
class NeighborhoodCover {
 public:
  NeighborhoodCover(std::span<const double> center_weights, double epsilon);

  bool covers(double w) const {
    if (lo_.size() == 1) return (lo_[0] <= w) & (w <= hi_[0]);
    if (lo_.size() <= kLinearScan) {
      bool hit = false;
      for (std::size_t k = 0; k < lo_.size(); ++k) hit |= (lo_[k] <= w) & (w <= hi_[k]);
      return hit;
    }
    return covers_sorted(w);
  }
  std::size_t ranges() const { return lo_.size(); }

 private:
  static constexpr std::size_t kLinearScan = 8;

  bool covers_sorted(double w) const;

  std::vector<double> lo_;
  std::vector<double> hi_;
};

struct NeighborhoodEstimate {
  SamplePair center;
  double fraction = 0.0;  // hits / S_budget
  std::uint64_t hits = 0;
};

// Draws S_budget uniform full-domain pairs and returns the fraction inside
// the centre's neighbourhood. The centre must have positive weight.
NeighborhoodEstimate estimate_neighborhood_fraction(OracleSession& session, SamplePair center,
                                                    const SupportParams& params);

struct SupportEstimate {
  double value = 0.0;
  SupportVariant variant = SupportVariant::kUnion;
  QueryStats stats;
  std::size_t cover_set_size = 0;  // |R|, duplicates included
  std::vector<SamplePair> centers;  // R in draw order
};

// Draws R by weighted sampling and estimates the support size under the
// min-weight promise. See SupportVariant.
SupportEstimate estimate_support_size(OracleSession& session, const SupportParams& params);

}  // namespace condsum

#endif  // CONDSUM_SUPPORT_ESTIMATORS_H_
