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

#ifndef CONDSUM_GENERATORS_H_
#define CONDSUM_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condsum/universe.h"

namespace condsum {

enum class GeneratorKind {
  kConstant,
  kPowerLaw,
  kStep,
  kBirgeFlat,
  kSparseSupport,
  kStrictUnimodal,
};

// Synthetic universe family plus its parameters. Only the fields relevant to
// `kind` are read.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kConstant;
  Index n = 1;
  double level = 1.0;               // constant: the common weight c
  double exponent = 0.5;            // power-law: w(i) = i^-exponent
  Index steps = 4;                  // step: number of distinct levels
  double partition_epsilon = 0.25;  // birge-flat: partition parameter
  std::optional<Index> valley;      // birge-flat (V-shaped), strict-unimodal
  Index support = 1;                // sparse-support: k
  double jitter = 0.5;              // strict-unimodal: slope noise, 0 gives |i-v|+1
};

// Parses "kind[:key=value[,key=value...]]". Keys: n, c, exponent, steps, eps,
// sum_eps (sets eps to the sum estimators' partition parameter), valley, k,
// jitter. Throws std::invalid_argument.
GeneratorSpec parse_generator_spec(std::string_view text);
std::string to_string(const GeneratorSpec& spec);
const char* to_string(GeneratorKind kind);

// Deterministic in (spec, seed). Throws std::invalid_argument on infeasible
// parameters, e.g. sparse-support with 2k > n.
//
// Outputs are snapped to a dyadic grid fine enough that every prefix sum is
// exact in double precision; see snap_to_sum_grid.
Universe generate(const GeneratorSpec& spec, std::uint64_t seed);

// Rounds each weight down to a multiple of g = 2^(e - 53), where 2^e bounds
// the total, so all partial sums and products |I| * w(i) <= W are exact.
// Positive weights stay positive and weak orderings are preserved.
std::vector<double> snap_to_sum_grid(std::vector<double> weights);

// For V-shaped birge-flat universes: the largest left-half length <= v
// whose decreasing partition ends with a singleton interval.
Index snap_birge_valley(Index v, double partition_epsilon);

// Structural promise of the generator family: constant, monotone, flat on
// the partition, unimodal around the valley, or exactly k positive weights
// with the min-weight promise.
bool satisfies_generator_contract(const GeneratorSpec& spec, const Universe& u);

}  // namespace condsum

#endif  // CONDSUM_GENERATORS_H_
