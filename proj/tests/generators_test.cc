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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "condsum/partition.h"

namespace condsum {
namespace {

std::vector<double> weights_of(const Universe& u) {
  return {u.weights().begin(), u.weights().end()};
}

TEST(GeneratorsTest, ConstantExample) {
  EXPECT_EQ(weights_of(generate(parse_generator_spec("constant:n=4,c=2.5"), 0)),
            (std::vector<double>{2.5, 2.5, 2.5, 2.5}));
}

TEST(GeneratorsTest, SparseSupportExample) {
  const Universe u = generate(parse_generator_spec("sparse-support:n=100,k=40"), 11);
  EXPECT_EQ(exact_support(u), 40);
  for (double w : u.weights()) {
    if (w > 0) {
      EXPECT_GE(w, exact_sum(u) / 100);
      EXPECT_GE(w, 1.0);
      EXPECT_LE(w, 2.0);
    }
  }
}

TEST(GeneratorsTest, BirgeFlatExample) {
  const Universe u = generate(parse_generator_spec("birge-flat:n=10,eps=1"), 4);
  const auto w = weights_of(u);
  EXPECT_EQ(w[0], w[1]);
  EXPECT_GT(w[1], w[2]);
  EXPECT_TRUE(w[2] == w[3] && w[3] == w[4] && w[4] == w[5]);
  EXPECT_GT(w[5], w[6]);
  EXPECT_TRUE(w[6] == w[7] && w[7] == w[8] && w[8] == w[9]);
}

TEST(GeneratorsTest, PowerLawValues) {
  const Universe u = generate(parse_generator_spec("power-law:n=5,exponent=1"), 0);
  // Snapping moves each weight by less than one grid step of the total.
  const double grid = std::ldexp(1.0, std::ilogb(exact_sum(u)) + 2 - 53);
  for (Index i = 1; i <= 5; ++i) EXPECT_NEAR(u.weight(i), 1.0 / i, grid);
}

TEST(GeneratorsTest, StrictUnimodalWithoutJitter) {
  const Universe u = generate(parse_generator_spec("strict-unimodal:n=6,valley=3,jitter=0"), 9);
  EXPECT_EQ(weights_of(u), (std::vector<double>{3, 2, 1, 2, 3, 4}));
}

TEST(GeneratorsTest, Deterministic) {
  for (const char* text : {"step:n=500,steps=7", "sparse-support:n=500,k=100",
                           "strict-unimodal:n=500", "birge-flat:n=500,valley=200"}) {
    const GeneratorSpec spec = parse_generator_spec(text);
    EXPECT_EQ(weights_of(generate(spec, 42)), weights_of(generate(spec, 42))) << text;
    EXPECT_NE(weights_of(generate(spec, 42)), weights_of(generate(spec, 43))) << text;
  }
}

TEST(GeneratorsTest, ParseErrors) {
  EXPECT_THROW(parse_generator_spec("zipf:n=3"), std::invalid_argument);
  EXPECT_THROW(parse_generator_spec("constant:n"), std::invalid_argument);
  EXPECT_THROW(parse_generator_spec("constant:n=abc"), std::invalid_argument);
  EXPECT_THROW(parse_generator_spec("constant:n=2.5"), std::invalid_argument);
  EXPECT_THROW(parse_generator_spec("constant:size=3"), std::invalid_argument);
  EXPECT_THROW(parse_generator_spec("birge-flat:sum_eps=1.5"), std::invalid_argument);
}

TEST(GeneratorsTest, InfeasibleParameters) {
  EXPECT_THROW(generate(parse_generator_spec("sparse-support:n=100,k=51"), 0),
               std::invalid_argument);
  EXPECT_THROW(generate(parse_generator_spec("sparse-support:n=100,k=0"), 0),
               std::invalid_argument);
  EXPECT_THROW(generate(parse_generator_spec("constant:n=0"), 0), std::invalid_argument);
  EXPECT_THROW(generate(parse_generator_spec("constant:n=3,c=0"), 0), std::invalid_argument);
  EXPECT_THROW(generate(parse_generator_spec("step:n=3,steps=4"), 0), std::invalid_argument);
  EXPECT_THROW(generate(parse_generator_spec("strict-unimodal:n=3,valley=4"), 0),
               std::invalid_argument);
}

TEST(GeneratorsTest, SpecRoundTrip) {
  for (const char* text : {"constant:n=4,c=2.5", "power-law:n=9,exponent=0.75",
                           "step:n=9,steps=3", "birge-flat:n=9,eps=0.5,valley=4",
                           "sparse-support:n=9,k=2", "strict-unimodal:n=9,valley=2,jitter=0"}) {
    const GeneratorSpec spec = parse_generator_spec(text);
    EXPECT_EQ(to_string(parse_generator_spec(to_string(spec))), to_string(spec)) << text;
    EXPECT_EQ(weights_of(generate(parse_generator_spec(to_string(spec)), 1)),
              weights_of(generate(spec, 1)));
  }
}

TEST(GeneratorsTest, SumEpsilonSetsEstimatorPartition) {
  EXPECT_DOUBLE_EQ(parse_generator_spec("birge-flat:sum_eps=0.25").partition_epsilon,
                   estimator_partition_epsilon(0.25));
}

TEST(GeneratorsTest, SnapGridKeepsOrderAndPositivity) {
  const auto w = snap_to_sum_grid({1e6, 1.0, 1e-30, 0.0, 1.0});
  EXPECT_GT(w[2], 0.0);
  EXPECT_EQ(w[3], 0.0);
  EXPECT_EQ(w[1], w[4]);
  EXPECT_GE(w[0], w[1]);
}

TEST(GeneratorsTest, SnapValleyEndsInSingleton) {
  for (double eps : {0.05, 0.1, 0.25, 0.5}) {
    for (Index v = 1; v <= 300; ++v) {
      const Index s = snap_birge_valley(v, eps);
      ASSERT_LE(s, v);
      ASSERT_GE(s, 1);
      ASSERT_EQ(birge_sizes(s, eps).back(), 1) << v << " " << eps;
      for (Index t = s + 1; t <= v; ++t) ASSERT_NE(birge_sizes(t, eps).back(), 1);
    }
  }
}

// Property: 1000 seeds per family satisfy the family's structural promise.
TEST(GeneratorsTest, ContractsHoldOverManySeeds) {
  const char* families[] = {
      "constant:n=300,c=0.3",          "power-law:n=300,exponent=1.5",
      "step:n=300,steps=6",            "birge-flat:n=300,eps=0.2",
      "birge-flat:n=300,eps=0.2,valley=150", "sparse-support:n=300,k=150",
      "sparse-support:n=300,k=1",      "strict-unimodal:n=300",
      "strict-unimodal:n=300,jitter=0"};
  for (const char* text : families) {
    const GeneratorSpec spec = parse_generator_spec(text);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      ASSERT_TRUE(satisfies_generator_contract(spec, generate(spec, seed)))
          << text << " seed " << seed;
    }
  }
}

TEST(GeneratorsTest, ContractDetectsViolations) {
  EXPECT_FALSE(satisfies_generator_contract(parse_generator_spec("power-law:n=3"),
                                            Universe({1, 2, 3})));
  EXPECT_FALSE(satisfies_generator_contract(parse_generator_spec("sparse-support:n=3,k=1"),
                                            Universe({1, 1, 0})));
  EXPECT_FALSE(satisfies_generator_contract(parse_generator_spec("strict-unimodal:n=3"),
                                            Universe({2, 1, 1})));
  EXPECT_FALSE(satisfies_generator_contract(parse_generator_spec("constant:n=2"),
                                            Universe({1, 2})));
}

}  // namespace
}  // namespace condsum
