// Copyright 2026 The Subsamp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "subsamp/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subsamp/error.hpp"

namespace subsamp {
namespace {

SbmSpec two_block(std::size_t n1, std::size_t n2, double p11, double p12, double p22) {
  SbmSpec spec;
  spec.n = n1 + n2;
  spec.block_sizes = {n1, n2};
  spec.p = {{p11, p12}, {p12, p22}};
  return spec;
}

TEST(GenerateSbm, ZeroAndOneProbabilities) {
  EXPECT_EQ(generate_sbm(two_block(30, 20, 0, 0, 0), 1).graph.num_edges(), 0u);
  const GeneratedGraph full = generate_sbm(two_block(30, 20, 1, 1, 1), 1);
  EXPECT_EQ(full.graph.num_edges(), 50u * 49u / 2u);
}

TEST(GenerateSbm, BlockStructureIsRespected) {
  const GeneratedGraph g = generate_sbm(two_block(40, 60, 1, 0, 0), 3);
  EXPECT_EQ(g.graph.num_edges(), 40u * 39u / 2u);
  for (NodeId v = 0; v < 40; ++v) {
    for (NodeId w : g.graph.neighbors(v)) EXPECT_LT(w, 40u);
  }
  const GeneratedGraph h = generate_sbm(two_block(40, 60, 0, 1, 0), 3);
  EXPECT_EQ(h.graph.num_edges(), 40u * 60u);
}

TEST(GenerateSbm, WithinBlockDegreeMatchesBernoulliMean) {
  const SbmSpec spec = two_block(1000, 1000, 0.04, 0.01, 0.04);
  std::vector<double> means;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const GeneratedGraph gen = generate_sbm(spec, seed);
    std::size_t within = 0;
    for (NodeId v = 0; v < spec.n; ++v) {
      for (NodeId w : gen.graph.neighbors(v)) within += gen.truth[v] == gen.truth[w];
    }
    means.push_back(static_cast<double>(within) / static_cast<double>(spec.n));
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / 50.0;
  double ss = 0.0;
  for (double x : means) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / 49.0 / 50.0);
  EXPECT_LE(std::abs(mean - 0.04 * 999.0), 3.0 * se) << "mean " << mean << " se " << se;
}

TEST(GenerateSbm, EdgeCountConcentrates) {
  const std::size_t n = 600, k = 60;
  const double p11 = 0.2, p12 = 0.05, p22 = 0.01;
  const SbmSpec spec = cp_sbm_spec(n, k, p11, p12, p22);
  const double within_core = k * (k - 1) / 2.0, across = static_cast<double>(k * (n - k));
  const double within_periphery = (n - k) * (n - k - 1) / 2.0;
  const double mean = within_core * p11 + across * p12 + within_periphery * p22;
  const double var = within_core * p11 * (1 - p11) + across * p12 * (1 - p12) + within_periphery * p22 * (1 - p22);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double m = static_cast<double>(generate_sbm(spec, seed).graph.num_edges());
    inside += std::abs(m - mean) <= 4.0 * std::sqrt(var);
  }
  EXPECT_GE(inside, 95);
}

TEST(GenerateSbm, TruthCountsMatchBlockSizes) {
  SbmSpec spec;
  spec.n = 60;
  spec.block_sizes = {10, 20, 30};
  spec.p = {{0.3, 0.1, 0.1}, {0.1, 0.3, 0.1}, {0.1, 0.1, 0.3}};
  const GeneratedGraph g = generate_sbm(spec, 9);
  for (std::int32_t label = 1; label <= 3; ++label) {
    EXPECT_EQ(static_cast<std::size_t>(std::count(g.truth.begin(), g.truth.end(), label)), spec.block_sizes[label - 1]);
  }
}

TEST(GenerateSbm, DeterministicInSeed) {
  const SbmSpec spec = two_block(100, 100, 0.1, 0.02, 0.1);
  EXPECT_EQ(generate_sbm(spec, 4).graph, generate_sbm(spec, 4).graph);
  EXPECT_NE(generate_sbm(spec, 4).graph, generate_sbm(spec, 5).graph);
}

TEST(GenerateSbm, SparsityScalesProbabilities) {
  SbmSpec spec = two_block(50, 50, 1, 1, 1);
  spec.sparsity = 0.0;
  EXPECT_THROW(generate_sbm(spec, 1), InvalidParameter);
  spec.sparsity = 1.0;
  EXPECT_EQ(generate_sbm(spec, 1).graph.num_edges(), 4950u);
}

TEST(SbmSpec, ValidationErrors) {
  EXPECT_THROW(two_block(10, 10, 1.5, 0, 0).validate(), InvalidParameter);
  EXPECT_THROW(two_block(10, 10, -0.1, 0, 0).validate(), InvalidParameter);
  SbmSpec bad_sizes = two_block(10, 10, 0.1, 0.1, 0.1);
  bad_sizes.n = 21;
  EXPECT_THROW(bad_sizes.validate(), InvalidParameter);
  SbmSpec asym = two_block(10, 10, 0.1, 0.1, 0.1);
  asym.p[0][1] = 0.2;
  EXPECT_THROW(asym.validate(), InvalidParameter);
  EXPECT_THROW(generate_sbm(asym, 1), InvalidParameter);
}

TEST(SbmSpec, CorePeripheryPredicate) {
  EXPECT_TRUE(two_block(10, 10, 0.3, 0.2, 0.1).is_core_periphery());
  EXPECT_FALSE(two_block(10, 10, 0.3, 0.1, 0.1).is_core_periphery());
  EXPECT_FALSE(two_block(10, 10, 0.3, 0.01, 0.3).is_core_periphery());
}

TEST(CpSettings, TableRow) {
  const SbmSpec spec = cp_sbm_settings_spec(5000, 0.004, 0.01);
  EXPECT_EQ(spec.block_sizes, (std::vector<std::size_t>{50, 4950}));
  EXPECT_DOUBLE_EQ(spec.p[0][0], 0.004);
  EXPECT_DOUBLE_EQ(spec.p[0][1], 0.002);
  EXPECT_DOUBLE_EQ(spec.p[1][1], 0.001);
}

TEST(CpSettings, FormulaSubstitution) {
  const SbmSpec spec = cp_sbm_settings_spec(1000, 0.02, 0.01);
  EXPECT_EQ(spec.block_sizes[0], 10u);
  EXPECT_DOUBLE_EQ(spec.p[0][1], 0.01);
}

TEST(CpSettings, BoundaryIsAnError) {
  EXPECT_THROW(cp_sbm_settings_spec(5000, 0.002, 0.01), InvalidParameter);
  EXPECT_THROW(cp_sbm_from_settings(5000, 0.002, 0.01, 1), InvalidParameter);
}

TEST(CpSettings, CoreSizeRounding) {
  EXPECT_EQ(core_size_from_alpha(1000, 0.0001), 1u);
  EXPECT_EQ(core_size_from_alpha(1000, 0.3), 300u);
  EXPECT_THROW(core_size_from_alpha(1000, 0.0), InvalidParameter);
}

TEST(CpSettings, BinaryTruthWithCoreFirst) {
  const GeneratedGraph g = cp_sbm_from_settings(500, 0.05, 0.1, 2);
  ASSERT_EQ(g.truth.size(), 500u);
  for (std::size_t v = 0; v < 500; ++v) EXPECT_EQ(g.truth[v], v < 50 ? 1 : 0);
  EXPECT_EQ(core_labels_from_blocks(NodeLabels{1, 2, 1, 2}), (NodeLabels{1, 0, 1, 0}));
}

}  // namespace
}  // namespace subsamp
