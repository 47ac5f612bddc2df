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


#include "subsamp/theory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "subsamp/error.hpp"
#include "subsamp/generators.hpp"

namespace subsamp {
namespace {

CpSbmParams params(std::size_t n, std::size_t k, double p11, double p12, double p22, double q) {
  return CpSbmParams{n, k, p11, p12, p22, q};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Xi, RandomNodeIsOne) {
  EXPECT_EQ(xi(Scheme::kRandomNode, params(100, 10, 0.3, 0.2, 0.1, 0.3)), 1.0);
  EXPECT_EQ(xi_limit(Scheme::kRandomNode, params(100, 10, 0.3, 0.2, 0.1, 0.3)), 1.0);
}

TEST(Xi, DegreeNodeHandSubstitution) {
  // n{(k-1)p11 + (n-k)p12} = 4 * 2 = 8; denominator 2 + 4 + 0.2 = 6.2.
  EXPECT_NEAR(xi(Scheme::kDegreeNode, params(4, 2, 1.0, 0.5, 0.1, 0.5)), 8.0 / 6.2, 1e-12);
}

TEST(Xi, RandomNodeNeighborHandSubstitution) {
  // {1 + 1 + 1} / {1 + 0.5 * 2 + 0.5 * (1 + 0.1)} = 3 / 2.55.
  EXPECT_NEAR(xi(Scheme::kRandomNodeNeighbor, params(4, 2, 1.0, 0.5, 0.1, 0.5)), 3.0 / 2.55, 1e-12);
}

TEST(Xi, DegreeNodeAndRandomEdgeAreBitIdentical) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 10 + rng.below(5000);
    const std::size_t k = 1 + rng.below(n - 1);
    const double p22 = 0.001 + 0.1 * rng.uniform();
    const double p12 = p22 + 0.1 * rng.uniform();
    const double p11 = p12 + 0.1 * rng.uniform();
    const auto p = params(n, k, p11, p12, p22, 0.1);
    EXPECT_TRUE(same_bits(xi(Scheme::kDegreeNode, p), xi(Scheme::kRandomEdge, p)));
  }
}

TEST(Xi, OrderingOverParameterGrid) {
  Rng rng(2);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n = 20 + rng.below(10000);
    const std::size_t k = 2 + rng.below(n / 2);
    const double p22 = 0.0005 + 0.05 * rng.uniform();
    const double p12 = p22 * (1.0 + 0.01 + 3.0 * rng.uniform());
    const double p11 = p12 * (1.0 + 0.01 + 3.0 * rng.uniform());
    if (p11 > 1.0) continue;
    const auto p = params(n, k, p11, p12, p22, 0.1);
    ASSERT_TRUE(p.is_core_periphery());
    const double dn = xi(Scheme::kDegreeNode, p);
    EXPECT_GT(dn, 1.0);
    EXPECT_GT(dn, xi(Scheme::kRandomNodeNeighbor, p));
    ++checked;
  }
}

TEST(XiLimit, Values) {
  const auto p = params(5000, 50, 0.004, 0.002, 0.001, 0.1);
  EXPECT_DOUBLE_EQ(xi_limit(Scheme::kDegreeNode, p), 2.0);
  EXPECT_DOUBLE_EQ(xi_limit(Scheme::kRandomEdge, p), 2.0);
  EXPECT_DOUBLE_EQ(xi_limit(Scheme::kRandomNodeNeighbor, p), 0.002 / (0.01 * 0.002 + 0.001));
  EXPECT_THROW(xi_limit(Scheme::kRandomWalk, p), UnsupportedScheme);
  EXPECT_THROW(xi(Scheme::kBreadthFirst, p), UnsupportedScheme);
  EXPECT_THROW(xi(Scheme::kDepthFirst, p), UnsupportedScheme);
}

TEST(XiLimit, RandomNodeNeighborApproachesRatioAsAlphaVanishes) {
  double prev = 1e300;
  for (std::size_t k : {1000, 100, 10, 1}) {
    const auto p = params(100000, k, 0.04, 0.02, 0.01, 0.1);
    const double gap = std::abs(xi_limit(Scheme::kRandomNodeNeighbor, p) - 2.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(XiLimit, FiniteValuesConvergeMonotonicallyAsCoreFractionVanishes) {
  for (Scheme s : {Scheme::kDegreeNode, Scheme::kRandomEdge, Scheme::kRandomNodeNeighbor}) {
    for (bool sqrt_core : {false, true}) {
      double prev = 1e300;
      for (std::size_t n : {100, 1000, 10000, 100000}) {
        const std::size_t k = sqrt_core ? static_cast<std::size_t>(std::llround(std::sqrt(n))) : 10;
        const auto p = params(n, k, 0.04, 0.02, 0.01, 0.1);
        const double gap = std::abs(xi(s, p) - xi_limit(s, p));
        EXPECT_LT(gap, prev) << scheme_name(s) << " n=" << n << " k=" << k;
        prev = gap;
      }
    }
  }
}

TEST(XiLimit, FixedCoreFractionHasAlphaDependentLimit) {
  const double a = 0.05, p11 = 0.04, p12 = 0.02, p22 = 0.01;
  const double limit = (a * p11 + (1 - a) * p12) / (a * a * p11 + 2 * a * (1 - a) * p12 + (1 - a) * (1 - a) * p22);
  for (Scheme s : {Scheme::kDegreeNode, Scheme::kRandomNodeNeighbor}) {
    const auto p = params(1000000, 50000, p11, p12, p22, 0.1);
    EXPECT_NEAR(xi(s, p), limit, 1e-4) << scheme_name(s);
    EXPECT_GT(std::abs(xi(s, p) - xi_limit(s, p)), 0.05) << scheme_name(s);
  }
}

TEST(UncoveredCore, Examples) {
  const auto p = params(100, 10, 0.3, 0.2, 0.1, 0.3);
  EXPECT_NEAR(expected_uncovered_core_fraction(Scheme::kRandomNode, p), 0.07, 1e-12);
  auto full = p;
  full.q = 1.0;
  EXPECT_EQ(expected_uncovered_core_fraction(Scheme::kRandomNode, full), 0.0);
  EXPECT_LT(expected_uncovered_core_fraction(Scheme::kDegreeNode, p),
            expected_uncovered_core_fraction(Scheme::kRandomNode, p));
  EXPECT_THROW(expected_uncovered_core_fraction(Scheme::kBreadthFirst, p), UnsupportedScheme);
}

TEST(UncoveredCore, ClampedAtZero) {
  const auto p = params(1000, 10, 0.5, 0.1, 0.001, 0.9);
  ASSERT_GT(0.9 * xi(Scheme::kDegreeNode, p), 1.0);
  EXPECT_EQ(expected_uncovered_core_fraction(Scheme::kDegreeNode, p), 0.0);
}

TEST(UncoveredCore, MonotoneInQ) {
  for (Scheme s : {Scheme::kRandomNode, Scheme::kDegreeNode, Scheme::kRandomEdge, Scheme::kRandomNodeNeighbor,
                   Scheme::kRandomWalk}) {
    double prev = 1e300;
    for (int i = 1; i <= 100; ++i) {
      const double v = expected_uncovered_core_fraction(s, params(1000, 50, 0.04, 0.02, 0.01, i / 100.0));
      EXPECT_LE(v, prev) << scheme_name(s) << " q=" << i / 100.0;
      prev = v;
    }
  }
}

TEST(RandomWalk, TransitionRowsSumToOne) {
  const RwRecurrenceState t = rw_transition(params(500, 25, 0.04, 0.02, 0.01, 0.2));
  EXPECT_NEAR(t.alpha + t.beta, 1.0, 1e-15);
  EXPECT_NEAR(t.gamma + t.delta, 1.0, 1e-15);
  EXPECT_THROW(rw_transition(params(500, 25, 0, 0, 0, 0.2)), InvalidParameter);
}

TEST(RandomWalk, ErdosRenyiIsLinear) {
  const auto p = params(300, 17, 0.05, 0.05, 0.05, 0.2);
  for (std::size_t l = 1; l <= 200; ++l) {
    EXPECT_NEAR(rw_expected_core_nodes(p, l), l * 17.0 / 300.0, 1e-10);
  }
}

TEST(RandomWalk, InitialConditions) {
  const auto p = params(500, 25, 0.04, 0.02, 0.01, 0.2);
  EXPECT_DOUBLE_EQ(rw_expected_core_nodes(p, 1), 25.0 / 500.0);
  EXPECT_THROW(rw_expected_core_nodes(p, 0), InvalidParameter);
}

TEST(RandomWalk, MatrixFormAgreesWithIteration) {
  for (const auto& p : {params(500, 25, 0.04, 0.02, 0.01, 0.2), params(5000, 50, 0.004, 0.002, 0.001, 0.1),
                        params(100, 30, 0.9, 0.3, 0.01, 0.5)}) {
    for (std::size_t l = 1; l <= 200; ++l) {
      EXPECT_NEAR(rw_expected_core_nodes_matrix(p, l), rw_expected_core_nodes(p, l), 1e-10) << "l=" << l;
    }
  }
}

TEST(RandomWalk, EffectiveXi) {
  const auto p = params(500, 25, 0.04, 0.02, 0.01, 0.2);
  EXPECT_DOUBLE_EQ(xi(Scheme::kRandomWalk, p), rw_expected_core_nodes(p, 100) / (0.2 * 25.0));
}

TEST(Params, Validation) {
  EXPECT_THROW(params(10, 0, 0.3, 0.2, 0.1, 0.5).validate(), InvalidParameter);
  EXPECT_THROW(params(10, 10, 0.3, 0.2, 0.1, 0.5).validate(), InvalidParameter);
  EXPECT_THROW(params(10, 2, 0.3, 0.2, 0.1, 0.0).validate(), InvalidParameter);
  EXPECT_THROW(params(10, 2, 1.3, 0.2, 0.1, 0.5).validate(), InvalidParameter);
  EXPECT_NO_THROW(params(10, 2, 0.1, 0.1, 0.1, 0.5).validate());
  EXPECT_FALSE(params(10, 2, 0.1, 0.1, 0.1, 0.5).is_core_periphery());
}

// Counting sampled core nodes with multiplicity, the closed forms hold up to
// the ratio-of-expectations error, which is far below the Monte Carlo noise.
double draw_mean(Scheme scheme, const CpSbmParams& p, std::size_t reps, double* se) {
  double mean = 0.0, m2 = 0.0;
  const std::size_t qn = static_cast<std::size_t>(std::llround(p.q * static_cast<double>(p.n)));
  for (std::size_t r = 0; r < reps; ++r) {
    const GeneratedGraph g = generate_sbm(cp_sbm_spec(p.n, p.k, p.p11, p.p12, p.p22), 1000 + r);
    Rng rng(77, r);
    double x = 0.0;
    switch (scheme) {
      case Scheme::kDegreeNode: x = oracle::draws_degree_node(g.graph, p.k, qn, rng); break;
      case Scheme::kRandomEdge: x = oracle::draws_random_edge(g.graph, p.k, qn, rng); break;
      case Scheme::kRandomNodeNeighbor: x = oracle::draws_random_node_neighbor(g.graph, p.k, qn, rng); break;
      default: x = oracle::draws_random_walk(g.graph, p.k, qn, rng); break;
    }
    const double d = x - mean;
    mean += d / static_cast<double>(r + 1);
    m2 += d * (x - mean);
  }
  *se = std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps));
  return mean;
}

TEST(DrawLevel, ClosedFormsMatchMultiplicityCounts) {
  const auto p = params(500, 25, 0.04, 0.02, 0.01, 0.2);
  for (Scheme s : {Scheme::kDegreeNode, Scheme::kRandomEdge, Scheme::kRandomNodeNeighbor, Scheme::kRandomWalk}) {
    double se = 0.0;
    const double mean = draw_mean(s, p, 1000, &se);
    const double expected = p.q * static_cast<double>(p.k) * xi(s, p);
    EXPECT_LE(std::abs(mean - expected), 4.0 * se) << scheme_name(s) << " mean " << mean << " expected " << expected;
  }
}

TEST(MonteCarlo, RandomNodeMeanIsQk) {
  const McEstimate est = mc_expected_core_sampled(params(500, 25, 0.04, 0.02, 0.01, 0.2), Scheme::kRandomNode, 2000, 3);
  EXPECT_EQ(est.reps, 2000u);
  EXPECT_LE(std::abs(est.mean - 5.0), 3.0 * est.std_error);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeEstimate) {
  const auto p = params(300, 15, 0.08, 0.04, 0.02, 0.2);
  const McEstimate one = mc_expected_core_sampled(p, Scheme::kRandomEdge, 40, 9, 1);
  const McEstimate four = mc_expected_core_sampled(p, Scheme::kRandomEdge, 40, 9, 4);
  EXPECT_TRUE(same_bits(one.mean, four.mean));
  EXPECT_TRUE(same_bits(one.std_error, four.std_error));
  EXPECT_THROW(mc_expected_core_sampled(p, Scheme::kRandomEdge, 0, 9), InvalidParameter);
}

}  // namespace
}  // namespace subsamp
