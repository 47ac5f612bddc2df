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

#include "subsamp/community.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "subsamp/error.hpp"
#include "subsamp/generators.hpp"
#include "subsamp/metrics.hpp"

namespace subsamp {
namespace {

Graph two_triangles() { return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

Graph clique_pair(std::size_t size) {
  std::vector<Edge> e;
  for (std::size_t block = 0; block < 2; ++block) {
    const auto off = static_cast<NodeId>(block * size);
    for (NodeId i = 0; i < size; ++i) {
      for (NodeId j = i + 1; j < size; ++j) e.push_back({off + i, off + j});
    }
  }
  e.push_back({0, static_cast<NodeId>(size)});
  return Graph(2 * size, e);
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.push_back({i, j});
    }
  }
  return Graph(n, edges);
}

TEST(Greedy, DisjointTriangles) {
  EXPECT_EQ(detect_communities_greedy(two_triangles(), 2), (NodeLabels{1, 1, 1, 2, 2, 2}));
}

TEST(Greedy, CompleteGraphOneCluster) {
  const Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(detect_communities_greedy(k4, 1), (NodeLabels{1, 1, 1, 1}));
}

TEST(Greedy, CliquePairMatchesBruteForceOptimum) {
  const Graph g = clique_pair(5);
  const auto [best_q, best_labels] = oracle::best_bipartition(g);
  const NodeLabels labels = detect_communities_greedy(g, 2);
  EXPECT_DOUBLE_EQ(ari(labels, best_labels), 1.0);
  EXPECT_NEAR(oracle::modularity(g, labels), best_q, 1e-12);
}

TEST(Greedy, ExactlyKClustersEvenWhenDisconnected) {
  const Graph g(8, {{0, 1}, {2, 3}});
  for (std::size_t k = 1; k <= 8; ++k) {
    const NodeLabels labels = detect_communities_greedy(g, k);
    EXPECT_EQ(std::set<std::int32_t>(labels.begin(), labels.end()).size(), k);
    EXPECT_EQ(*std::max_element(labels.begin(), labels.end()), static_cast<std::int32_t>(k));
  }
}

TEST(Greedy, RejectsBadK) {
  EXPECT_THROW(detect_communities_greedy(two_triangles(), 0), InvalidParameter);
  EXPECT_THROW(detect_communities_greedy(two_triangles(), 7), InvalidParameter);
}

TEST(Accumulator, SameAndDifferentLabels) {
  ClusterAccumulator acc(6);
  const std::vector<NodeId> parents{2, 5};
  acc.add(parents, NodeLabels{1, 1});
  EXPECT_EQ(acc.co_count(2, 5), 1u);
  EXPECT_EQ(acc.same_count(5, 2), 1u);
  acc.add(parents, NodeLabels{1, 2});
  EXPECT_EQ(acc.co_count(2, 5), 2u);
  EXPECT_EQ(acc.same_count(2, 5), 1u);

  ClusterAccumulator other(6);
  other.add(parents, NodeLabels{2, 1});
  EXPECT_EQ(other.co_count(2, 5), 1u);
  EXPECT_EQ(other.same_count(2, 5), 0u);
}

TEST(Accumulator, LengthMismatch) {
  ClusterAccumulator acc(4);
  const std::vector<NodeId> parents{0, 1, 2};
  EXPECT_THROW(acc.add(parents, NodeLabels{1, 1}), InvalidParameter);
}

TEST(Accumulator, LabelPermutationAndMergeOrderInvariance) {
  Rng rng(3);
  ClusterAccumulator a(20), b(20), c(20);
  std::vector<ClusterAccumulator> parts;
  for (int s = 0; s < 6; ++s) {
    std::vector<NodeId> nodes(20);
    std::iota(nodes.begin(), nodes.end(), 0);
    rng.choose_front(std::span<NodeId>(nodes), 8);
    nodes.resize(8);
    std::sort(nodes.begin(), nodes.end());
    NodeLabels labels(8), renamed(8);
    for (auto& l : labels) l = static_cast<std::int32_t>(1 + rng.below(3));
    for (std::size_t i = 0; i < 8; ++i) renamed[i] = 10 - labels[i];
    a.add(nodes, labels);
    b.add(nodes, renamed);
    ClusterAccumulator part(20);
    part.add(nodes, labels);
    parts.push_back(part);
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) c.merge(*it);
  const auto ea = a.entries(), eb = b.entries(), ec = c.entries();
  ASSERT_EQ(ea.size(), eb.size());
  ASSERT_EQ(ea.size(), ec.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_EQ(ea[i].counts.co, eb[i].counts.co);
    EXPECT_EQ(ea[i].counts.same, eb[i].counts.same);
    EXPECT_EQ(ea[i].counts.co, ec[i].counts.co);
    EXPECT_EQ(ea[i].counts.same, ec[i].counts.same);
    EXPECT_LE(ea[i].counts.same, ea[i].counts.co);
  }
}

// Builds an accumulator whose pairs carry the given co-counts.
ClusterAccumulator with_counts(const std::vector<std::uint32_t>& counts) {
  ClusterAccumulator acc(counts.size() + 1);
  for (std::size_t p = 0; p < counts.size(); ++p) {
    const std::vector<NodeId> parents{0, static_cast<NodeId>(p + 1)};
    for (std::uint32_t t = 0; t < counts[p]; ++t) acc.add(parents, NodeLabels{1, 1});
  }
  return acc;
}

TEST(ChooseBeta, NearestRank) {
  EXPECT_DOUBLE_EQ(choose_beta(with_counts({1, 2, 3, 4, 5})), 2.0);
  EXPECT_DOUBLE_EQ(choose_beta(with_counts({4, 4, 4, 4})), 4.0);
  EXPECT_DOUBLE_EQ(choose_beta(with_counts({7})), 7.0);
  EXPECT_THROW(choose_beta(ClusterAccumulator(3)), InvalidParameter);
}

TEST(Combine, ThresholdAndRatio) {
  ClusterAccumulator acc(4);
  auto add_times = [&](NodeId i, NodeId j, int co, int same) {
    const std::vector<NodeId> parents{i, j};
    for (int t = 0; t < co; ++t) acc.add(parents, t < same ? NodeLabels{1, 1} : NodeLabels{1, 2});
  };
  add_times(0, 1, 10, 10);
  add_times(0, 2, 2, 2);
  add_times(0, 3, 8, 6);
  const ClusteringMatrixEstimate est = combine(acc, 3.0);
  EXPECT_DOUBLE_EQ(est.value(0, 1), 1.0);
  EXPECT_FALSE(est.contains(0, 2));
  EXPECT_DOUBLE_EQ(est.value(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(est.value(3, 0), 0.75);
  EXPECT_DOUBLE_EQ(est.value(2, 2), 1.0);
  for (const auto& e : est.entries()) {
    EXPECT_GE(e.value, 0.0);
    EXPECT_LE(e.value, 1.0);
  }
}

TEST(Combine, MatchesDenseReference) {
  Rng rng(11);
  for (int instance = 0; instance < 30; ++instance) {
    const std::size_t n = 4 + rng.below(9);
    const Graph g = random_graph(n, 0.4, rng);
    const std::size_t b_count = 1 + rng.below(5);
    ClusterAccumulator acc(n);
    std::vector<oracle::RecordedSample> recorded;
    for (std::size_t b = 0; b < b_count; ++b) {
      Rng sub_rng(instance, b);
      const SubGraph sub = sample(g, Scheme::kRandomNode, std::max<std::size_t>(2, n / 2), sub_rng);
      const NodeLabels labels = detect_communities_greedy(sub.graph, 2);
      acc.add(sub, labels);
      recorded.push_back({sub.parent_ids, labels});
    }
    const auto dense = oracle::dense_combine(n, recorded);
    EXPECT_EQ(choose_beta(acc), dense.percentile);
    const ClusteringMatrixEstimate est = combine(acc, dense.percentile);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        EXPECT_EQ(acc.co_count(i, j), dense.co[i][j]);
        EXPECT_EQ(acc.same_count(i, j), dense.same[i][j]);
        const bool expected = static_cast<double>(dense.co[i][j]) > dense.percentile;
        EXPECT_EQ(est.contains(i, j), expected);
        if (expected) EXPECT_EQ(est.value(i, j), static_cast<double>(dense.same[i][j]) / dense.co[i][j]);
      }
    }
  }
}

ClusteringMatrixEstimate from_dense(const std::vector<std::vector<double>>& m) {
  std::vector<ClusteringMatrixEstimate::Entry> entries;
  for (NodeId i = 0; i < m.size(); ++i) {
    for (NodeId j = i + 1; j < m.size(); ++j) {
      if (m[i][j] != 0.0) entries.push_back({i, j, m[i][j]});
    }
  }
  return ClusteringMatrixEstimate(m.size(), 0.0, entries);
}

TEST(KMeans, PerfectBlocks) {
  std::vector<std::vector<double>> m(8, std::vector<double>(8, 0.0));
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) m[i][j] = (i < 4) == (j < 4) ? 1.0 : 0.0;
  }
  EXPECT_EQ(extract_labels_kmeans(from_dense(m), 2, 1), (NodeLabels{1, 1, 1, 1, 2, 2, 2, 2}));
}

TEST(KMeans, AllOnesSingleCluster) {
  std::vector<std::vector<double>> m(5, std::vector<double>(5, 1.0));
  EXPECT_EQ(extract_labels_kmeans(from_dense(m), 1, 1), (NodeLabels{1, 1, 1, 1, 1}));
}

TEST(KMeans, RejectsBadK) {
  std::vector<std::vector<double>> m(3, std::vector<double>(3, 1.0));
  EXPECT_THROW(extract_labels_kmeans(from_dense(m), 0, 1), InvalidParameter);
  EXPECT_THROW(extract_labels_kmeans(from_dense(m), 4, 1), InvalidParameter);
}

TEST(KMeans, NoisyBlocksMatchBruteForceTwoMeans) {
  Rng rng(5);
  for (int instance = 0; instance < 5; ++instance) {
    const std::size_t n = 12;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
    NodeLabels blocks(n);
    for (std::size_t i = 0; i < n; ++i) blocks[i] = i % 2 == 0 ? 1 : 2;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double base = blocks[i] == blocks[j] ? 0.9 : 0.1;
        m[i][j] = m[j][i] = base + (rng.uniform() - 0.5) * 0.1;
      }
    }
    const NodeLabels labels = extract_labels_kmeans(from_dense(m), 2, 100 + instance);
    EXPECT_DOUBLE_EQ(ari(labels, blocks), 1.0);
    const auto [wcss, brute] = oracle::best_two_means(m);
    EXPECT_DOUBLE_EQ(ari(labels, brute), 1.0);
    const KMeansResult res = kmeans_rows(estimate_rows(from_dense(m)), 2, 100 + instance);
    EXPECT_NEAR(res.wcss, wcss, 1e-9);
  }
}

TEST(KMeans, NodePermutationEquivariance) {
  Rng rng(6);
  const std::size_t n = 30;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double base = (i % 3) == (j % 3) ? 0.8 : 0.15;
      m[i][j] = m[j][i] = base + (rng.uniform() - 0.5) * 0.2;
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<std::size_t>(perm));
  std::vector<std::vector<double>> pm(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pm[i][j] = m[perm[i]][perm[j]];
  }
  const NodeLabels a = extract_labels_kmeans(from_dense(m), 3, 9);
  const NodeLabels b = extract_labels_kmeans(from_dense(pm), 3, 9);
  NodeLabels a_permuted(n);
  for (std::size_t i = 0; i < n; ++i) a_permuted[i] = a[perm[i]];
  EXPECT_DOUBLE_EQ(ari(a_permuted, b), 1.0);
}

TEST(KMeans, DeterministicGivenSeed) {
  Rng rng(7);
  std::vector<std::vector<double>> m(20, std::vector<double>(20, 1.0));
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = i + 1; j < 20; ++j) m[i][j] = m[j][i] = rng.uniform();
  }
  EXPECT_EQ(extract_labels_kmeans(from_dense(m), 3, 4), extract_labels_kmeans(from_dense(m), 3, 4));
}

SbmSpec planted(std::size_t n, double p_in, double p_out) {
  SbmSpec spec;
  spec.n = n;
  spec.block_sizes = {n / 2, n - n / 2};
  spec.p = {{p_in, p_out}, {p_out, p_in}};
  return spec;
}

TEST(RunPace, PlantedTwoBlockModel) {
  const GeneratedGraph gen = generate_sbm(planted(500, 0.2, 0.01), 21);
  EXPECT_GE(ari(detect_communities_greedy(gen.graph, 2), gen.truth), 0.9);
  PaceOptions opts;
  opts.k = 2;
  opts.q = 0.25;
  opts.b = 200;
  opts.seed = 3;
  const PaceResult res = run_pace(gen.graph, opts);
  EXPECT_GE(ari(res.labels, gen.truth), 0.9);
  EXPECT_EQ(res.diagnostics.target, 125u);
  EXPECT_GE(res.diagnostics.fraction_below_beta, 0.0);
  EXPECT_LE(res.diagnostics.fraction_below_beta, 1.0);
}

TEST(RunPace, FullSingleSampleReproducesBaseDetector) {
  const GeneratedGraph gen = generate_sbm(planted(60, 0.3, 0.05), 4);
  PaceOptions opts;
  opts.k = 2;
  opts.q = 1.0;
  opts.b = 1;
  const PaceResult res = run_pace(gen.graph, opts);
  EXPECT_DOUBLE_EQ(ari(res.labels, detect_communities_greedy(gen.graph, 2)), 1.0);
}

TEST(RunPace, WorkerCountDoesNotChangeResult) {
  const GeneratedGraph gen = generate_sbm(planted(120, 0.2, 0.02), 8);
  PaceOptions opts;
  opts.k = 2;
  opts.q = 0.3;
  opts.b = 40;
  opts.scheme = Scheme::kRandomWalk;
  const PaceResult one = run_pace(gen.graph, opts);
  opts.workers = 4;
  const PaceResult four = run_pace(gen.graph, opts);
  EXPECT_EQ(one.labels, four.labels);
  ASSERT_EQ(one.estimate.entries().size(), four.estimate.entries().size());
}

TEST(RunPace, RejectsBadParameters) {
  const Graph g = two_triangles();
  PaceOptions opts;
  opts.b = 0;
  EXPECT_THROW(run_pace(g, opts), InvalidParameter);
  opts.b = 1;
  opts.q = 0.0;
  EXPECT_THROW(run_pace(g, opts), InvalidParameter);
  opts.q = 0.1;  // round(0.6) = 1 node, below the minimum of 2
  EXPECT_THROW(run_pace(g, opts), InvalidParameter);
}

}  // namespace
}  // namespace subsamp
