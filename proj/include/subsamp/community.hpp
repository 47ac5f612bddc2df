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

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "subsamp/graph.hpp"
#include "subsamp/sampling.hpp"

namespace subsamp {

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore
/// merge order) cut at exactly K clusters.
///
/// Merges always take the pair with the largest modularity gain, computed in
/// exact integer arithmetic; ties go to the lexicographically smallest pair of
/// cluster representatives. Once no adjacent pair remains (disconnected
/// graphs), non-adjacent pairs are merged by the same rule, so every K in
/// [1, n] is reachable. Labels are 1..K in order of first appearance.
/// Throws InvalidParameter if K == 0 or K > n.
NodeLabels detect_communities_greedy(const Graph& g, std::size_t k);

/// Pairwise co-sampling counts over a set of sub-samples.
///
/// For parent pair (i, j), i < j: co_count is the number of sub-samples that
/// contained both, same_count the number of those that put them in the same
/// community.
class ClusterAccumulator {
 public:
  struct Counts {
    std::uint32_t co = 0;
    std::uint32_t same = 0;
  };
  struct Entry {
    NodeId i;
    NodeId j;
    Counts counts;
  };

  explicit ClusterAccumulator(std::size_t n) : n_(n) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t num_pairs() const { return counts_.size(); }

  /// Adds one sub-sample. labels[u] is the community of local node u.
  void add(std::span<const NodeId> parent_ids, std::span<const std::int32_t> labels);
  void add(const SubGraph& sub, std::span<const std::int32_t> labels) {
    add(sub.parent_ids, labels);
  }
  /// Adds every count of `other`. Order of merges does not matter.
  void merge(const ClusterAccumulator& other);

  Counts counts(NodeId i, NodeId j) const;
  std::uint32_t co_count(NodeId i, NodeId j) const { return counts(i, j).co; }
  std::uint32_t same_count(NodeId i, NodeId j) const { return counts(i, j).same; }

  /// All pairs with a positive co-count, sorted by (i, j).
  std::vector<Entry> entries() const;

 private:
  std::uint64_t key(NodeId i, NodeId j) const;

  std::size_t n_;
  std::unordered_map<std::uint64_t, Counts> counts_;
};

/// Nearest-rank 40th percentile of the positive co-counts.
/// Throws InvalidParameter when the accumulator is empty.
double choose_beta(const ClusterAccumulator& acc);

/// Sparse estimate of the clustering matrix. Pairs that were not co-sampled
/// more than `beta` times are absent and read as 0; the diagonal reads as 1.
class ClusteringMatrixEstimate {
 public:
  struct Entry {
    NodeId i;  // i < j
    NodeId j;
    double value;
  };

  ClusteringMatrixEstimate(std::size_t n, double beta, std::vector<Entry> entries);

  std::size_t num_nodes() const { return n_; }
  double beta() const { return beta_; }
  std::span<const Entry> entries() const { return entries_; }
  bool contains(NodeId i, NodeId j) const;
  double value(NodeId i, NodeId j) const;

 private:
  const Entry* find(NodeId i, NodeId j) const;

  std::size_t n_;
  double beta_;
  std::vector<Entry> entries_;  // sorted by (i, j)
};

/// Thresholded co-assignment ratio same/co for every pair with co > beta.
ClusteringMatrixEstimate combine(const ClusterAccumulator& acc, double beta);

/// Symmetric sparse matrix in CSR form (rows sorted by column).
struct SparseRows {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> columns;
  std::vector<double> values;

  std::size_t row_size(std::size_t r) const { return offsets[r + 1] - offsets[r]; }
};

/// Rows of the estimate with unit diagonal.
SparseRows estimate_rows(const ClusteringMatrixEstimate& est);

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
};

struct KMeansResult {
  NodeLabels labels;  // 1..K, first-appearance order
  double wcss = 0.0;
  std::size_t best_restart = 0;
};

/// k-means with k-means++ seeding on the rows of a sparse matrix. Best of
/// `restarts` runs by within-cluster sum of squares, ties to the lowest run.
KMeansResult kmeans_rows(const SparseRows& rows, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& options = {});

/// k-means on the rows of the estimate. Throws InvalidParameter when K > n
/// or K == 0.
NodeLabels extract_labels_kmeans(const ClusteringMatrixEstimate& est, std::size_t k,
                                 std::uint64_t seed, const KMeansOptions& options = {});

struct PaceOptions {
  std::size_t k = 2;
  double q = 0.1;
  std::size_t b = 100;
  Scheme scheme = Scheme::kRandomNode;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  KMeansOptions kmeans;
};

struct PaceDiagnostics {
  std::size_t target = 0;  // nodes per sub-sample
  double beta = 0.0;       // threshold applied
  double percentile_beta = 0.0;  // 40th percentile before the degeneracy guard
  std::uint32_t min_co_count = 0;     // over all n(n-1)/2 pairs
  double median_co_count = 0.0;       // over all n(n-1)/2 pairs
  double fraction_below_beta = 0.0;   // pairs with N_ij <= beta
  std::size_t estimate_entries = 0;
  std::size_t filled_samples = 0;     // sub-samples that needed uniform fill
};

struct PaceResult {
  NodeLabels labels;
  ClusteringMatrixEstimate estimate;
  PaceDiagnostics diagnostics;
};

/// Full divide-and-conquer community pipeline: B sub-samples, greedy
/// detection on each, co-assignment accumulation, thresholding and k-means.
///
/// Sub-sample b draws from Rng(seed, b), so the result does not depend on
/// `workers`. The sub-sample size is round(q n) and must be at least 2.
/// When the 40th percentile leaves no pair above it (for instance B = 1),
/// the threshold drops to max(N_ij) - 1 so the estimate is not empty.
PaceResult run_pace(const Graph& g, const PaceOptions& options);

/// round(q * n), validated to lie in [2, n] (community) or [1, n].
std::size_t subsample_target(std::size_t n, double q, std::size_t minimum);

}  // namespace subsamp
