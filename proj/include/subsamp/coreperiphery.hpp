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
#include <vector>

#include "subsamp/graph.hpp"
#include "subsamp/metrics.hpp"
#include "subsamp/sampling.hpp"

namespace subsamp {

/// Borgatti-Everett core-periphery metric: Pearson correlation between the
/// upper triangle of the adjacency matrix and the ideal pattern in which a
/// pair is 1 iff at least one endpoint is core.
///
/// Computed in O(n + m) from pair-class counts. `core` holds 0/1 labels.
/// Throws UndefinedCorrelation when either upper triangle is constant
/// (no edges, complete graph, no core node, or at most one periphery node).
double be_metric(const Graph& g, std::span<const std::int32_t> core);

/// Pair-class counts behind be_metric.
BinaryPairCounts be_counts(const Graph& g, std::span<const std::int32_t> core);

/// Greedy maximization of be_metric.
///
/// Starts from the nodes whose degree is strictly above the median (or the
/// single highest-degree node if there are none) and applies steepest-ascent
/// single-node flips, each evaluated in O(1) from maintained counts, until no
/// flip increases the metric. Core sizes stay within [1, n-2] so the metric
/// stays defined. Exact ties (equal best flips, equal highest degrees) are
/// broken uniformly at random from `seed`.
///
/// Throws InvalidInput on an edgeless graph. A graph on which no labelling
/// has a defined metric (n < 3 or complete) yields a single highest-degree
/// node as core.
NodeLabels optimize_core_labels(const Graph& g, std::uint64_t seed);

struct CoreScore {
  std::vector<std::uint32_t> x;  // times each node was labelled core
  std::size_t b = 0;
  std::vector<double> c_hat;     // x / B
  std::size_t failed_samples = 0;  // sub-samples where the optimizer raised
};

struct CpOptions {
  double q = 0.1;
  std::size_t b = 100;
  Scheme scheme = Scheme::kRandomNode;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Divide-and-conquer core-periphery detection. Counts are divided by B, not
/// by the number of times a node was sampled. Sub-samples on which the
/// optimizer fails (e.g. edgeless) contribute nothing but still count in B.
CoreScore run_cp(const Graph& g, const CpOptions& options);

/// Per-sub-sample core sets (parent ids) for tracing; same draws as run_cp.
std::vector<std::vector<NodeId>> run_cp_trace(const Graph& g, const CpOptions& options);

struct SweepResult {
  NodeLabels labels;
  std::size_t core_size = 0;
  double be = 0.0;
};

/// Orders nodes by score descending (ties: higher degree, then lower id),
/// evaluates be_metric for every prefix core and returns the best prefix
/// (ties to the smaller core). Throws UndefinedCorrelation if no prefix has
/// a defined metric.
SweepResult binarize_by_sweep(const Graph& g, std::span<const double> scores);

}  // namespace subsamp
