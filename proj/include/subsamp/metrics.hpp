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
#include <map>
#include <span>
#include <string>

#include "subsamp/community.hpp"
#include "subsamp/graph.hpp"

namespace subsamp {

/// Adjusted Rand index from the contingency table. Returns 1 when both
/// partitions are trivial (all singletons or one block).
double ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

/// Mann-Whitney AUC: probability that a random positive (truth == 1) scores
/// above a random negative, ties counting 1/2.
double auc(std::span<const double> scores, std::span<const std::int32_t> truth);

/// Newman modularity of a partition. Throws InvalidInput on an edgeless graph.
double modularity(const Graph& g, std::span<const std::int32_t> labels);

/// |A ∩ B| / |A ∪ B|. Duplicates are ignored. Throws if both are empty.
double jaccard(std::span<const NodeId> a, std::span<const NodeId> b);

/// (1/n) ||c_hat - c_star||^2.
double misclustering_cp(std::span<const double> c_hat, std::span<const std::int32_t> c_star);

/// (1/n^2) ||C_hat - Z Z^T||_F^2 with unit diagonals on both sides.
double misclustering_pace(const ClusteringMatrixEstimate& estimate, std::span<const std::int32_t> truth);

/// Sufficient statistics for the Pearson correlation of two binary vectors
/// of length `length`.
struct BinaryPairCounts {
  std::uint64_t length = 0;
  std::uint64_t ones_x = 0;
  std::uint64_t ones_y = 0;
  std::uint64_t ones_both = 0;
};

/// Pearson correlation of two 0/1 vectors from their counts. The numerator
/// is exact integer arithmetic. Throws UndefinedCorrelation if either vector
/// is constant.
double binary_pearson(const BinaryPairCounts& counts);

/// Plain Pearson correlation. Throws UndefinedCorrelation on constant input.
double pearson(std::span<const double> x, std::span<const double> y);

/// Named metric values plus the run that produced them.
struct ScoreReport {
  std::map<std::string, double> values;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t b = 0;
  double q = 0.0;
  std::string scheme;
  std::uint64_t seed = 0;
};

}  // namespace subsamp
