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
#include <vector>

#include "subsamp/graph.hpp"

namespace subsamp {

/// K-block stochastic block model. Nodes of block 0 come first, then block 1
/// and so on. Edge (i, j) appears with probability sparsity * p[c_i][c_j].
struct SbmSpec {
  std::size_t n = 0;
  std::vector<std::size_t> block_sizes;
  std::vector<std::vector<double>> p;  // K x K, symmetric
  double sparsity = 1.0;

  /// Throws InvalidParameter on inconsistent sizes, asymmetric p, or
  /// probabilities outside [0, 1].
  void validate() const;
  /// Two blocks with p11 > p12 > p22.
  bool is_core_periphery() const;
};

struct GeneratedGraph {
  Graph graph;
  NodeLabels truth;
};

/// Samples the model. Truth labels are block indices starting at 1.
/// Uses geometric skipping within each block pair, O(n + m) expected time.
GeneratedGraph generate_sbm(const SbmSpec& spec, std::uint64_t seed);

/// Two-block spec with a core of k nodes (block 0).
SbmSpec cp_sbm_spec(std::size_t n, std::size_t k, double p11, double p12, double p22);

/// Core size used by the simulation settings: round(alpha * n), at least 1.
std::size_t core_size_from_alpha(std::size_t n, double alpha);

/// Simulation-setting CP-SBM: k = core_size_from_alpha(n, alpha),
/// p12 = p11 / 2, p22 = 0.001. Throws InvalidParameter unless
/// p11 > p12 > p22 and k < n.
SbmSpec cp_sbm_settings_spec(std::size_t n, double p11, double alpha);

/// Generates cp_sbm_settings_spec(n, p11, alpha). Truth is 1 for core
/// nodes and 0 for periphery nodes.
GeneratedGraph cp_sbm_from_settings(std::size_t n, double p11, double alpha, std::uint64_t seed);

/// Maps block labels (core block = 1) to 0/1 core indicators.
NodeLabels core_labels_from_blocks(const NodeLabels& blocks);

}  // namespace subsamp
