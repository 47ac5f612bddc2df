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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "subsamp/graph.hpp"
#include "subsamp/rng.hpp"

namespace subsamp {

/// The seven sub-graph sampling schemes.
enum class Scheme {
  kRandomNode,          // RN
  kDegreeNode,          // DN
  kRandomEdge,          // RE
  kBreadthFirst,        // BFS
  kDepthFirst,          // DFS
  kRandomNodeNeighbor,  // RNN
  kRandomWalk,          // RW
};

inline constexpr std::array<Scheme, 7> kAllSchemes = {
    Scheme::kRandomNode,   Scheme::kDegreeNode,          Scheme::kRandomEdge, Scheme::kBreadthFirst,
    Scheme::kDepthFirst,   Scheme::kRandomNodeNeighbor,  Scheme::kRandomWalk,
};

/// Short upper-case tag ("RN", "DN", ...).
std::string_view scheme_name(Scheme scheme);
/// Case-insensitive inverse of scheme_name.
std::optional<Scheme> parse_scheme(std::string_view tag);

/// Result of a node-selection routine before the induction step.
struct NodeSample {
  /// Distinct parent node ids, in the order they were selected.
  std::vector<NodeId> nodes;
  /// True when the scheme ran out of structure (edges for RE, positive-degree
  /// nodes for DN) and the remainder was filled by uniform node draws.
  bool filled_uniformly = false;
};

/// Induced sub-graph with its local-to-parent id map. Local ids follow
/// ascending parent id.
struct SubGraph {
  Graph graph;
  std::vector<NodeId> parent_ids;
  bool filled_uniformly = false;
};

struct SamplerOptions {
  /// Random walk restarts after this many times `target` consecutive steps
  /// that add no new node.
  std::size_t rw_stall_factor = 50;
  /// Fixed first root / start node for BFS, DFS and RW (tests, tracing).
  std::optional<NodeId> start;
};

// Node-selection routines. All require 1 <= target <= n and return exactly
// `target` distinct nodes.

NodeSample sample_rn(const Graph& g, std::size_t target, Rng& rng);
/// Sequential degree-weighted draws without replacement. Throws InvalidInput
/// when every node has degree zero.
NodeSample sample_dn(const Graph& g, std::size_t target, Rng& rng);
NodeSample sample_re(const Graph& g, std::size_t target, Rng& rng);
NodeSample sample_bfs(const Graph& g, std::size_t target, Rng& rng,
                      const SamplerOptions& options = {});
NodeSample sample_dfs(const Graph& g, std::size_t target, Rng& rng,
                      const SamplerOptions& options = {});
NodeSample sample_rnn(const Graph& g, std::size_t target, Rng& rng);
NodeSample sample_rw(const Graph& g, std::size_t target, Rng& rng,
                     const SamplerOptions& options = {});

/// Dispatches to the scheme's node selection, without induction.
NodeSample select_nodes(const Graph& g, Scheme scheme, std::size_t target, Rng& rng,
                        const SamplerOptions& options = {});

/// Dispatches to the scheme's node selection and applies the induction step.
/// Throws InvalidParameter unless 1 <= target <= n.
SubGraph sample(const Graph& g, Scheme scheme, std::size_t target, Rng& rng,
                const SamplerOptions& options = {});
SubGraph sample(const Graph& g, Scheme scheme, std::size_t target, std::uint64_t seed,
                const SamplerOptions& options = {});

/// Sorts the node set and builds the induced sub-graph.
SubGraph induce(const Graph& g, NodeSample sample);

}  // namespace subsamp
