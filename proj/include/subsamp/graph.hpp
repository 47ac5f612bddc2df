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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace subsamp {

using NodeId = std::uint32_t;

/// Per-node integer labels: community ids 1..K, or core-periphery labels
/// in {0, 1} (1 = core).
using NodeLabels = std::vector<std::int32_t>;

struct Edge {
  NodeId u;
  NodeId v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes 0..n-1.
///
/// Stored as CSR with every neighbor list sorted ascending, plus the sorted
/// list of edges (u < v). Safe to share across threads once built.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n` nodes. Self-loops are dropped, duplicates and
  /// reversed pairs are merged. Endpoints must be < n.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Edges with u < v, sorted lexicographically.
  std::span<const Edge> edges() const { return edges_; }
  std::vector<std::size_t> degrees() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
};

/// Builds a graph from raw integer pairs. n is max id + 1, or n_hint when
/// that is larger. Throws InvalidInput on a negative id.
Graph from_edge_list(std::span<const std::pair<std::int64_t, std::int64_t>> pairs,
                     std::optional<std::size_t> n_hint = std::nullopt);

/// Induced sub-graph on `nodes`, which must be sorted ascending and distinct.
/// Local node i corresponds to nodes[i].
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

struct Component {
  Graph graph;
  /// original_ids[local] = node id in the input graph.
  std::vector<NodeId> original_ids;
};

/// Largest connected component, node ids re-densified in ascending original
/// order. Ties go to the component containing the smallest original id.
Component largest_connected_component(const Graph& g);

/// Connected component index for each node; components are numbered by
/// their smallest member.
std::vector<std::uint32_t> connected_components(const Graph& g);

// Text I/O. Edge lists: one "u v" pair per line, extra columns ignored,
// lines starting with '#' or '%' skipped, except a "# nodes N" header which
// raises the node count to N. Label files: "node_id label".

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n_hint = std::nullopt);
Graph read_edge_list(const std::filesystem::path& path,
                     std::optional<std::size_t> n_hint = std::nullopt);
void write_edge_list(std::ostream& out, const Graph& g);

/// Reads labels for nodes 0..n-1. Every node must be labelled exactly once.
NodeLabels read_labels(std::istream& in, std::size_t n);
NodeLabels read_labels(const std::filesystem::path& path, std::size_t n);
void write_labels(std::ostream& out, const NodeLabels& labels);

/// Relabels to 1..K in order of first appearance.
NodeLabels canonical_labels(std::span<const std::int32_t> labels);

}  // namespace subsamp
