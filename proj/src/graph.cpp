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

#include "subsamp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "subsamp/error.hpp"

namespace subsamp {

Graph::Graph(std::size_t n, std::vector<Edge> edges) {
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInput("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Sorted (u, v) order fills each list with smaller neighbors first, then
  // larger ones, both ascending.
  for (const Edge& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(num_nodes());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = degree(static_cast<NodeId>(i));
  return d;
}

Graph from_edge_list(std::span<const std::pair<std::int64_t, std::int64_t>> pairs,
                     std::optional<std::size_t> n_hint) {
  std::int64_t max_id = -1;
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0) throw InvalidInput("negative node id in edge list");
    if (a > std::numeric_limits<NodeId>::max() - 1 || b > std::numeric_limits<NodeId>::max() - 1) {
      throw InvalidInput("node id too large");
    }
    max_id = std::max({max_id, a, b});
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  std::size_t n = static_cast<std::size_t>(max_id + 1);
  if (n_hint && *n_hint > n) n = *n_hint;
  return Graph(n, std::move(edges));
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::unordered_map<NodeId, NodeId> local;
  local.reserve(nodes.size() * 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) local.emplace(nodes[i], static_cast<NodeId>(i));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      if (w <= nodes[i]) continue;
      if (auto it = local.find(w); it != local.end()) {
        edges.push_back({static_cast<NodeId>(i), it->second});
      }
    }
  }
  return Graph(nodes.size(), std::move(edges));
}

std::vector<std::uint32_t> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (comp[w] == kUnset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

Component largest_connected_component(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return {};
  const auto comp = connected_components(g);
  std::vector<std::size_t> size;
  for (auto c : comp) {
    if (c >= size.size()) size.resize(c + 1, 0);
    ++size[c];
  }
  // Components are numbered by smallest member, so the first maximum wins ties.
  const auto best = static_cast<std::uint32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());
  Component out;
  std::vector<NodeId> local(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] == best) {
      local[v] = static_cast<NodeId>(out.original_ids.size());
      out.original_ids.push_back(static_cast<NodeId>(v));
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (comp[e.u] == best) edges.push_back({local[e.u], local[e.v]});
  }
  out.graph = Graph(out.original_ids.size(), std::move(edges));
  return out;
}

namespace {

bool skip_line(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#' || line[first] == '%';
}

// Parses the next whitespace-separated signed integer token from `line`.
std::optional<std::int64_t> next_int(std::string_view& line) {
  const auto begin = line.find_first_not_of(" \t\r,");
  if (begin == std::string_view::npos) return std::nullopt;
  line.remove_prefix(begin);
  const auto end = std::min(line.find_first_of(" \t\r,"), line.size());
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(line.data(), line.data() + end, value);
  if (ec != std::errc() || ptr != line.data() + end) return std::nullopt;
  line.remove_prefix(end);
  return value;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path.string());
  return in;
}

}  // namespace

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n_hint) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.starts_with("# nodes ")) {
      std::string_view rest = std::string_view(line).substr(8);
      if (const auto declared = next_int(rest); declared && *declared >= 0) {
        n_hint = std::max(n_hint.value_or(0), static_cast<std::size_t>(*declared));
      }
      continue;
    }
    if (skip_line(line)) continue;
    std::string_view rest = line;
    const auto a = next_int(rest);
    const auto b = next_int(rest);
    if (!a || !b) {
      throw InvalidInput("malformed edge on line " + std::to_string(lineno) + ": " + line);
    }
    pairs.emplace_back(*a, *b);
  }
  return from_edge_list(pairs, n_hint);
}

Graph read_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n_hint) {
  auto in = open_or_throw(path);
  return read_edge_list(in, n_hint);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

NodeLabels read_labels(std::istream& in, std::size_t n) {
  NodeLabels labels(n, 0);
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::string_view rest = line;
    const auto id = next_int(rest);
    const auto label = next_int(rest);
    if (!id || !label) {
      throw InvalidInput("malformed label on line " + std::to_string(lineno) + ": " + line);
    }
    if (*id < 0 || static_cast<std::size_t>(*id) >= n) {
      throw InvalidInput("label for unknown node on line " + std::to_string(lineno));
    }
    const auto v = static_cast<std::size_t>(*id);
    if (seen[v]) throw InvalidInput("duplicate label for node " + std::to_string(v));
    seen[v] = true;
    labels[v] = static_cast<std::int32_t>(*label);
  }
  if (const auto missing = std::find(seen.begin(), seen.end(), false); missing != seen.end()) {
    throw InvalidInput("no label for node " + std::to_string(missing - seen.begin()));
  }
  return labels;
}

NodeLabels read_labels(const std::filesystem::path& path, std::size_t n) {
  auto in = open_or_throw(path);
  return read_labels(in, n);
}

void write_labels(std::ostream& out, const NodeLabels& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

NodeLabels canonical_labels(std::span<const std::int32_t> labels) {
  std::unordered_map<std::int32_t, std::int32_t> rename;
  NodeLabels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = rename.emplace(labels[i], static_cast<std::int32_t>(rename.size() + 1));
    out[i] = it->second;
  }
  return out;
}

}  // namespace subsamp
