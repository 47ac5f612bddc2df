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

#include "subsamp/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <unordered_map>

#include "subsamp/error.hpp"

namespace subsamp {
namespace {

// Lazily materialized uniform permutation of 0..n-1 (sparse Fisher-Yates).
// Each call to next() costs O(1) regardless of n.
class LazyPermutation {
 public:
  explicit LazyPermutation(std::size_t n) : n_(n) {}

  bool exhausted() const { return pos_ == n_; }

  std::size_t next(Rng& rng) {
    const std::size_t j = pos_ + static_cast<std::size_t>(rng.below(n_ - pos_));
    const std::size_t at_j = value_at(j);
    swapped_[j] = value_at(pos_);
    ++pos_;
    return at_j;
  }

 private:
  std::size_t value_at(std::size_t i) const {
    const auto it = swapped_.find(i);
    return it == swapped_.end() ? i : it->second;
  }

  std::size_t n_;
  std::size_t pos_ = 0;
  std::unordered_map<std::size_t, std::size_t> swapped_;
};

// Node set under construction: membership flags plus selection order.
class Selection {
 public:
  Selection(std::size_t n, std::size_t target) : member_(n, 0), target_(target) {
    nodes_.reserve(target);
  }

  bool contains(NodeId v) const { return member_[v] != 0; }
  bool full() const { return nodes_.size() >= target_; }
  std::size_t remaining() const { return target_ - nodes_.size(); }

  void add(NodeId v) {
    member_[v] = 1;
    nodes_.push_back(v);
  }

  // Adds `batch` (distinct, not yet selected); when it would overshoot the
  // target, only a uniform random subset of the needed size is kept.
  void add_truncated(std::vector<NodeId>& batch, Rng& rng) {
    if (batch.size() > remaining()) {
      const std::size_t keep = remaining();
      rng.choose_front(std::span<NodeId>(batch), keep);
      batch.resize(keep);
    }
    for (NodeId v : batch) add(v);
  }

  // Draws uniform nodes not yet selected until full.
  void fill_uniform(LazyPermutation& order, Rng& rng) {
    while (!full() && !order.exhausted()) {
      const auto v = static_cast<NodeId>(order.next(rng));
      if (!contains(v)) add(v);
    }
  }

  // Next uniformly random unselected node; requires !full().
  NodeId draw_unselected(LazyPermutation& order, Rng& rng) const {
    for (;;) {
      const auto v = static_cast<NodeId>(order.next(rng));
      if (!contains(v)) return v;
    }
  }

  NodeSample finish(bool filled) && { return {std::move(nodes_), filled}; }

 private:
  std::vector<char> member_;
  std::vector<NodeId> nodes_;
  std::size_t target_;
};

void check_target(const Graph& g, std::size_t target) {
  if (target < 1) throw InvalidParameter("sample target must be at least 1");
  if (target > g.num_nodes()) {
    throw InvalidParameter("sample target " + std::to_string(target) + " exceeds node count " +
                           std::to_string(g.num_nodes()));
  }
}

std::size_t total_degree(const Graph& g) { return 2 * g.num_edges(); }

// Fenwick tree over integer weights, used once rejection sampling in DN
// becomes inefficient.
class Fenwick {
 public:
  explicit Fenwick(const std::vector<std::uint64_t>& w) : tree_(w.size() + 1, 0) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      tree_[i + 1] += w[i];
      const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[i + 1];
    }
    total_ = 0;
    for (auto x : w) total_ += x;
  }

  std::uint64_t total() const { return total_; }

  void subtract(std::size_t i, std::uint64_t amount) {
    total_ -= amount;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] -= amount;
  }

  // Smallest index i with prefix_sum(i) > r.
  std::size_t find(std::uint64_t r) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= r) {
        pos += step;
        r -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::uint64_t total_ = 0;
};

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRandomNode: return "RN";
    case Scheme::kDegreeNode: return "DN";
    case Scheme::kRandomEdge: return "RE";
    case Scheme::kBreadthFirst: return "BFS";
    case Scheme::kDepthFirst: return "DFS";
    case Scheme::kRandomNodeNeighbor: return "RNN";
    case Scheme::kRandomWalk: return "RW";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view tag) {
  std::string upper(tag);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == upper) return s;
  }
  return std::nullopt;
}

NodeSample sample_rn(const Graph& g, std::size_t target, Rng& rng) {
  check_target(g, target);
  Selection sel(g.num_nodes(), target);
  LazyPermutation order(g.num_nodes());
  sel.fill_uniform(order, rng);
  return std::move(sel).finish(false);
}

NodeSample sample_dn(const Graph& g, std::size_t target, Rng& rng) {
  check_target(g, target);
  const std::size_t stubs = total_degree(g);
  if (stubs == 0) throw InvalidInput("degree-node sampling needs at least one edge");
  const std::size_t n = g.num_nodes();
  Selection sel(n, target);
  const auto edges = g.edges();

  // Phase 1: a uniform stub is a degree-proportional node; rejecting
  // already-selected nodes yields the without-replacement conditional law.
  std::uint64_t selected_weight = 0;
  while (!sel.full() && 2 * selected_weight < stubs) {
    const std::uint64_t r = rng.below(stubs);
    const Edge& e = edges[r / 2];
    const NodeId v = (r % 2 == 0) ? e.u : e.v;
    if (sel.contains(v)) continue;
    sel.add(v);
    selected_weight += g.degree(v);
  }

  // Phase 2: exact weighted draws over the remaining nodes.
  if (!sel.full()) {
    std::vector<std::uint64_t> weight(n);
    for (std::size_t v = 0; v < n; ++v) {
      weight[v] = sel.contains(static_cast<NodeId>(v)) ? 0 : g.degree(static_cast<NodeId>(v));
    }
    Fenwick tree(weight);
    while (!sel.full() && tree.total() > 0) {
      const std::size_t v = tree.find(rng.below(tree.total()));
      sel.add(static_cast<NodeId>(v));
      tree.subtract(v, weight[v]);
    }
  }

  // Only zero-degree nodes are left.
  const bool filled = !sel.full();
  if (filled) {
    LazyPermutation order(n);
    sel.fill_uniform(order, rng);
  }
  return std::move(sel).finish(filled);
}

NodeSample sample_re(const Graph& g, std::size_t target, Rng& rng) {
  check_target(g, target);
  Selection sel(g.num_nodes(), target);
  const auto edges = g.edges();
  LazyPermutation edge_order(edges.size());
  std::vector<NodeId> batch;
  while (!sel.full() && !edge_order.exhausted()) {
    const Edge& e = edges[edge_order.next(rng)];
    batch.clear();
    if (!sel.contains(e.u)) batch.push_back(e.u);
    if (!sel.contains(e.v)) batch.push_back(e.v);
    sel.add_truncated(batch, rng);
  }
  const bool filled = !sel.full();
  if (filled) {
    LazyPermutation order(g.num_nodes());
    sel.fill_uniform(order, rng);
  }
  return std::move(sel).finish(filled);
}

NodeSample sample_bfs(const Graph& g, std::size_t target, Rng& rng, const SamplerOptions& options) {
  check_target(g, target);
  const std::size_t n = g.num_nodes();
  Selection sel(n, target);
  LazyPermutation roots(n);
  std::vector<char> queued(n, 0);
  std::vector<NodeId> layer;
  std::vector<NodeId> next;
  bool first = true;
  while (!sel.full()) {
    const NodeId root = (first && options.start) ? *options.start : sel.draw_unselected(roots, rng);
    first = false;
    sel.add(root);
    layer.assign(1, root);
    while (!sel.full() && !layer.empty()) {
      next.clear();
      for (NodeId v : layer) {
        for (NodeId w : g.neighbors(v)) {
          if (!sel.contains(w) && !queued[w]) {
            queued[w] = 1;
            next.push_back(w);
          }
        }
      }
      for (NodeId w : next) queued[w] = 0;
      sel.add_truncated(next, rng);
      layer.swap(next);
    }
  }
  return std::move(sel).finish(false);
}

NodeSample sample_dfs(const Graph& g, std::size_t target, Rng& rng, const SamplerOptions& options) {
  check_target(g, target);
  const std::size_t n = g.num_nodes();
  Selection sel(n, target);
  LazyPermutation roots(n);
  std::vector<NodeId> open;
  NodeId current = (options.start) ? *options.start : sel.draw_unselected(roots, rng);
  sel.add(current);
  while (!sel.full()) {
    open.clear();
    for (NodeId w : g.neighbors(current)) {
      if (!sel.contains(w)) open.push_back(w);
    }
    // No backtracking: a dead end restarts at a fresh uniform node.
    current = open.empty() ? sel.draw_unselected(roots, rng)
                           : open[static_cast<std::size_t>(rng.below(open.size()))];
    sel.add(current);
  }
  return std::move(sel).finish(false);
}

NodeSample sample_rnn(const Graph& g, std::size_t target, Rng& rng) {
  check_target(g, target);
  Selection sel(g.num_nodes(), target);
  LazyPermutation seeds(g.num_nodes());
  std::vector<NodeId> batch;
  while (!sel.full()) {
    const auto seed = static_cast<NodeId>(seeds.next(rng));
    if (!sel.contains(seed)) sel.add(seed);
    batch.clear();
    for (NodeId w : g.neighbors(seed)) {
      if (!sel.contains(w)) batch.push_back(w);
    }
    sel.add_truncated(batch, rng);
  }
  return std::move(sel).finish(false);
}

NodeSample sample_rw(const Graph& g, std::size_t target, Rng& rng, const SamplerOptions& options) {
  check_target(g, target);
  const std::size_t n = g.num_nodes();
  Selection sel(n, target);
  LazyPermutation restarts(n);
  const std::size_t stall_limit = std::max<std::size_t>(1, options.rw_stall_factor * target);
  NodeId current = (options.start) ? *options.start : sel.draw_unselected(restarts, rng);
  sel.add(current);
  std::size_t stalled = 0;
  while (!sel.full()) {
    const auto nb = g.neighbors(current);
    if (nb.empty() || stalled >= stall_limit) {
      current = sel.draw_unselected(restarts, rng);
      sel.add(current);
      stalled = 0;
      continue;
    }
    current = nb[static_cast<std::size_t>(rng.below(nb.size()))];
    if (sel.contains(current)) {
      ++stalled;
    } else {
      sel.add(current);
      stalled = 0;
    }
  }
  return std::move(sel).finish(false);
}

SubGraph induce(const Graph& g, NodeSample sample) {
  SubGraph sub;
  sub.parent_ids = std::move(sample.nodes);
  std::sort(sub.parent_ids.begin(), sub.parent_ids.end());
  sub.graph = induced_subgraph(g, sub.parent_ids);
  sub.filled_uniformly = sample.filled_uniformly;
  return sub;
}

NodeSample select_nodes(const Graph& g, Scheme scheme, std::size_t target, Rng& rng,
                        const SamplerOptions& options) {
  check_target(g, target);
  switch (scheme) {
    case Scheme::kRandomNode: return sample_rn(g, target, rng);
    case Scheme::kDegreeNode: return sample_dn(g, target, rng);
    case Scheme::kRandomEdge: return sample_re(g, target, rng);
    case Scheme::kBreadthFirst: return sample_bfs(g, target, rng, options);
    case Scheme::kDepthFirst: return sample_dfs(g, target, rng, options);
    case Scheme::kRandomNodeNeighbor: return sample_rnn(g, target, rng);
    case Scheme::kRandomWalk: return sample_rw(g, target, rng, options);
  }
  throw InvalidParameter("unknown sampling scheme");
}

SubGraph sample(const Graph& g, Scheme scheme, std::size_t target, Rng& rng,
                const SamplerOptions& options) {
  return induce(g, select_nodes(g, scheme, target, rng, options));
}

SubGraph sample(const Graph& g, Scheme scheme, std::size_t target, std::uint64_t seed,
                const SamplerOptions& options) {
  Rng rng(seed);
  return sample(g, scheme, target, rng, options);
}

}  // namespace subsamp
