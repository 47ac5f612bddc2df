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

#include "subsamp/coreperiphery.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "subsamp/community.hpp"
#include "subsamp/error.hpp"
#include "subsamp/parallel.hpp"

namespace subsamp {
namespace {

constexpr std::uint64_t kOptimizerStream = 0x6f7074;

std::uint64_t pairs_among(std::uint64_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

// Labelling summarized by (core size, edges with a core endpoint).
class CoreState {
 public:
  explicit CoreState(const Graph& g) : g_(g), n_(g.num_nodes()), core_(n_, 0), periphery_neighbors_(n_) {
    for (std::size_t v = 0; v < n_; ++v) periphery_neighbors_[v] = g.degree(static_cast<NodeId>(v));
  }

  std::size_t core_size() const { return core_size_; }
  bool is_core(NodeId v) const { return core_[v] != 0; }

  BinaryPairCounts counts(std::size_t core_size, std::uint64_t core_edges) const {
    const std::uint64_t all = pairs_among(n_);
    return {all, g_.num_edges(), all - pairs_among(n_ - core_size), core_edges};
  }

  bool defined(std::size_t core_size) const {
    const std::uint64_t all = pairs_among(n_);
    return g_.num_edges() > 0 && g_.num_edges() < all && core_size >= 1 && core_size + 2 <= n_;
  }

  double rho() const { return binary_pearson(counts(core_size_, core_edges_)); }

  // Metric after flipping v, or nullopt if undefined there.
  std::optional<double> rho_after_flip(NodeId v) const {
    const std::size_t s = is_core(v) ? core_size_ - 1 : core_size_ + 1;
    if (!defined(s)) return std::nullopt;
    const std::uint64_t e = is_core(v) ? core_edges_ - periphery_neighbors_[v]
                                       : core_edges_ + periphery_neighbors_[v];
    return binary_pearson(counts(s, e));
  }

  void flip(NodeId v) {
    if (is_core(v)) {
      core_edges_ -= periphery_neighbors_[v];
      --core_size_;
      core_[v] = 0;
      for (NodeId w : g_.neighbors(v)) ++periphery_neighbors_[w];
    } else {
      core_edges_ += periphery_neighbors_[v];
      ++core_size_;
      core_[v] = 1;
      for (NodeId w : g_.neighbors(v)) --periphery_neighbors_[w];
    }
  }

  NodeLabels labels() const { return NodeLabels(core_.begin(), core_.end()); }

 private:
  const Graph& g_;
  std::size_t n_;
  std::vector<std::int32_t> core_;
  std::vector<std::uint64_t> periphery_neighbors_;
  std::size_t core_size_ = 0;
  std::uint64_t core_edges_ = 0;
};

// Uniform among the nodes of maximum degree.
NodeId highest_degree_node(const Graph& g, Rng& rng) {
  NodeId best = 0;
  std::uint64_t ties = 1;
  for (std::size_t v = 1; v < g.num_nodes(); ++v) {
    const auto d = g.degree(static_cast<NodeId>(v));
    if (d > g.degree(best)) {
      best = static_cast<NodeId>(v);
      ties = 1;
    } else if (d == g.degree(best) && rng.below(++ties) == 0) {
      best = static_cast<NodeId>(v);
    }
  }
  return best;
}

std::vector<std::vector<NodeId>> cp_core_sets(const Graph& g, const CpOptions& options,
                                              std::size_t* failed) {
  if (options.b == 0) throw InvalidParameter("number of sub-samples B must be at least 1");
  const std::size_t target = subsample_target(g.num_nodes(), options.q, 1);
  std::vector<std::vector<NodeId>> cores(options.b);
  std::vector<char> failures(options.b, 0);
  parallel_for(options.b, options.workers, [&](std::size_t b) {
    Rng rng(options.seed, b);
    const SubGraph sub = sample(g, options.scheme, target, rng);
    try {
      const NodeLabels labels = optimize_core_labels(sub.graph, derive_seed({options.seed, b, kOptimizerStream}));
      for (std::size_t u = 0; u < labels.size(); ++u) {
        if (labels[u] == 1) cores[b].push_back(sub.parent_ids[u]);
      }
    } catch (const Error&) {
      failures[b] = 1;
    }
  });
  if (failed) *failed = static_cast<std::size_t>(std::count(failures.begin(), failures.end(), 1));
  return cores;
}

}  // namespace

BinaryPairCounts be_counts(const Graph& g, std::span<const std::int32_t> core) {
  if (core.size() != g.num_nodes()) throw InvalidParameter("core label length does not match graph");
  std::uint64_t core_size = 0;
  for (auto c : core) {
    if (c != 0 && c != 1) throw InvalidParameter("core labels must be 0 or 1");
    core_size += static_cast<std::uint64_t>(c);
  }
  std::uint64_t core_edges = 0;
  for (const Edge& e : g.edges()) {
    if (core[e.u] == 1 || core[e.v] == 1) ++core_edges;
  }
  const std::uint64_t all = pairs_among(g.num_nodes());
  return {all, g.num_edges(), all - pairs_among(g.num_nodes() - core_size), core_edges};
}

double be_metric(const Graph& g, std::span<const std::int32_t> core) {
  return binary_pearson(be_counts(g, core));
}

NodeLabels optimize_core_labels(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (g.num_edges() == 0) throw InvalidInput("core-periphery optimization needs at least one edge");
  Rng rng(seed);
  CoreState state(g);

  std::vector<std::size_t> degrees = g.degrees();
  std::vector<std::size_t> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  const double median = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                                   : 0.5 * static_cast<double>(sorted[n / 2 - 1] + sorted[n / 2]);
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<double>(degrees[v]) > median) state.flip(static_cast<NodeId>(v));
  }
  if (state.core_size() == 0) state.flip(highest_degree_node(g, rng));
  if (!state.defined(state.core_size())) {
    // Too large a core, or no labelling has a defined metric.
    CoreState single(g);
    single.flip(highest_degree_node(g, rng));
    return single.labels();
  }

  double current = state.rho();
  for (;;) {
    std::optional<NodeId> best;
    double best_rho = current;
    std::uint64_t ties = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto r = state.rho_after_flip(static_cast<NodeId>(v));
      if (!r || *r < best_rho || (!best && *r == best_rho)) continue;
      if (*r > best_rho) {
        best_rho = *r;
        best = static_cast<NodeId>(v);
        ties = 1;
      } else if (rng.below(++ties) == 0) {
        best = static_cast<NodeId>(v);
      }
    }
    if (!best) break;
    state.flip(*best);
    current = best_rho;
  }
  return state.labels();
}

CoreScore run_cp(const Graph& g, const CpOptions& options) {
  CoreScore score;
  const auto cores = cp_core_sets(g, options, &score.failed_samples);
  score.b = options.b;
  score.x.assign(g.num_nodes(), 0);
  for (const auto& core : cores) {
    for (NodeId v : core) ++score.x[v];
  }
  score.c_hat.resize(score.x.size());
  for (std::size_t i = 0; i < score.x.size(); ++i) {
    score.c_hat[i] = static_cast<double>(score.x[i]) / static_cast<double>(score.b);
  }
  return score;
}

std::vector<std::vector<NodeId>> run_cp_trace(const Graph& g, const CpOptions& options) {
  return cp_core_sets(g, options, nullptr);
}

SweepResult binarize_by_sweep(const Graph& g, std::span<const double> scores) {
  const std::size_t n = g.num_nodes();
  if (scores.size() != n) throw InvalidParameter("score length does not match graph");
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });

  CoreState state(g);
  std::optional<std::size_t> best_k;
  double best_rho = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    state.flip(order[k - 1]);
    if (!state.defined(k)) continue;
    const double r = state.rho();
    if (!best_k || r > best_rho) {
      best_k = k;
      best_rho = r;
    }
  }
  if (!best_k) throw UndefinedCorrelation("no prefix core has a defined metric");
  SweepResult out;
  out.core_size = *best_k;
  out.be = best_rho;
  out.labels.assign(n, 0);
  for (std::size_t i = 0; i < *best_k; ++i) out.labels[order[i]] = 1;
  return out;
}

}  // namespace subsamp
