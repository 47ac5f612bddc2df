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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "subsamp/error.hpp"
#include "subsamp/parallel.hpp"
#include "subsamp/rng.hpp"

namespace subsamp {
namespace {

constexpr std::uint64_t kKMeansStream = 0x6b6d65616e73ULL;

// State of the greedy agglomeration. Clusters are identified by the id of a
// representative node; scores are modularity gains scaled by 2m^2 so that
//   score(i, j) = 2m * E_ij - D_i * D_j
// is an exact integer (E_ij edges between the clusters, D total degree).
class GreedyMerger {
 public:
  explicit GreedyMerger(const Graph& g)
      : two_m_(static_cast<std::int64_t>(2 * g.num_edges())),
        degree_(g.num_nodes()),
        links_(g.num_nodes()),
        active_(g.num_nodes(), 1),
        best_(g.num_nodes()),
        parent_(g.num_nodes()),
        count_(g.num_nodes()) {
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const auto id = static_cast<NodeId>(v);
      degree_[v] = static_cast<std::int64_t>(g.degree(id));
      for (NodeId w : g.neighbors(id)) links_[v].emplace(w, 1);
      parent_[v] = id;
    }
    for (std::size_t v = 0; v < g.num_nodes(); ++v) refresh_best(static_cast<NodeId>(v));
  }

  std::size_t clusters() const { return count_; }

  void merge_once() {
    auto [a, b] = choose_pair();
    merge(a, b);
  }

  NodeLabels labels() {
    NodeLabels raw(parent_.size());
    for (std::size_t v = 0; v < parent_.size(); ++v) raw[v] = static_cast<std::int32_t>(find(static_cast<NodeId>(v)));
    return canonical_labels(raw);
  }

 private:
  struct Best {
    bool valid = false;
    std::int64_t score = 0;
    NodeId neighbor = 0;
  };

  std::int64_t score(NodeId i, NodeId j, std::int64_t edges) const {
    return two_m_ * edges - degree_[i] * degree_[j];
  }

  void refresh_best(NodeId c) {
    Best best;
    for (const auto& [w, e] : links_[c]) {
      const std::int64_t s = score(c, w, e);
      if (!best.valid || s > best.score) best = {true, s, w};
    }
    best_[c] = best;
  }

  static bool better(std::int64_t s, std::pair<NodeId, NodeId> p, std::int64_t best_s,
                     std::pair<NodeId, NodeId> best_p) {
    return s > best_s || (s == best_s && p < best_p);
  }

  std::pair<NodeId, NodeId> choose_pair() const {
    bool have_adjacent = false;
    std::int64_t best_score = 0;
    std::pair<NodeId, NodeId> best_pair{};
    // Two active clusters with the smallest (degree, id).
    NodeId low1 = 0, low2 = 0;
    bool has1 = false, has2 = false;
    auto less = [&](NodeId x, NodeId y) {
      return degree_[x] < degree_[y] || (degree_[x] == degree_[y] && x < y);
    };
    for (std::size_t v = 0; v < active_.size(); ++v) {
      if (!active_[v]) continue;
      const auto c = static_cast<NodeId>(v);
      if (!has1 || less(c, low1)) {
        low2 = low1;
        has2 = has1;
        low1 = c;
        has1 = true;
      } else if (!has2 || less(c, low2)) {
        low2 = c;
        has2 = true;
      }
      const Best& b = best_[v];
      if (!b.valid) continue;
      const std::pair<NodeId, NodeId> p = std::minmax(c, b.neighbor);
      if (!have_adjacent || better(b.score, p, best_score, best_pair)) {
        have_adjacent = true;
        best_score = b.score;
        best_pair = p;
      }
    }
    // A non-adjacent merge gains -D_i D_j, maximized by the two smallest
    // degrees. If those two are adjacent, their adjacent score dominates.
    if (has2 && !links_[low1].contains(low2)) {
      const std::int64_t s = -degree_[low1] * degree_[low2];
      if (!have_adjacent || s > best_score) return std::minmax(low1, low2);
    }
    return best_pair;
  }

  void merge(NodeId a, NodeId b) {
    // Survivor keeps the larger link map.
    NodeId keep = a, drop = b;
    if (links_[b].size() > links_[a].size()) std::swap(keep, drop);
    degree_[keep] += degree_[drop];
    for (const auto& [w, e] : links_[drop]) {
      if (w == keep) continue;
      links_[keep][w] += e;
      auto& lw = links_[w];
      lw.erase(drop);
      lw[keep] += e;
    }
    links_[keep].erase(drop);
    links_[drop].clear();
    active_[drop] = 0;
    best_[drop] = {};
    parent_[drop] = keep;
    --count_;

    refresh_best(keep);
    for (const auto& [w, e] : links_[keep]) {
      const Best& cur = best_[w];
      if (!cur.valid || cur.neighbor == keep || cur.neighbor == drop) {
        refresh_best(w);
        continue;
      }
      const std::int64_t s = score(w, keep, e);
      if (s > cur.score || (s == cur.score && keep < cur.neighbor)) best_[w] = {true, s, keep};
    }
  }

  NodeId find(NodeId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  std::int64_t two_m_;
  std::vector<std::int64_t> degree_;
  std::vector<std::map<NodeId, std::int64_t>> links_;
  std::vector<char> active_;
  std::vector<Best> best_;
  std::vector<NodeId> parent_;
  std::size_t count_;
};

double squared_norm(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

// Squared distance between sparse row r and dense center c. The center norm
// and the on-support correction are both summed in ascending column order,
// so a row compared with an exact copy of itself yields exactly 0.
double row_distance(const SparseRows& rows, std::size_t r, std::span<const double> center,
                    double center_norm) {
  double on_support = 0.0;
  double diff = 0.0;
  for (std::size_t p = rows.offsets[r]; p < rows.offsets[r + 1]; ++p) {
    const double c = center[rows.columns[p]];
    on_support += c * c;
    const double d = rows.values[p] - c;
    diff += d * d;
  }
  return std::max(0.0, (center_norm - on_support) + diff);
}

struct KMeansRun {
  std::vector<std::size_t> assignment;
  double wcss = 0.0;
};

KMeansRun kmeans_once(const SparseRows& rows, std::size_t k, Rng& rng, std::size_t max_iterations) {
  const std::size_t n = rows.n;
  std::vector<double> centers(k * n, 0.0);
  std::vector<double> norms(k, 0.0);
  auto center = [&](std::size_t c) { return std::span<double>(centers.data() + c * n, n); };
  auto set_center_to_row = [&](std::size_t c, std::size_t r) {
    auto dst = center(c);
    std::fill(dst.begin(), dst.end(), 0.0);
    for (std::size_t p = rows.offsets[r]; p < rows.offsets[r + 1]; ++p) dst[rows.columns[p]] = rows.values[p];
    norms[c] = squared_norm(dst);
  };

  // k-means++ seeding.
  set_center_to_row(0, static_cast<std::size_t>(rng.below(n)));
  std::vector<double> nearest(n);
  for (std::size_t r = 0; r < n; ++r) nearest[r] = row_distance(rows, r, center(0), norms[0]);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        acc += nearest[r];
        if (acc > target && nearest[r] > 0.0) {
          pick = r;
          break;
        }
      }
      while (nearest[pick] == 0.0 && pick > 0) --pick;  // rounding at the tail
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    set_center_to_row(c, pick);
    for (std::size_t r = 0; r < n; ++r) {
      nearest[r] = std::min(nearest[r], row_distance(rows, r, center(c), norms[c]));
    }
  }

  KMeansRun run;
  run.assignment.assign(n, k);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> sizes(k);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = row_distance(rows, r, center(c), norms[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      dist[r] = best_d;
      if (run.assignment[r] != best) {
        run.assignment[r] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::fill(centers.begin(), centers.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    auto add_row = [&](std::size_t c, std::size_t r, double sign) {
      auto dst = center(c);
      for (std::size_t p = rows.offsets[r]; p < rows.offsets[r + 1]; ++p) dst[rows.columns[p]] += sign * rows.values[p];
    };
    for (std::size_t r = 0; r < n; ++r) {
      ++sizes[run.assignment[r]];
      add_row(run.assignment[r], r, 1.0);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      // Empty cluster: take over the worst-fitted row of a cluster that can spare one.
      std::size_t far = n;
      for (std::size_t r = 0; r < n; ++r) {
        if (sizes[run.assignment[r]] > 1 && (far == n || dist[r] > dist[far])) far = r;
      }
      const std::size_t donor = run.assignment[far];
      add_row(donor, far, -1.0);
      --sizes[donor];
      add_row(c, far, 1.0);
      sizes[c] = 1;
      run.assignment[far] = c;
      dist[far] = 0.0;
    }
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = center(c);
      const double inv = 1.0 / static_cast<double>(sizes[c]);
      for (double& x : dst) x *= inv;
      norms[c] = squared_norm(dst);
    }
  }

  run.wcss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = run.assignment[r];
    run.wcss += row_distance(rows, r, center(c), norms[c]);
  }
  return run;
}

}  // namespace

NodeLabels detect_communities_greedy(const Graph& g, std::size_t k) {
  if (k == 0) throw InvalidParameter("number of communities must be at least 1");
  if (k > g.num_nodes()) {
    throw InvalidParameter("number of communities " + std::to_string(k) + " exceeds node count " +
                           std::to_string(g.num_nodes()));
  }
  GreedyMerger merger(g);
  while (merger.clusters() > k) merger.merge_once();
  return merger.labels();
}

std::uint64_t ClusterAccumulator::key(NodeId i, NodeId j) const {
  if (i > j) std::swap(i, j);
  return static_cast<std::uint64_t>(i) * n_ + j;
}

void ClusterAccumulator::add(std::span<const NodeId> parent_ids, std::span<const std::int32_t> labels) {
  if (parent_ids.size() != labels.size()) {
    throw InvalidParameter("label count does not match sub-sample size");
  }
  for (std::size_t u = 0; u < parent_ids.size(); ++u) {
    if (parent_ids[u] >= n_) throw InvalidParameter("parent id out of range");
    for (std::size_t v = u + 1; v < parent_ids.size(); ++v) {
      if (parent_ids[u] == parent_ids[v]) throw InvalidParameter("duplicate parent id in sub-sample");
      Counts& c = counts_[key(parent_ids[u], parent_ids[v])];
      ++c.co;
      if (labels[u] == labels[v]) ++c.same;
    }
  }
}

void ClusterAccumulator::merge(const ClusterAccumulator& other) {
  if (other.n_ != n_) throw InvalidParameter("accumulator size mismatch");
  for (const auto& [k, c] : other.counts_) {
    Counts& mine = counts_[k];
    mine.co += c.co;
    mine.same += c.same;
  }
}

ClusterAccumulator::Counts ClusterAccumulator::counts(NodeId i, NodeId j) const {
  if (i == j) return {};
  const auto it = counts_.find(key(i, j));
  return it == counts_.end() ? Counts{} : it->second;
}

std::vector<ClusterAccumulator::Entry> ClusterAccumulator::entries() const {
  std::vector<Entry> out;
  out.reserve(counts_.size());
  for (const auto& [k, c] : counts_) {
    out.push_back({static_cast<NodeId>(k / n_), static_cast<NodeId>(k % n_), c});
  }
  std::sort(out.begin(), out.end(),
            [](const Entry& a, const Entry& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  return out;
}

double choose_beta(const ClusterAccumulator& acc) {
  std::vector<std::uint32_t> co;
  co.reserve(acc.num_pairs());
  for (const auto& e : acc.entries()) {
    if (e.counts.co > 0) co.push_back(e.counts.co);
  }
  if (co.empty()) throw InvalidParameter("no co-sampled pairs to choose a threshold from");
  // Nearest rank: the ceil(0.4 M)-th smallest value.
  const std::size_t rank = (4 * co.size() + 9) / 10;
  auto nth = co.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(co.begin(), nth, co.end());
  return static_cast<double>(*nth);
}

ClusteringMatrixEstimate::ClusteringMatrixEstimate(std::size_t n, double beta, std::vector<Entry> entries)
    : n_(n), beta_(beta), entries_(std::move(entries)) {
  for (Entry& e : entries_) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
}

const ClusteringMatrixEstimate::Entry* ClusteringMatrixEstimate::find(NodeId i, NodeId j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair(i, j),
                                   [](const Entry& e, std::pair<NodeId, NodeId> p) {
                                     return std::pair(e.i, e.j) < p;
                                   });
  if (it == entries_.end() || it->i != i || it->j != j) return nullptr;
  return &*it;
}

bool ClusteringMatrixEstimate::contains(NodeId i, NodeId j) const { return i != j && find(i, j) != nullptr; }

double ClusteringMatrixEstimate::value(NodeId i, NodeId j) const {
  if (i == j) return 1.0;
  const Entry* e = find(i, j);
  return e ? e->value : 0.0;
}

ClusteringMatrixEstimate combine(const ClusterAccumulator& acc, double beta) {
  if (beta < 0.0) throw InvalidParameter("threshold must be non-negative");
  std::vector<ClusteringMatrixEstimate::Entry> out;
  for (const auto& e : acc.entries()) {
    if (static_cast<double>(e.counts.co) > beta) {
      out.push_back({e.i, e.j, static_cast<double>(e.counts.same) / static_cast<double>(e.counts.co)});
    }
  }
  return ClusteringMatrixEstimate(acc.num_nodes(), beta, std::move(out));
}

SparseRows estimate_rows(const ClusteringMatrixEstimate& est) {
  SparseRows rows;
  rows.n = est.num_nodes();
  rows.offsets.assign(rows.n + 1, 0);
  for (const auto& e : est.entries()) {
    ++rows.offsets[e.i + 1];
    ++rows.offsets[e.j + 1];
  }
  for (std::size_t r = 0; r < rows.n; ++r) rows.offsets[r + 1] += rows.offsets[r] + 1;  // + diagonal
  rows.columns.resize(rows.offsets[rows.n]);
  rows.values.resize(rows.offsets[rows.n]);
  std::vector<std::size_t> cursor(rows.offsets.begin(), rows.offsets.end() - 1);
  // Entries sorted by (i, j): for row r, columns < r arrive first in
  // ascending order, then the diagonal is placed, then columns > r.
  std::vector<char> diagonal_done(rows.n, 0);
  auto place_diagonal_before = [&](std::size_t r, NodeId col) {
    if (!diagonal_done[r] && col > r) {
      rows.columns[cursor[r]] = static_cast<NodeId>(r);
      rows.values[cursor[r]++] = 1.0;
      diagonal_done[r] = 1;
    }
  };
  for (const auto& e : est.entries()) {
    rows.columns[cursor[e.j]] = e.i;
    rows.values[cursor[e.j]++] = e.value;
  }
  for (const auto& e : est.entries()) {
    place_diagonal_before(e.i, e.j);
    rows.columns[cursor[e.i]] = e.j;
    rows.values[cursor[e.i]++] = e.value;
  }
  for (std::size_t r = 0; r < rows.n; ++r) {
    if (!diagonal_done[r]) {
      rows.columns[cursor[r]] = static_cast<NodeId>(r);
      rows.values[cursor[r]++] = 1.0;
    }
  }
  return rows;
}

KMeansResult kmeans_rows(const SparseRows& rows, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& options) {
  if (k == 0) throw InvalidParameter("k-means needs at least one cluster");
  if (k > rows.n) throw InvalidParameter("k-means cluster count exceeds row count");
  KMeansResult best;
  bool have = false;
  std::vector<std::size_t> best_assignment;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    Rng rng(seed, r);
    KMeansRun run = kmeans_once(rows, k, rng, std::max<std::size_t>(1, options.max_iterations));
    if (!have || run.wcss < best.wcss) {
      have = true;
      best.wcss = run.wcss;
      best.best_restart = r;
      best_assignment = std::move(run.assignment);
    }
  }
  NodeLabels raw(best_assignment.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::int32_t>(best_assignment[i]);
  best.labels = canonical_labels(raw);
  return best;
}

NodeLabels extract_labels_kmeans(const ClusteringMatrixEstimate& est, std::size_t k, std::uint64_t seed,
                                 const KMeansOptions& options) {
  if (k == 0 || k > est.num_nodes()) {
    throw InvalidParameter("k-means cluster count must be in [1, n]");
  }
  return kmeans_rows(estimate_rows(est), k, seed, options).labels;
}

std::size_t subsample_target(std::size_t n, double q, std::size_t minimum) {
  if (!(q > 0.0) || q > 1.0) throw InvalidParameter("sub-sample proportion q must lie in (0, 1]");
  const auto target = static_cast<std::size_t>(std::llround(q * static_cast<double>(n)));
  if (target < minimum) {
    throw InvalidParameter("sub-sample size round(q n) = " + std::to_string(target) + " is below " +
                           std::to_string(minimum));
  }
  return std::min(target, n);
}

PaceResult run_pace(const Graph& g, const PaceOptions& options) {
  const std::size_t n = g.num_nodes();
  if (options.b == 0) throw InvalidParameter("number of sub-samples B must be at least 1");
  if (options.k == 0 || options.k > n) throw InvalidParameter("K must lie in [1, n]");
  const std::size_t target = subsample_target(n, options.q, 2);

  struct Task {
    std::vector<NodeId> parents;
    NodeLabels labels;
    bool filled = false;
  };
  std::vector<Task> tasks(options.b);
  parallel_for(options.b, options.workers, [&](std::size_t b) {
    Rng rng(options.seed, b);
    SubGraph sub = sample(g, options.scheme, target, rng);
    const std::size_t k = std::min(options.k, sub.parent_ids.size());
    tasks[b].labels = detect_communities_greedy(sub.graph, k);
    tasks[b].parents = std::move(sub.parent_ids);
    tasks[b].filled = sub.filled_uniformly;
  });

  ClusterAccumulator acc(n);
  PaceDiagnostics diag;
  diag.target = target;
  for (const Task& t : tasks) {
    acc.add(t.parents, t.labels);
    if (t.filled) ++diag.filled_samples;
  }
  tasks.clear();

  const auto entries = acc.entries();
  diag.percentile_beta = choose_beta(acc);
  std::uint32_t max_co = 0;
  for (const auto& e : entries) max_co = std::max(max_co, e.counts.co);
  diag.beta = std::min(diag.percentile_beta, static_cast<double>(max_co) - 1.0);

  // Coverage diagnostics over all n(n-1)/2 pairs, zeros included.
  const double all_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const auto zeros = static_cast<std::size_t>(all_pairs) - entries.size();
  std::vector<std::uint32_t> co;
  co.reserve(entries.size());
  std::size_t below = zeros;
  for (const auto& e : entries) {
    co.push_back(e.counts.co);
    if (static_cast<double>(e.counts.co) <= diag.beta) ++below;
  }
  std::sort(co.begin(), co.end());
  diag.min_co_count = zeros > 0 ? 0 : co.front();
  auto kth = [&](std::size_t idx) -> double { return idx < zeros ? 0.0 : co[idx - zeros]; };
  const auto total = static_cast<std::size_t>(all_pairs);
  diag.median_co_count = total % 2 == 1 ? kth(total / 2) : 0.5 * (kth(total / 2 - 1) + kth(total / 2));
  diag.fraction_below_beta = static_cast<double>(below) / all_pairs;

  ClusteringMatrixEstimate estimate = combine(acc, diag.beta);
  diag.estimate_entries = estimate.entries().size();
  NodeLabels labels = extract_labels_kmeans(estimate, options.k, derive_seed({options.seed, kKMeansStream}),
                                            options.kmeans);
  return {std::move(labels), std::move(estimate), diag};
}

}  // namespace subsamp
