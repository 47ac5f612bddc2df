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

#include "subsamp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subsamp/error.hpp"

namespace subsamp {
namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidParameter("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

double ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  check_lengths(a.size(), b.size());
  std::map<std::pair<std::int32_t, std::int32_t>, std::uint64_t> table;
  std::map<std::int32_t, std::uint64_t> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++table[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, c] : table) index += choose2(static_cast<double>(c));
  for (const auto& [key, c] : rows) sum_rows += choose2(static_cast<double>(c));
  for (const auto& [key, c] : cols) sum_cols += choose2(static_cast<double>(c));
  const double pairs = choose2(static_cast<double>(a.size()));
  if (pairs == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / pairs;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

double auc(std::span<const double> scores, std::span<const std::int32_t> truth) {
  check_lengths(scores.size(), truth.size());
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return scores[x] < scores[y]; });
  double positive_rank_sum = 0.0;
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (truth[order[t]] == 1) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::uint64_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw InvalidParameter("AUC needs both classes in the truth labels");
  const double pos = static_cast<double>(positives);
  return (positive_rank_sum - pos * (pos + 1.0) / 2.0) / (pos * static_cast<double>(negatives));
}

double modularity(const Graph& g, std::span<const std::int32_t> labels) {
  check_lengths(g.num_nodes(), labels.size());
  if (g.num_edges() == 0) throw InvalidInput("modularity is undefined on an edgeless graph");
  std::unordered_map<std::int32_t, std::pair<double, double>> per_cluster;  // internal edges, degree
  for (const Edge& e : g.edges()) {
    if (labels[e.u] == labels[e.v]) per_cluster[labels[e.u]].first += 1.0;
  }
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    per_cluster[labels[v]].second += static_cast<double>(g.degree(static_cast<NodeId>(v)));
  }
  std::vector<std::pair<std::int32_t, std::pair<double, double>>> sorted(per_cluster.begin(), per_cluster.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(g.num_edges());
  double q = 0.0;
  for (const auto& [label, c] : sorted) {
    const double share = c.second / (2.0 * m);
    q += c.first / m - share * share;
  }
  return q;
}

double jaccard(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  if (x.empty() && y.empty()) throw InvalidParameter("Jaccard coefficient of two empty sets");
  std::vector<NodeId> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  const double inter = static_cast<double>(common.size());
  return inter / (static_cast<double>(x.size() + y.size()) - inter);
}

double misclustering_cp(std::span<const double> c_hat, std::span<const std::int32_t> c_star) {
  check_lengths(c_hat.size(), c_star.size());
  if (c_hat.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < c_hat.size(); ++i) {
    const double d = c_hat[i] - static_cast<double>(c_star[i]);
    s += d * d;
  }
  return s / static_cast<double>(c_hat.size());
}

double misclustering_pace(const ClusteringMatrixEstimate& estimate, std::span<const std::int32_t> truth) {
  check_lengths(estimate.num_nodes(), truth.size());
  const std::size_t n = truth.size();
  if (n == 0) return 0.0;
  // Off-diagonal pairs i < j: present entries contribute (value - C_ij)^2,
  // absent ones contribute C_ij. Same-block pairs come from block sizes.
  std::unordered_map<std::int32_t, double> block;
  for (auto t : truth) block[t] += 1.0;
  double same_block_pairs = 0.0;
  for (const auto& [label, size] : block) same_block_pairs += choose2(size);
  double upper = 0.0;
  double present_same = 0.0;
  for (const auto& e : estimate.entries()) {
    const double c = truth[e.i] == truth[e.j] ? 1.0 : 0.0;
    upper += (e.value - c) * (e.value - c);
    present_same += c;
  }
  upper += same_block_pairs - present_same;
  const double nn = static_cast<double>(n);
  return 2.0 * upper / (nn * nn);
}

double binary_pearson(const BinaryPairCounts& c) {
  using Wide = __int128;
  const Wide len = c.length, x = c.ones_x, y = c.ones_y, both = c.ones_both;
  const Wide var_x = x * (len - x);
  const Wide var_y = y * (len - y);
  if (var_x == 0 || var_y == 0) throw UndefinedCorrelation("correlation with a constant vector");
  const Wide numerator = len * both - x * y;
  const long double denom = std::sqrt(static_cast<long double>(var_x) * static_cast<long double>(var_y));
  return static_cast<double>(static_cast<long double>(numerator) / denom);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation with a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace subsamp
