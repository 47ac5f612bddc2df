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

#include "subsamp/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "subsamp/community.hpp"
#include "subsamp/error.hpp"
#include "subsamp/generators.hpp"
#include "subsamp/parallel.hpp"

namespace subsamp {
namespace {

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

[[noreturn]] void unsupported(Scheme scheme, const char* what) {
  throw UnsupportedScheme(std::string(what) + " has no closed form for scheme " + std::string(scheme_name(scheme)));
}

// Shared by DN and RE so the two are the same function of the parameters.
double xi_degree_weighted(const CpSbmParams& p) {
  const double n = static_cast<double>(p.n), k = static_cast<double>(p.k);
  const double numerator = n * ((k - 1.0) * p.p11 + (n - k) * p.p12);
  const double denominator =
      k * (k - 1.0) * p.p11 + 2.0 * k * (n - k) * p.p12 + (n - k) * (n - k - 1.0) * p.p22;
  if (denominator <= 0.0) throw InvalidParameter("model has no edges in expectation");
  return numerator / denominator;
}

double xi_random_node_neighbor(const CpSbmParams& p) {
  const double n = static_cast<double>(p.n), k = static_cast<double>(p.k);
  const double core_degree = (k - 1.0) * p.p11 + (n - k) * p.p12;
  const double periphery_degree = k * p.p12 + (n - k - 1.0) * p.p22;
  return (1.0 + core_degree) / (1.0 + (k / n) * core_degree + ((n - k) / n) * periphery_degree);
}

std::size_t walk_length(const CpSbmParams& p) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.q * static_cast<double>(p.n))));
}

using Mat2 = std::array<double, 4>;  // row-major
using Vec2 = std::array<double, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

Vec2 apply(const Mat2& a, const Vec2& v) { return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]}; }

constexpr Mat2 kIdentity = {1.0, 0.0, 0.0, 1.0};

// (A^m, I + A + ... + A^(m-1)).
std::pair<Mat2, Mat2> power_and_sum(const Mat2& a, std::size_t m) {
  if (m == 0) return {kIdentity, Mat2{0.0, 0.0, 0.0, 0.0}};
  if (m % 2 == 1) {
    const auto [power, sum] = power_and_sum(a, m - 1);
    return {mul(a, power), add(kIdentity, mul(a, sum))};
  }
  const auto [power, sum] = power_and_sum(a, m / 2);
  return {mul(power, power), add(sum, mul(power, sum))};
}

double expectation_from(const CpSbmParams& p, double x_prev, double y_prev) {
  const double n = static_cast<double>(p.n), k = static_cast<double>(p.k);
  return (k / n) * (1.0 + x_prev) + ((n - k) / n) * y_prev;
}

}  // namespace

void CpSbmParams::validate() const {
  if (k < 1 || k >= n) throw InvalidParameter("core size k must satisfy 1 <= k < n");
  if (!is_probability(p11) || !is_probability(p12) || !is_probability(p22)) {
    throw InvalidParameter("edge probabilities must lie in [0, 1]");
  }
  if (!(q > 0.0 && q <= 1.0)) throw InvalidParameter("sampling proportion q must lie in (0, 1]");
}

bool CpSbmParams::is_core_periphery() const { return p11 > p12 && p12 > p22 && p22 > 0.0; }

double xi(Scheme scheme, const CpSbmParams& p) {
  p.validate();
  switch (scheme) {
    case Scheme::kRandomNode: return 1.0;
    case Scheme::kDegreeNode:
    case Scheme::kRandomEdge: return xi_degree_weighted(p);
    case Scheme::kRandomNodeNeighbor: return xi_random_node_neighbor(p);
    case Scheme::kRandomWalk:
      return rw_expected_core_nodes(p, walk_length(p)) / (p.q * static_cast<double>(p.k));
    case Scheme::kBreadthFirst:
    case Scheme::kDepthFirst: break;
  }
  unsupported(scheme, "xi");
}

double xi_limit(Scheme scheme, const CpSbmParams& p) {
  p.validate();
  switch (scheme) {
    case Scheme::kRandomNode: return 1.0;
    case Scheme::kDegreeNode:
    case Scheme::kRandomEdge:
      if (p.p22 <= 0.0) throw InvalidParameter("limit needs p22 > 0");
      return p.p12 / p.p22;
    case Scheme::kRandomNodeNeighbor: return p.p12 / (p.alpha() * p.p12 + p.p22);
    default: break;
  }
  unsupported(scheme, "xi limit");
}

double expected_uncovered_core_fraction(Scheme scheme, const CpSbmParams& p) {
  const double coverage = p.q * xi(scheme, p);
  return std::max(0.0, 1.0 - coverage) * p.alpha();
}

RwRecurrenceState rw_transition(const CpSbmParams& p) {
  p.validate();
  const double n = static_cast<double>(p.n), k = static_cast<double>(p.k);
  const double from_core = (k - 1.0) * p.p11 + (n - k) * p.p12;
  const double from_periphery = k * p.p12 + (n - k - 1.0) * p.p22;
  if (from_core <= 0.0 || from_periphery <= 0.0) {
    throw InvalidParameter("walk transition undefined: a block has zero expected degree");
  }
  RwRecurrenceState s;
  s.alpha = (k - 1.0) * p.p11 / from_core;
  s.beta = 1.0 - s.alpha;
  s.gamma = k * p.p12 / from_periphery;
  s.delta = 1.0 - s.gamma;
  return s;
}

double rw_expected_core_nodes(const CpSbmParams& p, std::size_t l) {
  if (l == 0) throw InvalidParameter("walk length must be at least 1");
  const RwRecurrenceState s = rw_transition(p);
  if (l == 1) return p.alpha();
  double x = 1.0, y = 0.0;
  for (std::size_t step = 2; step < l; ++step) {
    const double nx = s.alpha * x + s.beta * y + s.alpha;
    const double ny = s.gamma * x + s.delta * y + s.gamma;
    x = nx;
    y = ny;
  }
  return expectation_from(p, x, y);
}

double rw_expected_core_nodes_matrix(const CpSbmParams& p, std::size_t l) {
  if (l == 0) throw InvalidParameter("walk length must be at least 1");
  const RwRecurrenceState s = rw_transition(p);
  if (l == 1) return p.alpha();
  const Mat2 a = {s.alpha, s.beta, s.gamma, s.delta};
  const Vec2 c = {s.alpha, s.gamma};
  const Vec2 v1 = {1.0, 0.0};
  // v_{l-1} = A^(l-2) v_1 + sum_{i=0}^{l-3} A^i c
  const auto [power, sum] = power_and_sum(a, l - 2);
  const Vec2 head = apply(power, v1);
  const Vec2 tail = apply(sum, c);
  return expectation_from(p, head[0] + tail[0], head[1] + tail[1]);
}

McEstimate mc_expected_core_sampled(const CpSbmParams& p, Scheme scheme, std::size_t reps, std::uint64_t seed,
                                    unsigned workers) {
  p.validate();
  if (reps == 0) throw InvalidParameter("Monte Carlo needs at least one replicate");
  const SbmSpec spec = cp_sbm_spec(p.n, p.k, p.p11, p.p12, p.p22);
  spec.validate();
  const std::size_t target = subsample_target(p.n, p.q, 1);
  std::vector<double> counts(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t rep) {
    const GeneratedGraph gen = generate_sbm(spec, derive_seed({seed, rep, 0}));
    Rng rng(derive_seed({seed, rep, 1}));
    const NodeSample drawn = select_nodes(gen.graph, scheme, target, rng);
    counts[rep] = static_cast<double>(
        std::count_if(drawn.nodes.begin(), drawn.nodes.end(), [&](NodeId v) { return v < p.k; }));
  });
  // Welford, in replicate order.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < reps; ++i) {
    const double d = counts[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (counts[i] - mean);
  }
  McEstimate out;
  out.reps = reps;
  out.mean = mean;
  out.std_error = reps > 1 ? std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps)) : 0.0;
  return out;
}

}  // namespace subsamp
