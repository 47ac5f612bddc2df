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

#include "subsamp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subsamp/error.hpp"
#include "subsamp/rng.hpp"

namespace subsamp {
namespace {

constexpr double kSettingsP22 = 0.001;

// Number of failures before the next success of a Bernoulli(r) sequence.
double geometric_skip(Rng& rng, double log_fail) {
  return std::floor(std::log(rng.uniform_open0()) / log_fail);
}

// Pairs (i, j), 0 <= j < i < size, each kept with probability r.
void sample_within(std::size_t offset, std::size_t size, double r, Rng& rng, std::vector<Edge>& out) {
  if (size < 2 || r <= 0.0) return;
  if (r >= 1.0) {
    for (std::size_t i = 1; i < size; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        out.push_back({static_cast<NodeId>(offset + j), static_cast<NodeId>(offset + i)});
      }
    }
    return;
  }
  const double log_fail = std::log1p(-r);
  double v = 1.0, w = -1.0;
  const double s = static_cast<double>(size);
  while (v < s) {
    w += 1.0 + geometric_skip(rng, log_fail);
    while (w >= v && v < s) {
      w -= v;
      v += 1.0;
    }
    if (v < s) {
      out.push_back({static_cast<NodeId>(offset + static_cast<std::size_t>(w)),
                     static_cast<NodeId>(offset + static_cast<std::size_t>(v))});
    }
  }
}

// Pairs (i, j) with i in block a, j in block b, each kept with probability r.
void sample_between(std::size_t offset_a, std::size_t size_a, std::size_t offset_b, std::size_t size_b,
                    double r, Rng& rng, std::vector<Edge>& out) {
  if (size_a == 0 || size_b == 0 || r <= 0.0) return;
  const double total = static_cast<double>(size_a) * static_cast<double>(size_b);
  if (r >= 1.0) {
    for (std::size_t i = 0; i < size_a; ++i) {
      for (std::size_t j = 0; j < size_b; ++j) {
        out.push_back({static_cast<NodeId>(offset_a + i), static_cast<NodeId>(offset_b + j)});
      }
    }
    return;
  }
  const double log_fail = std::log1p(-r);
  double index = -1.0;
  for (;;) {
    index += 1.0 + geometric_skip(rng, log_fail);
    if (index >= total) break;
    const auto t = static_cast<std::uint64_t>(index);
    out.push_back({static_cast<NodeId>(offset_a + t / size_b), static_cast<NodeId>(offset_b + t % size_b)});
  }
}

}  // namespace

void SbmSpec::validate() const {
  const std::size_t k = block_sizes.size();
  if (k == 0) throw InvalidParameter("SBM needs at least one block");
  if (std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0}) != n) {
    throw InvalidParameter("block sizes must sum to n");
  }
  if (p.size() != k) throw InvalidParameter("probability matrix must be K x K");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw InvalidParameter("sparsity must lie in (0, 1]");
  for (std::size_t a = 0; a < k; ++a) {
    if (p[a].size() != k) throw InvalidParameter("probability matrix must be K x K");
    for (std::size_t b = 0; b < k; ++b) {
      const double v = p[a][b];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter("edge probability out of [0, 1]: " + std::to_string(v));
      }
      if (v != p[b][a]) throw InvalidParameter("probability matrix must be symmetric");
    }
  }
}

bool SbmSpec::is_core_periphery() const {
  return p.size() == 2 && p[0].size() == 2 && p[1].size() == 2 && p[0][0] > p[0][1] && p[0][1] > p[1][1];
}

GeneratedGraph generate_sbm(const SbmSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t k = spec.block_sizes.size();
  std::vector<std::size_t> offsets(k + 1, 0);
  for (std::size_t a = 0; a < k; ++a) offsets[a + 1] = offsets[a] + spec.block_sizes[a];

  std::vector<Edge> edges;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      Rng rng(seed, a * k + b);
      const double r = spec.sparsity * spec.p[a][b];
      if (a == b) {
        sample_within(offsets[a], spec.block_sizes[a], r, rng, edges);
      } else {
        sample_between(offsets[a], spec.block_sizes[a], offsets[b], spec.block_sizes[b], r, rng, edges);
      }
    }
  }

  GeneratedGraph out{Graph(spec.n, std::move(edges)), NodeLabels(spec.n)};
  for (std::size_t a = 0; a < k; ++a) {
    std::fill(out.truth.begin() + static_cast<std::ptrdiff_t>(offsets[a]),
              out.truth.begin() + static_cast<std::ptrdiff_t>(offsets[a + 1]), static_cast<std::int32_t>(a + 1));
  }
  return out;
}

SbmSpec cp_sbm_spec(std::size_t n, std::size_t k, double p11, double p12, double p22) {
  if (k > n) throw InvalidParameter("core size exceeds n");
  SbmSpec spec;
  spec.n = n;
  spec.block_sizes = {k, n - k};
  spec.p = {{p11, p12}, {p12, p22}};
  return spec;
}

std::size_t core_size_from_alpha(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("core proportion must lie in (0, 1)");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n))));
}

SbmSpec cp_sbm_settings_spec(std::size_t n, double p11, double alpha) {
  const std::size_t k = core_size_from_alpha(n, alpha);
  if (k >= n) throw InvalidParameter("core must leave at least one periphery node");
  const double p12 = p11 / 2.0;
  SbmSpec spec = cp_sbm_spec(n, k, p11, p12, kSettingsP22);
  if (!spec.is_core_periphery()) {
    throw InvalidParameter("CP-SBM requires p11 > p12 > p22; got p11 = " + std::to_string(p11) +
                           ", p12 = " + std::to_string(p12) + ", p22 = " + std::to_string(kSettingsP22));
  }
  spec.validate();
  return spec;
}

GeneratedGraph cp_sbm_from_settings(std::size_t n, double p11, double alpha, std::uint64_t seed) {
  GeneratedGraph out = generate_sbm(cp_sbm_settings_spec(n, p11, alpha), seed);
  out.truth = core_labels_from_blocks(out.truth);
  return out;
}

NodeLabels core_labels_from_blocks(const NodeLabels& blocks) {
  NodeLabels core(blocks.size());
  std::transform(blocks.begin(), blocks.end(), core.begin(), [](std::int32_t b) { return b == 1 ? 1 : 0; });
  return core;
}

}  // namespace subsamp
