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

#include "subsamp/sampling.hpp"

namespace subsamp {

/// Two-block core-periphery model with a sampling proportion q.
struct CpSbmParams {
  std::size_t n = 0;
  std::size_t k = 0;  // core size
  double p11 = 0.0;
  double p12 = 0.0;
  double p22 = 0.0;
  double q = 0.0;

  double alpha() const { return static_cast<double>(k) / static_cast<double>(n); }
  /// Throws InvalidParameter unless 1 <= k < n, probabilities lie in [0, 1]
  /// and 0 < q <= 1. Equal probabilities (Erdos-Renyi) are accepted.
  void validate() const;
  /// p11 > p12 > p22 > 0.
  bool is_core_periphery() const;
};

/// Core-coverage factor: the expected number of core nodes in a sub-sample
/// is q * k * xi. RN gives 1; DN and RE share one closed form; RNN has its
/// own. For RW this is the effective factor E_l / (q k) with l = round(q n).
/// Throws UnsupportedScheme for BFS and DFS.
double xi(Scheme scheme, const CpSbmParams& p);

/// Limit of xi as n grows with k / n and the probabilities fixed:
/// RN 1, DN and RE p12 / p22, RNN p12 / (alpha p12 + p22).
/// Throws UnsupportedScheme for BFS, DFS and RW.
double xi_limit(Scheme scheme, const CpSbmParams& p);

/// Expected fraction of nodes that are core and left out of a sub-sample,
/// (1 - q xi) k / n, clamped below at 0.
double expected_uncovered_core_fraction(Scheme scheme, const CpSbmParams& p);

/// One-step transition probabilities of a walk between the core and the
/// periphery blocks.
struct RwRecurrenceState {
  double alpha = 0.0;  // core -> core
  double beta = 0.0;   // core -> periphery
  double gamma = 0.0;  // periphery -> core
  double delta = 0.0;  // periphery -> periphery
};

/// Throws InvalidParameter when a block has no neighbors in expectation.
RwRecurrenceState rw_transition(const CpSbmParams& p);

/// Expected number of core visits E_l of an l-step walk from a uniform start,
/// by iterating the coupled recurrence for (x_l, y_l). Requires l >= 1.
double rw_expected_core_nodes(const CpSbmParams& p, std::size_t l);

/// Same quantity through the closed form
/// v_l = A^(l-1) v_1 + sum_{i=0}^{l-2} A^i c, with powers and the geometric
/// sum computed by repeated squaring.
double rw_expected_core_nodes_matrix(const CpSbmParams& p, std::size_t l);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
};

/// Monte Carlo mean of the number of core nodes in one sub-sample of size
/// round(q n). Each replicate draws a fresh CP-SBM graph and one sample.
/// Deterministic in (params, scheme, reps, seed) for any worker count.
McEstimate mc_expected_core_sampled(const CpSbmParams& p, Scheme scheme, std::size_t reps,
                                    std::uint64_t seed, unsigned workers = 1);

}  // namespace subsamp
