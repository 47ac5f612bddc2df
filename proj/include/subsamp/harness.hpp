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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subsamp/graph.hpp"
#include "subsamp/sampling.hpp"

namespace subsamp {

enum class Task { kCommunity, kCp };

std::string_view task_name(Task task);
Task parse_task(std::string_view name);

enum class Scale { kDesk, kPaper };

Scale parse_scale(std::string_view name);

/// One cell of a simulation grid. `param` is kappa_1 (share of community 1)
/// for the community task and alpha (core share) for the CP task.
struct GridPoint {
  std::size_t n = 0;
  double p11 = 0.0;
  double p12 = 0.0;
  double p22 = 0.0;
  double param = 0.0;
  std::size_t b = 0;
  std::size_t qn = 0;
};

struct ExperimentConfig {
  int setting = 0;  // 0 for an explicit grid
  Task task = Task::kCommunity;
  std::vector<GridPoint> grid;
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  std::size_t reps = 20;
  std::uint64_t seed = 1;
  std::string output;
  bool timing = false;  // fill the seconds column

  /// Throws InvalidParameter on an empty grid, qn outside [1, n],
  /// non-positive values or no schemes.
  void validate() const;
};

/// Settings 1-6 (community) and 7-12 (core-periphery). Ranges are expanded
/// to five evenly spaced points. Desk scale shrinks n, B and qn by about 5x
/// and uses 20 replicates; full ("paper") scale uses the original rows and 100.
ExperimentConfig setting_config(int setting, Scale scale);

/// Reads a JSON document:
///   {"task": "community" | "cp", "setting": 1, "scale": "desk",
///    "grid": {"n": [...], "p11": [...], "kappa" | "alpha": [...],
///             "p12": 0.01, "B": [...] | "n/2", "qn": [...]},
///    "schemes": ["RN", ...], "mc_reps": 20, "seed": 1, "output": "...",
///    "timing": false}
/// With "setting", the listed fields override the setting defaults. Grid
/// lists are crossed in the order n, p11, kappa/alpha, B, qn.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig read_config(const std::filesystem::path& path);

/// Cartesian product of grid values; `b_half_n` sets B = n / 2.
std::vector<GridPoint> expand_grid(Task task, const std::vector<std::size_t>& n, const std::vector<double>& p11,
                                   const std::vector<double>& param, const std::vector<std::size_t>& b,
                                   bool b_half_n, const std::vector<std::size_t>& qn, double community_p12 = 0.01);

struct ResultRow {
  std::size_t grid_index = 0;
  std::size_t scheme_index = 0;  // position in kAllSchemes
  int setting = 0;
  Task task = Task::kCommunity;
  Scheme scheme = Scheme::kRandomNode;
  GridPoint point;
  std::size_t rep = 0;
  std::string metric;  // "ari", "modularity", "auc", "delta" or "error"
  std::optional<double> value;
  std::optional<double> seconds;
};

/// Seed of the graph in cell (grid_index, rep); shared by all schemes.
std::uint64_t graph_seed(std::uint64_t master, std::size_t grid_index, std::size_t rep);
/// Seed of one algorithm run.
std::uint64_t run_seed(std::uint64_t master, std::size_t grid_index, Scheme scheme, std::size_t rep);

/// Runs every grid point x replicate x scheme. Community cells report ARI
/// and modularity, CP cells AUC and delta. A failing run becomes an "error"
/// row and the experiment continues. Rows come back sorted by
/// (grid point, scheme, replicate, metric) whatever the worker count.
std::vector<ResultRow> run_setting(const ExperimentConfig& config, unsigned workers);

/// Long-format CSV with header
/// setting,task,scheme,n,p11,p12,p22,alpha_or_kappa,B,qn,rep,metric,value,seconds
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Mean of `metric` per (grid point, scheme), skipping missing values.
struct CellSummary {
  std::size_t grid_index = 0;
  Scheme scheme = Scheme::kRandomNode;
  GridPoint point;
  double mean = 0.0;
  std::size_t count = 0;
};
std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows, std::string_view metric);

struct RealParams {
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  std::size_t k = 2;     // communities (community task)
  std::size_t qn = 250;  // nodes per sub-sample
  std::size_t b = 1000;
  std::uint64_t seed = 1;
  bool full = false;     // CP: also run the optimizer on the whole graph
};

struct RealRow {
  std::string method;  // "Oracle", "Full" or a scheme tag
  double size = 0.0;   // community: largest-community share; CP: core size k
  double score = 0.0;  // community: modularity Q; CP: BE metric
  std::optional<double> ari;
};

struct RealReport {
  Task task = Task::kCommunity;
  std::size_t n = 0;  // nodes analysed (after the LCC step for communities)
  std::size_t m = 0;
  std::vector<RealRow> rows;
  std::vector<std::vector<NodeId>> cores;  // CP: per scheme, in scheme order
  std::vector<std::vector<double>> jaccard;  // CP: schemes x schemes
};

/// Community task: keeps the largest connected component, runs PACE per
/// scheme, reports Size, Q and (with truth) ARI, plus an Oracle row.
/// CP task: runs the divide-and-conquer scores per scheme, binarizes them by
/// the prefix sweep and reports core size and BE, with the Jaccard matrix
/// between scheme cores. `truth` labels every node of `g`.
RealReport run_real(Task task, const Graph& g, const std::optional<NodeLabels>& truth, const RealParams& params,
                    unsigned workers);

void write_real_table(std::ostream& out, const RealReport& report);
void write_jaccard_csv(std::ostream& out, const RealReport& report, const std::vector<Scheme>& schemes);

/// Number formatting shared by every CSV writer: shortest round-trip form.
std::string format_double(double v);

/// Worker count: the explicit value if given, else SUBSAMP_WORKERS, else 1.
unsigned resolve_workers(std::optional<unsigned> requested);

}  // namespace subsamp
