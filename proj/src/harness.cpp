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

#include "subsamp/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "subsamp/community.hpp"
#include "subsamp/coreperiphery.hpp"
#include "subsamp/error.hpp"
#include "subsamp/generators.hpp"
#include "subsamp/metrics.hpp"
#include "subsamp/parallel.hpp"
#include "subsamp/rng.hpp"

namespace subsamp {
namespace {

using nlohmann::json;

constexpr double kCommunityP12 = 0.01;
constexpr double kCpP22 = 0.001;
constexpr std::uint64_t kGraphStream = 0x67726170ULL;

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::vector<std::size_t> linspace_int(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> out;
  for (double v : linspace(static_cast<double>(lo), static_cast<double>(hi), count)) {
    out.push_back(static_cast<std::size_t>(std::llround(v)));
  }
  return out;
}

std::size_t scheme_index(Scheme s) {
  return static_cast<std::size_t>(std::find(kAllSchemes.begin(), kAllSchemes.end(), s) - kAllSchemes.begin());
}

struct Baseline {
  std::size_t n;
  double p11;
  double param;
  std::size_t b;
  std::size_t qn;
};

template <class T>
std::vector<T> read_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

std::string_view task_name(Task task) { return task == Task::kCommunity ? "community" : "cp"; }

Task parse_task(std::string_view name) {
  if (name == "community") return Task::kCommunity;
  if (name == "cp") return Task::kCp;
  throw InvalidParameter("unknown task '" + std::string(name) + "' (expected community or cp)");
}

Scale parse_scale(std::string_view name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "paper") return Scale::kPaper;
  throw InvalidParameter("unknown scale '" + std::string(name) + "' (expected desk or paper)");
}

void ExperimentConfig::validate() const {
  if (grid.empty()) throw InvalidParameter("experiment grid is empty");
  if (schemes.empty()) throw InvalidParameter("experiment needs at least one scheme");
  if (reps == 0) throw InvalidParameter("experiment needs at least one replicate");
  for (const GridPoint& p : grid) {
    if (p.n == 0 || p.b == 0) throw InvalidParameter("grid values n and B must be positive");
    if (p.qn == 0 || p.qn > p.n) throw InvalidParameter("grid value qn must lie in [1, n]");
    if (!(p.p11 > 0.0) || !(p.param > 0.0)) throw InvalidParameter("grid probabilities and shares must be positive");
  }
}

std::vector<GridPoint> expand_grid(Task task, const std::vector<std::size_t>& n, const std::vector<double>& p11,
                                   const std::vector<double>& param, const std::vector<std::size_t>& b,
                                   bool b_half_n, const std::vector<std::size_t>& qn, double community_p12) {
  std::vector<GridPoint> out;
  const std::vector<std::size_t> b_values = b_half_n ? std::vector<std::size_t>{0} : b;
  for (std::size_t nv : n) {
    for (double p : p11) {
      for (double a : param) {
        for (std::size_t bv : b_values) {
          for (std::size_t q : qn) {
            GridPoint g;
            g.n = nv;
            g.p11 = p;
            g.param = a;
            g.b = b_half_n ? nv / 2 : bv;
            g.qn = q;
            if (task == Task::kCommunity) {
              g.p12 = community_p12;
              g.p22 = p;
            } else {
              g.p12 = p / 2.0;
              g.p22 = kCpP22;
            }
            out.push_back(g);
          }
        }
      }
    }
  }
  return out;
}

ExperimentConfig setting_config(int setting, Scale scale) {
  if (setting < 1 || setting > 12) throw InvalidParameter("setting id must lie in 1..12");
  const bool desk = scale == Scale::kDesk;
  const Task task = setting <= 6 ? Task::kCommunity : Task::kCp;
  const int row = task == Task::kCommunity ? setting : setting - 6;

  Baseline base = task == Task::kCommunity
                      ? (desk ? Baseline{1000, 0.04, 0.75, 200, 150} : Baseline{5000, 0.04, 0.75, 1000, 250})
                      : (desk ? Baseline{1000, 0.004, 0.01, 200, 50} : Baseline{5000, 0.004, 0.01, 1000, 100});
  std::vector<std::size_t> n{base.n}, b{base.b}, qn{base.qn};
  std::vector<double> p11{base.p11}, param{base.param};
  bool half = false;

  switch (row) {
    case 1:
      if (task == Task::kCommunity) {
        p11 = linspace(0.02, 0.10, 5);
      } else {
        // p11 = 0.002 gives p12 = p22; the desk grid starts one step above.
        p11 = desk ? linspace(0.004, 0.020, 5) : linspace(0.002, 0.020, 5);
      }
      break;
    case 2:
    case 3:
      n = desk ? linspace_int(400, 2000, 5) : linspace_int(1000, 10000, 5);
      half = row == 3;
      break;
    case 4:
      param = task == Task::kCommunity ? linspace(0.50, 0.95, 5) : linspace(0.002, 0.30, 5);
      break;
    case 5:
      b = desk ? linspace_int(20, 2000, 5) : linspace_int(100, 10000, 5);
      break;
    case 6:
      if (task == Task::kCommunity) {
        qn = desk ? linspace_int(50, 250, 5) : linspace_int(100, 500, 5);
      } else {
        qn = desk ? linspace_int(10, 100, 5) : linspace_int(50, 500, 5);
      }
      break;
    default: break;
  }

  ExperimentConfig config;
  config.setting = setting;
  config.task = task;
  config.grid = expand_grid(task, n, p11, param, b, half, qn);
  config.reps = desk ? 20 : 100;
  return config;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig config;
    if (j.contains("setting")) {
      const Scale scale = parse_scale(j.value("scale", std::string("desk")));
      config = setting_config(j.at("setting").get<int>(), scale);
    } else {
      if (!j.contains("task")) throw InvalidParameter("config needs either \"setting\" or \"task\"");
      config.task = parse_task(j.at("task").get<std::string>());
      if (!j.contains("grid")) throw InvalidParameter("config without \"setting\" needs a \"grid\"");
    }
    if (j.contains("task") && parse_task(j.at("task").get<std::string>()) != config.task) {
      throw InvalidParameter("\"task\" does not match the setting's task");
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      const char* param_key = config.task == Task::kCommunity ? "kappa" : "alpha";
      const bool half = g.contains("B") && g.at("B").is_string();
      if (half && g.at("B").get<std::string>() != "n/2") throw InvalidParameter("grid B must be numbers or \"n/2\"");
      config.grid = expand_grid(config.task, read_list<std::size_t>(g, "n"), read_list<double>(g, "p11"),
                                read_list<double>(g, param_key), half ? std::vector<std::size_t>{} : read_list<std::size_t>(g, "B"),
                                half, read_list<std::size_t>(g, "qn"), g.value("p12", kCommunityP12));
    }
    if (j.contains("schemes")) {
      config.schemes.clear();
      for (const auto& s : j.at("schemes")) {
        const auto scheme = parse_scheme(s.get<std::string>());
        if (!scheme) throw InvalidParameter("unknown scheme '" + s.get<std::string>() + "'");
        config.schemes.push_back(*scheme);
      }
    }
    if (j.contains("mc_reps")) config.reps = j.at("mc_reps").get<std::size_t>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) config.output = j.at("output").get<std::string>();
    if (j.contains("timing")) config.timing = j.at("timing").get<bool>();
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("bad config field: ") + e.what());
  }
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t graph_seed(std::uint64_t master, std::size_t grid_index, std::size_t rep) {
  return derive_seed({master, kGraphStream, grid_index, rep});
}

std::uint64_t run_seed(std::uint64_t master, std::size_t grid_index, Scheme scheme, std::size_t rep) {
  return derive_seed({master, grid_index, scheme_index(scheme), rep});
}

std::vector<ResultRow> run_setting(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const std::size_t cells = config.grid.size() * config.reps;
  std::vector<std::vector<ResultRow>> per_cell(cells);

  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t gi = cell / config.reps;
    const std::size_t rep = cell % config.reps;
    const GridPoint& point = config.grid[gi];
    auto& rows = per_cell[cell];
    auto push = [&](Scheme scheme, std::string metric, std::optional<double> value, std::optional<double> seconds) {
      ResultRow r;
      r.grid_index = gi;
      r.scheme_index = scheme_index(scheme);
      r.setting = config.setting;
      r.task = config.task;
      r.scheme = scheme;
      r.point = point;
      r.rep = rep;
      r.metric = std::move(metric);
      r.value = value;
      r.seconds = seconds;
      rows.push_back(std::move(r));
    };

    std::optional<GeneratedGraph> gen;
    try {
      if (config.task == Task::kCommunity) {
        const auto k1 = static_cast<std::size_t>(std::llround(point.param * static_cast<double>(point.n)));
        if (k1 == 0 || k1 >= point.n) throw InvalidParameter("kappa leaves a community empty");
        SbmSpec spec;
        spec.n = point.n;
        spec.block_sizes = {k1, point.n - k1};
        spec.p = {{point.p11, point.p12}, {point.p12, point.p22}};
        gen = generate_sbm(spec, graph_seed(config.seed, gi, rep));
      } else {
        gen = cp_sbm_from_settings(point.n, point.p11, point.param, graph_seed(config.seed, gi, rep));
      }
    } catch (const Error&) {
      for (Scheme s : config.schemes) push(s, "error", std::nullopt, std::nullopt);
      return;
    }

    const double q = static_cast<double>(point.qn) / static_cast<double>(point.n);
    for (Scheme s : config.schemes) {
      const auto start = std::chrono::steady_clock::now();
      try {
        double first = 0.0, second = 0.0;
        if (config.task == Task::kCommunity) {
          PaceOptions opts;
          opts.k = 2;
          opts.q = q;
          opts.b = point.b;
          opts.scheme = s;
          opts.seed = run_seed(config.seed, gi, s, rep);
          const PaceResult res = run_pace(gen->graph, opts);
          first = ari(res.labels, gen->truth);
          second = modularity(gen->graph, res.labels);
        } else {
          CpOptions opts;
          opts.q = q;
          opts.b = point.b;
          opts.scheme = s;
          opts.seed = run_seed(config.seed, gi, s, rep);
          const CoreScore res = run_cp(gen->graph, opts);
          first = auc(res.c_hat, gen->truth);
          second = misclustering_cp(res.c_hat, gen->truth);
        }
        std::optional<double> seconds;
        if (config.timing) {
          seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        const bool community = config.task == Task::kCommunity;
        push(s, community ? "ari" : "auc", first, seconds);
        push(s, community ? "modularity" : "delta", second, seconds);
      } catch (const Error&) {
        push(s, "error", std::nullopt, std::nullopt);
      }
    }
  });

  std::vector<ResultRow> rows;
  for (auto& cell : per_cell) {
    for (auto& r : cell) rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.grid_index, a.scheme_index, a.rep, a.metric) <
           std::tie(b.grid_index, b.scheme_index, b.rep, b.metric);
  });
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "setting,task,scheme,n,p11,p12,p22,alpha_or_kappa,B,qn,rep,metric,value,seconds\n";
  for (const ResultRow& r : rows) {
    if (r.setting > 0) out << r.setting;
    out << ',' << task_name(r.task) << ',' << scheme_name(r.scheme) << ',' << r.point.n << ','
        << format_double(r.point.p11) << ',' << format_double(r.point.p12) << ',' << format_double(r.point.p22)
        << ',' << format_double(r.point.param) << ',' << r.point.b << ',' << r.point.qn << ',' << r.rep << ','
        << r.metric << ',';
    if (r.value) out << format_double(*r.value);
    out << ',';
    if (r.seconds) out << format_double(*r.seconds);
    out << '\n';
  }
}

std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows, std::string_view metric) {
  std::map<std::pair<std::size_t, std::size_t>, CellSummary> cells;
  for (const ResultRow& r : rows) {
    if (r.metric != metric || !r.value) continue;
    CellSummary& c = cells[{r.grid_index, r.scheme_index}];
    c.grid_index = r.grid_index;
    c.scheme = r.scheme;
    c.point = r.point;
    c.mean += *r.value;
    ++c.count;
  }
  std::vector<CellSummary> out;
  for (auto& [key, c] : cells) {
    c.mean /= static_cast<double>(c.count);
    out.push_back(c);
  }
  return out;
}

RealReport run_real(Task task, const Graph& g, const std::optional<NodeLabels>& truth, const RealParams& params,
                    unsigned workers) {
  if (truth && truth->size() != g.num_nodes()) throw InvalidInput("truth labels do not cover every node");
  if (params.schemes.empty()) throw InvalidParameter("at least one scheme is required");
  RealReport report;
  report.task = task;

  if (task == Task::kCommunity) {
    const Component lcc = largest_connected_component(g);
    const Graph& h = lcc.graph;
    report.n = h.num_nodes();
    report.m = h.num_edges();
    std::optional<NodeLabels> sub_truth;
    if (truth) {
      sub_truth.emplace();
      for (NodeId v : lcc.original_ids) sub_truth->push_back((*truth)[v]);
    }
    auto largest_share = [&](const NodeLabels& labels) {
      std::map<std::int32_t, std::size_t> sizes;
      for (auto l : labels) ++sizes[l];
      std::size_t best = 0;
      for (const auto& [l, c] : sizes) best = std::max(best, c);
      return static_cast<double>(best) / static_cast<double>(labels.size());
    };
    if (sub_truth) report.rows.push_back({"Oracle", largest_share(*sub_truth), modularity(h, *sub_truth), std::nullopt});
    const double q = static_cast<double>(std::min(params.qn, h.num_nodes())) / static_cast<double>(h.num_nodes());
    for (Scheme s : params.schemes) {
      PaceOptions opts;
      opts.k = params.k;
      opts.q = q;
      opts.b = params.b;
      opts.scheme = s;
      opts.seed = derive_seed({params.seed, scheme_index(s)});
      opts.workers = workers;
      const PaceResult res = run_pace(h, opts);
      RealRow row{std::string(scheme_name(s)), largest_share(res.labels), modularity(h, res.labels), std::nullopt};
      if (sub_truth) row.ari = ari(res.labels, *sub_truth);
      report.rows.push_back(row);
    }
    return report;
  }

  report.n = g.num_nodes();
  report.m = g.num_edges();
  if (params.full) {
    const NodeLabels core = optimize_core_labels(g, params.seed);
    const auto k = std::count(core.begin(), core.end(), 1);
    report.rows.push_back({"Full", static_cast<double>(k), be_metric(g, core), std::nullopt});
  }
  const double q = static_cast<double>(std::min(params.qn, g.num_nodes())) / static_cast<double>(g.num_nodes());
  for (Scheme s : params.schemes) {
    CpOptions opts;
    opts.q = q;
    opts.b = params.b;
    opts.scheme = s;
    opts.seed = derive_seed({params.seed, scheme_index(s)});
    opts.workers = workers;
    const CoreScore score = run_cp(g, opts);
    const SweepResult sweep = binarize_by_sweep(g, score.c_hat);
    report.rows.push_back({std::string(scheme_name(s)), static_cast<double>(sweep.core_size), sweep.be, std::nullopt});
    std::vector<NodeId> core;
    for (std::size_t v = 0; v < sweep.labels.size(); ++v) {
      if (sweep.labels[v] == 1) core.push_back(static_cast<NodeId>(v));
    }
    report.cores.push_back(std::move(core));
  }
  const std::size_t s = report.cores.size();
  report.jaccard.assign(s, std::vector<double>(s, 1.0));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      report.jaccard[i][j] = report.jaccard[j][i] = jaccard(report.cores[i], report.cores[j]);
    }
  }
  return report;
}

void write_real_table(std::ostream& out, const RealReport& report) {
  if (report.task == Task::kCommunity) {
    const bool with_ari = std::any_of(report.rows.begin(), report.rows.end(), [](const RealRow& r) { return r.ari.has_value(); });
    out << "method,size,Q" << (with_ari ? ",ARI" : "") << '\n';
    for (const RealRow& r : report.rows) {
      out << r.method << ',' << format_double(r.size) << ',' << format_double(r.score);
      if (with_ari) out << ',' << (r.ari ? format_double(*r.ari) : "");
      out << '\n';
    }
    return;
  }
  out << "method,k,BE\n";
  for (const RealRow& r : report.rows) {
    out << r.method << ',' << static_cast<std::size_t>(r.size) << ',' << format_double(r.score) << '\n';
  }
}

void write_jaccard_csv(std::ostream& out, const RealReport& report, const std::vector<Scheme>& schemes) {
  out << "scheme";
  for (Scheme s : schemes) out << ',' << scheme_name(s);
  out << '\n';
  for (std::size_t i = 0; i < report.jaccard.size(); ++i) {
    out << scheme_name(schemes[i]);
    for (double v : report.jaccard[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

unsigned resolve_workers(std::optional<unsigned> requested) {
  unsigned w = 1;
  if (requested) {
    w = *requested;
  } else if (const char* env = std::getenv("SUBSAMP_WORKERS"); env && *env) {
    const std::string_view text(env);
    unsigned parsed = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw InvalidParameter("SUBSAMP_WORKERS must be a positive integer");
    }
    w = parsed;
  }
  if (w == 0) throw InvalidParameter("worker count must be at least 1");
  return w;
}

}  // namespace subsamp
