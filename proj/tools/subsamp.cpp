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

// Command-line front end: sample, pace, cp, cp-full, generate, score,
// theory, experiment and real.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subsamp/community.hpp"
#include "subsamp/coreperiphery.hpp"
#include "subsamp/error.hpp"
#include "subsamp/generators.hpp"
#include "subsamp/graph.hpp"
#include "subsamp/harness.hpp"
#include "subsamp/metrics.hpp"
#include "subsamp/sampling.hpp"
#include "subsamp/theory.hpp"

namespace fs = std::filesystem;
using namespace subsamp;

namespace {

// Writes to `path`, or to stdout when it is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidInput("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Scheme scheme_or_throw(const std::string& tag) {
  const auto s = parse_scheme(tag);
  if (!s) throw InvalidParameter("unknown scheme '" + tag + "' (expected RN, DN, RE, BFS, DFS, RNN or RW)");
  return *s;
}

std::vector<Scheme> schemes_or_all(const std::vector<std::string>& tags) {
  if (tags.empty()) return {kAllSchemes.begin(), kAllSchemes.end()};
  std::vector<Scheme> out;
  for (const auto& t : tags) out.push_back(scheme_or_throw(t));
  return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidParameter("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// "node,...,value" rows; the last column is the score. Non-numeric lines
// (headers) are skipped.
std::vector<double> read_scores(const fs::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<double> scores(n, 0.0);
  std::vector<bool> seen(n, false);
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = csv_fields(line);
    if (fields.size() < 2) continue;
    std::size_t id = 0;
    const auto res = std::from_chars(fields.front().data(), fields.front().data() + fields.front().size(), id);
    if (res.ec != std::errc()) continue;
    if (id >= n) throw InvalidInput("score for unknown node " + fields.front());
    scores[id] = parse_doubles(fields.back()).at(0);
    seen[id] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw InvalidInput("scores do not cover every node");
  return scores;
}

std::vector<NodeId> read_node_set(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<NodeId> out;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    NodeId v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) throw InvalidInput("bad node id '" + token + "'");
    out.push_back(v);
  }
  return out;
}

ClusteringMatrixEstimate read_estimate(const fs::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<ClusteringMatrixEstimate::Entry> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto f = csv_fields(line);
    if (f.size() != 3 || f[0].empty() || !std::isdigit(static_cast<unsigned char>(f[0][0]))) continue;
    const auto i = static_cast<NodeId>(std::stoul(f[0]));
    const auto j = static_cast<NodeId>(std::stoul(f[1]));
    if (i >= n || j >= n || i == j) throw InvalidInput("bad estimate entry: " + line);
    entries.push_back({std::min(i, j), std::max(i, j), parse_doubles(f[2]).at(0)});
  }
  return ClusteringMatrixEstimate(n, 0.0, std::move(entries));
}

double proportion(std::optional<double> q, std::optional<std::size_t> qn, std::size_t n) {
  if (q && qn) throw InvalidParameter("give either --q or --qn, not both");
  if (qn) return static_cast<double>(*qn) / static_cast<double>(n);
  if (q) return *q;
  throw InvalidParameter("sub-sample size missing: give --q or --qn");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph sub-sampling and divide-and-conquer community / core-periphery detection"};
  app.require_subcommand(1);
  std::optional<unsigned> workers_flag;
  app.add_option("--workers", workers_flag, "Worker threads (default: SUBSAMP_WORKERS or 1)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw one sub-graph and write its edges in parent ids");
  std::string s_graph, s_scheme = "RN", s_out, s_nodes_out;
  std::size_t s_target = 0;
  std::uint64_t s_seed = 1;
  sample_cmd->add_option("--graph", s_graph, "Edge list")->required();
  sample_cmd->add_option("--scheme", s_scheme, "RN, DN, RE, BFS, DFS, RNN or RW");
  sample_cmd->add_option("--target", s_target, "Nodes in the sub-graph")->required();
  sample_cmd->add_option("--seed", s_seed);
  sample_cmd->add_option("--out", s_out, "Edge list output (default stdout)");
  sample_cmd->add_option("--nodes-out", s_nodes_out, "Sampled parent ids, one per line");

  // pace
  auto* pace_cmd = app.add_subcommand("pace", "Divide-and-conquer community detection");
  std::string p_graph, p_scheme = "RN", p_out, p_estimate_out, p_truth;
  std::size_t p_k = 2, p_b = 100;
  std::optional<double> p_q;
  std::optional<std::size_t> p_qn;
  std::uint64_t p_seed = 1;
  bool p_verbose = false;
  pace_cmd->add_option("--graph", p_graph)->required();
  pace_cmd->add_option("--k", p_k, "Number of communities");
  pace_cmd->add_option("--q", p_q, "Sub-sample proportion");
  pace_cmd->add_option("--qn", p_qn, "Nodes per sub-sample");
  pace_cmd->add_option("--b", p_b, "Number of sub-samples");
  pace_cmd->add_option("--scheme", p_scheme);
  pace_cmd->add_option("--seed", p_seed);
  pace_cmd->add_option("--out", p_out, "Labels CSV (default stdout)");
  pace_cmd->add_option("--estimate-out", p_estimate_out, "Clustering-matrix entries i,j,value");
  pace_cmd->add_option("--truth", p_truth, "Truth labels; adds ARI to the summary");
  pace_cmd->add_flag("--verbose", p_verbose, "Print threshold diagnostics to stderr");

  // cp
  auto* cp_cmd = app.add_subcommand("cp", "Divide-and-conquer core-periphery scores");
  std::string c_graph, c_scheme = "RN", c_out, c_labels_out, c_truth;
  std::size_t c_b = 100;
  std::optional<double> c_q;
  std::optional<std::size_t> c_qn;
  std::uint64_t c_seed = 1;
  cp_cmd->add_option("--graph", c_graph)->required();
  cp_cmd->add_option("--q", c_q);
  cp_cmd->add_option("--qn", c_qn);
  cp_cmd->add_option("--b", c_b);
  cp_cmd->add_option("--scheme", c_scheme);
  cp_cmd->add_option("--seed", c_seed);
  cp_cmd->add_option("--out", c_out, "node,count,c_hat CSV (default stdout)");
  cp_cmd->add_option("--labels-out", c_labels_out, "Binary core labels from the prefix sweep");
  cp_cmd->add_option("--truth", c_truth, "Binary core truth; adds AUC to the summary");

  // cp-full
  auto* full_cmd = app.add_subcommand("cp-full", "Greedy core-periphery labels on the whole graph");
  std::string f_graph, f_out;
  std::uint64_t f_seed = 1;
  full_cmd->add_option("--graph", f_graph)->required();
  full_cmd->add_option("--seed", f_seed, "Tie-breaking seed");
  full_cmd->add_option("--out", f_out, "Labels CSV (default stdout)");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Stochastic block model graph with truth labels");
  std::size_t g_n = 0;
  std::string g_blocks, g_p, g_out, g_truth_out;
  double g_sparsity = 1.0;
  std::uint64_t g_seed = 1;
  gen_cmd->add_option("--n", g_n)->required();
  gen_cmd->add_option("--blocks", g_blocks, "Block sizes, comma separated")->required();
  gen_cmd->add_option("--p", g_p, "K x K probabilities, row-major, comma separated")->required();
  gen_cmd->add_option("--sparsity", g_sparsity);
  gen_cmd->add_option("--seed", g_seed);
  gen_cmd->add_option("--out", g_out, "Edge list output")->required();
  gen_cmd->add_option("--truth-out", g_truth_out, "Truth labels (default <out>.truth.csv)");

  // score
  auto* score_cmd = app.add_subcommand("score", "Evaluate labels, scores or core sets");
  std::string m_metric, m_graph, m_labels, m_truth, m_scores, m_a, m_b, m_estimate;
  score_cmd->add_option("--metric", m_metric, "ari, auc, q, jaccard, delta or delta-tilde")
      ->required()
      ->check(CLI::IsMember({"ari", "auc", "q", "jaccard", "delta", "delta-tilde"}));
  score_cmd->add_option("--graph", m_graph, "Edge list (q; sets n for the others)");
  score_cmd->add_option("--labels", m_labels, "Estimated labels");
  score_cmd->add_option("--truth", m_truth, "Truth labels");
  score_cmd->add_option("--scores", m_scores, "node,...,value CSV");
  score_cmd->add_option("--set-a", m_a, "Node ids of the first core");
  score_cmd->add_option("--set-b", m_b, "Node ids of the second core");
  score_cmd->add_option("--estimate", m_estimate, "Clustering-matrix entries i,j,value");

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Closed-form core coverage for a CP-SBM");
  std::string t_scheme = "RN";
  CpSbmParams t_params;
  std::size_t t_reps = 0;
  std::uint64_t t_seed = 1;
  theory_cmd->add_option("--scheme", t_scheme);
  theory_cmd->add_option("--n", t_params.n)->required();
  theory_cmd->add_option("--k", t_params.k)->required();
  theory_cmd->add_option("--p11", t_params.p11)->required();
  theory_cmd->add_option("--p12", t_params.p12)->required();
  theory_cmd->add_option("--p22", t_params.p22)->required();
  theory_cmd->add_option("--q", t_params.q)->required();
  theory_cmd->add_option("--mc-reps", t_reps, "Monte Carlo replicates (0 = skip)");
  theory_cmd->add_option("--seed", t_seed);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Simulation settings 1-12 or a JSON grid");
  std::string e_config, e_out, e_scale = "desk";
  std::optional<int> e_setting;
  std::optional<std::size_t> e_reps;
  std::optional<std::uint64_t> e_seed;
  std::vector<std::string> e_schemes;
  bool e_timing = false;
  exp_cmd->add_option("--config", e_config, "JSON config");
  exp_cmd->add_option("--setting", e_setting, "Setting id 1-12");
  exp_cmd->add_option("--scale", e_scale)->check(CLI::IsMember({"desk", "paper"}));
  exp_cmd->add_option("--out", e_out, "Output directory (results.csv); default stdout");
  exp_cmd->add_option("--reps", e_reps, "Override replicate count");
  exp_cmd->add_option("--seed", e_seed, "Override master seed");
  exp_cmd->add_option("--schemes", e_schemes, "Override scheme list")->delimiter(',');
  exp_cmd->add_flag("--timing", e_timing, "Fill the seconds column");

  // real
  auto* real_cmd = app.add_subcommand("real", "Real-network community or core-periphery report");
  std::string r_task, r_graph, r_truth, r_out;
  RealParams r_params;
  std::vector<std::string> r_schemes;
  real_cmd->add_option("--task", r_task)->required()->check(CLI::IsMember({"community", "cp"}));
  real_cmd->add_option("--graph", r_graph)->required();
  real_cmd->add_option("--truth", r_truth, "Truth labels (community)");
  real_cmd->add_option("--k", r_params.k, "Number of communities");
  real_cmd->add_option("--qn", r_params.qn, "Nodes per sub-sample");
  real_cmd->add_option("--b", r_params.b, "Number of sub-samples");
  real_cmd->add_option("--seed", r_params.seed);
  real_cmd->add_option("--schemes", r_schemes)->delimiter(',');
  real_cmd->add_flag("--full", r_params.full, "CP: also optimize on the whole graph");
  real_cmd->add_option("--out", r_out, "Output directory (report.csv, jaccard.csv); default stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    const unsigned workers = resolve_workers(workers_flag);

    if (*sample_cmd) {
      const Graph g = read_edge_list(s_graph);
      Rng rng(s_seed);
      const NodeSample drawn = select_nodes(g, scheme_or_throw(s_scheme), s_target, rng);
      const SubGraph sub = induce(g, drawn);
      Output out(s_out);
      out.stream() << "# nodes " << g.num_nodes() << " edges " << sub.graph.num_edges() << '\n';
      for (const Edge& e : sub.graph.edges()) {
        out.stream() << sub.parent_ids[e.u] << ' ' << sub.parent_ids[e.v] << '\n';
      }
      if (!s_nodes_out.empty()) {
        Output nodes(s_nodes_out);
        for (NodeId v : sub.parent_ids) nodes.stream() << v << '\n';
      }
      if (drawn.filled_uniformly) std::cerr << "note: sample completed with uniform node draws\n";
    } else if (*pace_cmd) {
      const Graph g = read_edge_list(p_graph);
      PaceOptions opts;
      opts.k = p_k;
      opts.q = proportion(p_q, p_qn, g.num_nodes());
      opts.b = p_b;
      opts.scheme = scheme_or_throw(p_scheme);
      opts.seed = p_seed;
      opts.workers = workers;
      const PaceResult res = run_pace(g, opts);
      Output out(p_out);
      write_labels(out.stream(), res.labels);
      if (!p_estimate_out.empty()) {
        Output est(p_estimate_out);
        est.stream() << "i,j,value\n";
        for (const auto& e : res.estimate.entries()) {
          est.stream() << e.i << ',' << e.j << ',' << format_double(e.value) << '\n';
        }
      }
      std::cerr << "modularity," << format_double(modularity(g, res.labels)) << '\n';
      if (!p_truth.empty()) {
        std::cerr << "ari," << format_double(ari(res.labels, read_labels(fs::path(p_truth), g.num_nodes()))) << '\n';
      }
      if (p_verbose) {
        const auto& d = res.diagnostics;
        std::cerr << "target " << d.target << " beta " << d.beta << " percentile " << d.percentile_beta
                  << " min_N " << d.min_co_count << " median_N " << d.median_co_count << " below_beta "
                  << d.fraction_below_beta << " entries " << d.estimate_entries << " filled " << d.filled_samples
                  << '\n';
      }
    } else if (*cp_cmd) {
      const Graph g = read_edge_list(c_graph);
      CpOptions opts;
      opts.q = proportion(c_q, c_qn, g.num_nodes());
      opts.b = c_b;
      opts.scheme = scheme_or_throw(c_scheme);
      opts.seed = c_seed;
      opts.workers = workers;
      const CoreScore score = run_cp(g, opts);
      Output out(c_out);
      out.stream() << "node,count,c_hat\n";
      for (std::size_t v = 0; v < score.x.size(); ++v) {
        out.stream() << v << ',' << score.x[v] << ',' << format_double(score.c_hat[v]) << '\n';
      }
      const SweepResult sweep = binarize_by_sweep(g, score.c_hat);
      std::cerr << "k," << sweep.core_size << "\nBE," << format_double(sweep.be) << '\n';
      if (!c_labels_out.empty()) {
        Output labels(c_labels_out);
        write_labels(labels.stream(), sweep.labels);
      }
      if (!c_truth.empty()) {
        std::cerr << "auc," << format_double(auc(score.c_hat, read_labels(fs::path(c_truth), g.num_nodes()))) << '\n';
      }
      if (score.failed_samples > 0) std::cerr << "note: " << score.failed_samples << " sub-samples had no edges\n";
    } else if (*full_cmd) {
      const Graph g = read_edge_list(f_graph);
      const NodeLabels labels = optimize_core_labels(g, f_seed);
      Output out(f_out);
      write_labels(out.stream(), labels);
    } else if (*gen_cmd) {
      SbmSpec spec;
      spec.n = g_n;
      for (double b : parse_doubles(g_blocks)) {
        if (b < 0 || b != static_cast<double>(static_cast<std::size_t>(b))) {
          throw InvalidParameter("block sizes must be non-negative integers");
        }
        spec.block_sizes.push_back(static_cast<std::size_t>(b));
      }
      const auto flat = parse_doubles(g_p);
      const std::size_t k = spec.block_sizes.size();
      if (flat.size() != k * k) throw InvalidParameter("--p needs K*K values");
      spec.p.assign(k, std::vector<double>(k));
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) spec.p[a][b] = flat[a * k + b];
      }
      spec.sparsity = g_sparsity;
      const GeneratedGraph gen = generate_sbm(spec, g_seed);
      Output out(g_out);
      write_edge_list(out.stream(), gen.graph);
      Output truth(g_truth_out.empty() ? g_out + ".truth.csv" : g_truth_out);
      write_labels(truth.stream(), gen.truth);
    } else if (*score_cmd) {
      std::optional<Graph> g;
      if (!m_graph.empty()) g = read_edge_list(m_graph);
      auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw InvalidParameter(std::string("missing ") + flag);
      };
      auto count_lines = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open " + path);
        std::size_t n = 0;
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++n;
        }
        return n;
      };
      double value = 0.0;
      if (m_metric == "jaccard") {
        need(m_a, "--set-a");
        need(m_b, "--set-b");
        value = jaccard(read_node_set(m_a), read_node_set(m_b));
      } else if (m_metric == "q") {
        if (!g) throw InvalidParameter("missing --graph");
        const std::string& labels = m_labels.empty() ? m_truth : m_labels;
        need(labels, "--labels");
        value = modularity(*g, read_labels(fs::path(labels), g->num_nodes()));
      } else {
        need(m_truth, "--truth");
        const std::size_t n = g ? g->num_nodes() : count_lines(m_truth);
        const NodeLabels truth = read_labels(fs::path(m_truth), n);
        if (m_metric == "ari") {
          need(m_labels, "--labels");
          value = ari(read_labels(fs::path(m_labels), n), truth);
        } else if (m_metric == "auc" || m_metric == "delta") {
          need(m_scores, "--scores");
          const auto scores = read_scores(m_scores, n);
          value = m_metric == "auc" ? auc(scores, truth) : misclustering_cp(scores, truth);
        } else {
          need(m_estimate, "--estimate");
          value = misclustering_pace(read_estimate(m_estimate, n), truth);
        }
      }
      std::cout << m_metric << ',' << format_double(value) << '\n';
    } else if (*theory_cmd) {
      const Scheme scheme = scheme_or_throw(t_scheme);
      t_params.validate();
      std::cout << "scheme," << scheme_name(scheme) << '\n';
      std::cout << "xi," << format_double(xi(scheme, t_params)) << '\n';
      std::string limit;
      try {
        limit = format_double(xi_limit(scheme, t_params));
      } catch (const UnsupportedScheme&) {
      }
      std::cout << "xi_limit," << limit << '\n';
      std::cout << "expected_core_sampled," << format_double(t_params.q * static_cast<double>(t_params.k) * xi(scheme, t_params))
                << '\n';
      std::cout << "uncovered_core_fraction," << format_double(expected_uncovered_core_fraction(scheme, t_params))
                << '\n';
      if (t_reps > 0) {
        const McEstimate mc = mc_expected_core_sampled(t_params, scheme, t_reps, t_seed, workers);
        std::cout << "mc_mean," << format_double(mc.mean) << '\n';
        std::cout << "mc_std_error," << format_double(mc.std_error) << '\n';
        std::cout << "mc_reps," << mc.reps << '\n';
      }
    } else if (*exp_cmd) {
      ExperimentConfig config;
      if (!e_config.empty()) {
        if (e_setting) throw InvalidParameter("give either --config or --setting");
        config = read_config(e_config);
      } else if (e_setting) {
        config = setting_config(*e_setting, parse_scale(e_scale));
      } else {
        throw InvalidParameter("experiment needs --config or --setting");
      }
      if (e_reps) config.reps = *e_reps;
      if (e_seed) config.seed = *e_seed;
      if (!e_schemes.empty()) config.schemes = schemes_or_all(e_schemes);
      if (e_timing) config.timing = true;
      const auto rows = run_setting(config, workers);
      std::string path;
      if (!e_out.empty()) {
        fs::create_directories(e_out);
        path = (fs::path(e_out) / "results.csv").string();
      } else if (!config.output.empty()) {
        path = config.output;
      }
      Output out(path);
      write_results_csv(out.stream(), rows);
    } else if (*real_cmd) {
      const Task task = parse_task(r_task);
      const Graph g = read_edge_list(r_graph);
      std::optional<NodeLabels> truth;
      if (!r_truth.empty()) truth = read_labels(fs::path(r_truth), g.num_nodes());
      r_params.schemes = schemes_or_all(r_schemes);
      const RealReport report = run_real(task, g, truth, r_params, workers);
      if (r_out.empty()) {
        write_real_table(std::cout, report);
        if (task == Task::kCp) {
          std::cout << '\n';
          write_jaccard_csv(std::cout, report, r_params.schemes);
        }
      } else {
        fs::create_directories(r_out);
        Output table((fs::path(r_out) / "report.csv").string());
        write_real_table(table.stream(), report);
        if (task == Task::kCp) {
          Output jac((fs::path(r_out) / "jaccard.csv").string());
          write_jaccard_csv(jac.stream(), report, r_params.schemes);
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
