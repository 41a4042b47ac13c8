// Copyright 2026 The tksvm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: data generation, training, feature reports, phase
// diagrams and accuracy benchmarks. Every run writes its resolved
// configuration next to its outputs so results can be reproduced exactly.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tksvm/eigensolver.hpp"
#include "tksvm/errors.hpp"
#include "tksvm/features.hpp"
#include "tksvm/interpret.hpp"
#include "tksvm/phase_graph.hpp"
#include "tksvm/sampling.hpp"
#include "tksvm/snapshot.hpp"
#include "tksvm/stabilizer.hpp"
#include "tksvm/svm.hpp"
#include "tksvm/version.hpp"

namespace fs = std::filesystem;
using namespace tksvm;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// "a:b:n" -> n points linearly spaced over [a, b]; "a,b,c" -> explicit list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a, b;
    int n;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
      throw CLI::ValidationError("grid", "expected min:max:count in '" + text + "'");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * i / static_cast<double>(n - 1));
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw CLI::ValidationError("list", "empty list '" + text + "'");
  return out;
}

void write_resolved_config(CLI::App& app, const fs::path& where) {
  std::ofstream f(where);
  if (!f) throw io_error("cannot write config echo: " + where.string());
  f << "# tksvm " << kVersion << "\n" << app.config_to_str(true, true);
}

ClusterSpec make_cluster_spec(const Lattice& lat, int n, int cells, const std::string& shape,
                              bool overlap) {
  if (lat.kind == Lattice::Kind::chain) return ClusterSpec::chain_string(lat, n, overlap);
  if (shape == "vertex") return ClusterSpec::square_vertex(lat);
  if (shape == "plaquette") return ClusterSpec::square_plaquette(lat);
  return ClusterSpec::square_cells(lat, cells, overlap);
}

// Deterministic in-place shuffle shared by the train/bench pipelines.
void shuffle_training_set(TrainingSet& ts, std::uint64_t seed) {
  Rng rng(splitmix64_mix(seed ^ 0x5bf03635ull));
  for (std::size_t i = ts.vectors.size(); i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(ts.vectors[i - 1], ts.vectors[j]);
    std::swap(ts.labels[i - 1], ts.labels[j]);
  }
}

struct TrainOutcome {
  TrainedModel model;
  double holdout_accuracy;
};

// Physical snapshots against the internally generated random class:
// batch both, shuffle, hold out 20%, train on the rest.
TrainOutcome train_against_random(const std::vector<Snapshot>& phys, const SnapshotSet& meta,
                                  const ClusterSpec& spec, int rank, const Povm& povm,
                                  std::size_t group_size, double nu, std::uint64_t seed,
                                  int threads) {
  const auto rand_snaps =
      random_snapshots(meta.lattice, povm, phys.size(), splitmix64_mix(seed ^ 0x9c0de5eedull),
                       threads);
  const std::size_t n_cl = enumerate_clusters(spec).size();
  const std::size_t g =
      group_size ? group_size : default_group_size(rank, n_cl, phys.size());
  TrainingSet all;
  for (auto& v : batch_feature_vectors(phys, spec, rank, povm, g, threads)) {
    all.vectors.push_back(std::move(v));
    all.labels.push_back(+1);
  }
  for (auto& v : batch_feature_vectors(rand_snaps, spec, rank, povm, g, threads)) {
    all.vectors.push_back(std::move(v));
    all.labels.push_back(-1);
  }
  shuffle_training_set(all, seed);
  const std::size_t n_test = std::max<std::size_t>(1, all.vectors.size() / 5);
  TrainingSet test, trainset;
  for (std::size_t i = 0; i < all.vectors.size(); ++i) {
    auto& dst = i < n_test ? test : trainset;
    dst.vectors.push_back(std::move(all.vectors[i]));
    dst.labels.push_back(all.labels[i]);
  }
  SvmOptions opt;
  opt.nu = nu;
  TrainedModel model = train(trainset, opt);
  model.cluster = spec;
  const double acc = accuracy(model, test);
  return {std::move(model), acc};
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string model;
  int length = 12;
  int lx = 3, ly = 3;
  double h1 = 0, h2 = 0, hx = 0, hz = 0;
  std::string method = "auto";
  std::string bloch = "1,0,0";
  bool stagger = false;
  std::size_t shots = 5000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sample(const SampleArgs& a, int threads, CLI::App& app) {
  SnapshotSet set;
  set.seed = a.seed;
  set.extra["model"] = a.model;

  if (a.model == "cluster") {
    set.lattice = Lattice::chain(a.length);
    set.extra["coords"] = fmt_double(a.h1) + "," + fmt_double(a.h2);
    const bool pure = a.h1 == 0.0 && a.h2 == 0.0;
    const std::string method = a.method == "auto" ? (pure ? "tableau" : "ed") : a.method;
    set.extra["method"] = method;
    if (method == "tableau") {
      if (!pure) throw CLI::ValidationError("--method", "tableau sampling needs h1 = h2 = 0");
      set.snapshots = sample_pauli6_tableau(prepare_cluster_state(a.length), a.shots, a.seed, threads);
    } else {
      const auto gs = ground_state(HamiltonianSpec::cluster_chain(a.length, a.h1, a.h2));
      set.snapshots = sample_pauli6_statevector(gs.psi, a.shots, a.seed, threads);
    }
  } else if (a.model == "toric") {
    set.lattice = Lattice::square_link(a.lx, a.ly);
    set.extra["coords"] = fmt_double(a.hx) + "," + fmt_double(a.hz);
    const bool pure = a.hx == 0.0 && a.hz == 0.0;
    const std::string method = a.method == "auto" ? (pure ? "tableau" : "ed") : a.method;
    set.extra["method"] = method;
    if (method == "tableau") {
      if (!pure) throw CLI::ValidationError("--method", "tableau sampling needs hx = hz = 0");
      set.snapshots = sample_pauli6_tableau(prepare_toric_code(a.lx, a.ly), a.shots, a.seed, threads);
    } else {
      const auto gs = ground_state(HamiltonianSpec::toric_code(a.lx, a.ly, a.hx, a.hz));
      set.snapshots = sample_pauli6_statevector(gs.psi, a.shots, a.seed, threads);
    }
  } else if (a.model == "product") {
    set.lattice = Lattice::chain(a.length);
    const auto comps = parse_grid(a.bloch);
    if (comps.size() != 3) throw CLI::ValidationError("--bloch", "expected bx,by,bz");
    std::vector<Vec3> blochs(a.length, Vec3{comps[0], comps[1], comps[2]});
    if (a.stagger)
      for (int i = 1; i < a.length; i += 2)
        for (int c = 0; c < 3; ++c) blochs[i][c] = -blochs[i][c];
    set.extra["method"] = "product";
    set.snapshots = sample_product(blochs, pauli6(), a.shots, a.seed, threads);
  } else if (a.model == "random") {
    set.lattice = Lattice::chain(a.length);
    set.extra["method"] = "random";
    set.snapshots = random_snapshots(set.lattice, pauli6(), a.shots, a.seed, threads);
  } else {
    throw CLI::ValidationError("--model", "unknown model '" + a.model + "'");
  }

  save_snapshots(a.out, set);
  write_resolved_config(app, a.out + ".cfg");
  std::cout << "wrote " << a.out << ": " << set.snapshots.size() << " snapshots, lattice "
            << set.lattice.kind_name() << " " << lattice_extent_string(set.lattice) << ", seed "
            << a.seed << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  int rank = 3;
  int n = 3;
  int cells = 2;
  std::string shape = "cells";
  bool overlap = false;
  double nu = 0.5;
  std::size_t group_size = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_train(const TrainArgs& a, int threads, CLI::App& app) {
  const SnapshotSet set = load_snapshots(a.data);
  const Povm povm = povm_by_name(set.povm_name);
  const ClusterSpec spec = make_cluster_spec(set.lattice, a.n, a.cells, a.shape, a.overlap);
  const auto res = train_against_random(set.snapshots, set, spec, a.rank, povm, a.group_size,
                                        a.nu, a.seed, threads);
  save_model(a.out, res.model);
  write_resolved_config(app, a.out + ".cfg");
  std::cout << "model " << a.out << ": dim " << res.model.dim << ", support vectors "
            << res.model.support_count() << ", bias " << res.model.bias
            << ", held-out accuracy " << res.holdout_accuracy << "\n";
  if (res.holdout_accuracy < 0.6)
    std::cout << "warning: accuracy close to chance; the data may carry no rank-" << a.rank
              << " signal at this sampling\n";
  return 0;
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesArgs {
  std::string model;
  int top_k = 3;
  double rho = 0.2;
  std::string out_dir;
};

int run_features(const FeaturesArgs& a, CLI::App& app) {
  const TrainedModel model = load_model(a.model);
  fs::create_directories(a.out_dir);
  const auto cols = rank_columns(model, a.top_k);
  nlohmann::json all = nlohmann::json::array();
  std::ofstream text(fs::path(a.out_dir) / "report.txt");
  if (!text) throw io_error("cannot write report in " + a.out_dir);
  for (const auto nu_bar : cols) {
    const auto col = coefficient_column(model, nu_bar);
    const auto rep = extract_features(col, a.rho, model.r, model.n);
    write_report_text(text, rep);
    write_report_text(std::cout, rep);
    all.push_back(report_to_json(rep));
    std::ofstream csv(fs::path(a.out_dir) / ("column_" + std::to_string(nu_bar) + ".csv"));
    write_column_csv(csv, col);
  }
  nlohmann::json top;
  top["columns"] = std::move(all);
  top["rho"] = a.rho;
  top["feature_count"] = feature_count(model, a.rho);
  std::ofstream js(fs::path(a.out_dir) / "report.json");
  js << top.dump(1) << "\n";
  write_resolved_config(app, fs::path(a.out_dir) / "config.cfg");
  return 0;
}

// ---------------------------------------------------------------------------
// phase-diagram
// ---------------------------------------------------------------------------

struct PhaseDiagramArgs {
  std::string data_dir;
  std::string generate;  // "", "cluster" or "toric"
  int length = 12;
  int lx = 2, ly = 2;
  std::string grid1 = "0:2:5";
  std::string grid2 = "-2:0.5:5";
  std::size_t shots = 5000;
  std::uint64_t seed = 0;
  int rank = 3;
  int n = 3;
  int cells = 2;
  std::string shape = "cells";
  bool overlap = false;
  double nu = 0.5;
  std::size_t group_size = 0;
  double b_c = 100.0;
  std::string mode = "histogram";
  int bins = 64;
  int min_occupancy = 2;
  std::string out_dir;
};

DatasetGrid load_grid_from_dir(const std::string& dir, Lattice& lattice_out, std::string& povm_out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw io_error("phase-diagram: need at least 2 snapshot files in " + dir);
  DatasetGrid grid;
  bool first = true;
  for (const auto& f : files) {
    SnapshotSet set = load_snapshots(f.string());
    if (first) {
      lattice_out = set.lattice;
      povm_out = set.povm_name;
      first = false;
    } else if (!(set.lattice == lattice_out) || set.povm_name != povm_out) {
      throw io_error("phase-diagram: datasets disagree on lattice or povm: " + f.string());
    }
    DatasetGrid::Point p;
    if (auto it = set.extra.find("coords"); it != set.extra.end())
      p.coords = parse_grid(it->second);
    else
      p.coords = {static_cast<double>(grid.points.size())};
    p.snapshots = std::move(set.snapshots);
    grid.points.push_back(std::move(p));
  }
  return grid;
}

int run_phase_diagram(const PhaseDiagramArgs& a, int threads, CLI::App& app) {
  fs::create_directories(a.out_dir);
  Lattice lattice = Lattice::chain(std::max(a.length, 3));
  std::string povm_name = "pauli6";
  DatasetGrid grid;

  if (!a.generate.empty()) {
    const auto g1 = parse_grid(a.grid1);
    const auto g2 = parse_grid(a.grid2);
    const fs::path ddir = fs::path(a.out_dir) / "datasets";
    fs::create_directories(ddir);
    std::size_t index = 0;
    for (const double c2 : g2)
      for (const double c1 : g1) {
        SnapshotSet set;
        set.seed = a.seed + index;
        set.extra["coords"] = fmt_double(c1) + "," + fmt_double(c2);
        set.extra["model"] = a.generate;
        set.extra["method"] = "ed";
        GroundState gs = a.generate == "cluster"
                             ? ground_state(HamiltonianSpec::cluster_chain(a.length, c1, c2))
                             : ground_state(HamiltonianSpec::toric_code(a.lx, a.ly, c1, c2));
        set.lattice = a.generate == "cluster" ? Lattice::chain(a.length)
                                              : Lattice::square_link(a.lx, a.ly);
        set.snapshots = sample_pauli6_statevector(gs.psi, a.shots, set.seed, threads);
        char name[64];
        std::snprintf(name, sizeof(name), "point_%03zu.txt", index);
        save_snapshots((ddir / name).string(), set);
        ++index;
      }
    grid = load_grid_from_dir(ddir.string(), lattice, povm_name);
  } else {
    if (a.data_dir.empty())
      throw CLI::ValidationError("--data-dir", "either --data-dir or --generate is required");
    grid = load_grid_from_dir(a.data_dir, lattice, povm_name);
  }

  // Bias matrix: reuse the cached graph when present, otherwise run the
  // pairwise classifications and cache it.
  const fs::path graph_path = fs::path(a.out_dir) / "graph.json";
  PhaseGraph graph;
  if (fs::exists(graph_path)) {
    graph = load_graph(graph_path.string());
    if (graph.size() != static_cast<int>(grid.size()))
      throw io_error("cached graph.json does not match the dataset count; remove it to retrain");
    std::cout << "reusing cached bias matrix " << graph_path.string() << "\n";
  } else {
    PairwiseOptions opt;
    opt.cluster = make_cluster_spec(lattice, a.n, a.cells, a.shape, a.overlap);
    opt.rank = a.rank;
    opt.povm = povm_by_name(povm_name);
    opt.group_size = a.group_size;
    opt.nu = a.nu;
    opt.threads = threads;
    const auto res = pairwise_biases(grid, opt);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    graph.biases = res.biases;
    for (const auto& p : grid.points) graph.coords.push_back(p.coords);
  }
  graph.b_c = a.b_c;
  save_graph(graph_path.string(), graph);

  const PartitionMode mode =
      a.mode == "sign" ? PartitionMode::sign : PartitionMode::histogram;
  const auto part = partition_graph(graph, mode, a.bins, a.min_occupancy);

  {
    std::ofstream csv(fs::path(a.out_dir) / "labels.csv");
    const std::size_t arity = graph.coords.empty() ? 0 : graph.coords[0].size();
    for (std::size_t c = 0; c < arity; ++c) csv << "coord" << c << ",";
    csv << "label,fiedler\n";
    for (int i = 0; i < graph.size(); ++i) {
      for (std::size_t c = 0; c < arity; ++c) csv << fmt_double(graph.coords[i][c]) << ",";
      csv << part.labels[i] << "," << fmt_double(part.fiedler_vector(i)) << "\n";
    }
  }
  if (!part.histogram.empty()) {
    std::ofstream csv(fs::path(a.out_dir) / "histogram.csv");
    csv << "bin,low,high,count\n";
    const double span = part.hist_max - part.hist_min;
    const int nb = static_cast<int>(part.histogram.size());
    for (int b = 0; b < nb; ++b)
      csv << b << "," << fmt_double(part.hist_min + span * b / nb) << ","
          << fmt_double(part.hist_min + span * (b + 1) / nb) << "," << part.histogram[b] << "\n";
  }
  write_resolved_config(app, fs::path(a.out_dir) / "config.cfg");
  std::cout << "phase diagram: " << grid.size() << " vertices, " << part.n_parts
            << " parts (lambda2 = " << part.lambda2 << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string l_list = "6,12";
  std::string shots_list = "500,1000,2000,4000";
  std::string rn_list = "3";
  int seeds = 3;
  double nu = 0.5;
  bool overlap = true;
  std::string out;
};

int run_bench(const BenchArgs& a, int threads, CLI::App& app) {
  const auto lengths = parse_int_list(a.l_list);
  const auto shots_values = parse_int_list(a.shots_list);
  const auto ranks = parse_int_list(a.rn_list);
  std::ofstream csv(a.out);
  if (!csv) throw io_error("cannot open for writing: " + a.out);
  csv << "r,n,L,shots,clusters_total,group_size,seed,accuracy\n";
  for (const int rn : ranks)
    for (const int length : lengths) {
      if (rn > length) continue;
      if (!a.overlap && length % rn != 0) continue;
      const auto lat = Lattice::chain(length);
      const auto spec = ClusterSpec::chain_string(lat, rn, a.overlap);
      const auto n_cl = enumerate_clusters(spec).size();
      const auto tableau = prepare_cluster_state(length);
      for (const int shots : shots_values)
        for (int seed = 0; seed < a.seeds; ++seed) {
          const std::uint64_t base = splitmix64_mix(seed * 7919 + shots);
          SnapshotSet meta;
          meta.lattice = lat;
          const auto phys = sample_pauli6_tableau(tableau, shots, base, threads);
          const auto res = train_against_random(phys, meta, spec, rn, pauli6(), 0, a.nu,
                                                base ^ 0xbe9cull, threads);
          // Fresh data for an unbiased test accuracy.
          const auto test_phys = sample_pauli6_tableau(tableau, shots, base + 1, threads);
          const auto test_rand = random_snapshots(lat, pauli6(), shots, base + 2, threads);
          const std::size_t g = default_group_size(rn, n_cl, shots);
          TrainingSet test;
          for (auto& v : batch_feature_vectors(test_phys, spec, rn, pauli6(), g, threads)) {
            test.vectors.push_back(std::move(v));
            test.labels.push_back(+1);
          }
          for (auto& v : batch_feature_vectors(test_rand, spec, rn, pauli6(), g, threads)) {
            test.vectors.push_back(std::move(v));
            test.labels.push_back(-1);
          }
          const double acc = accuracy(res.model, test);
          csv << rn << "," << rn << "," << length << "," << shots << ","
              << static_cast<std::size_t>(shots) * n_cl << "," << g << "," << seed << ","
              << fmt_double(acc) << "\n";
        }
    }
  write_resolved_config(app, a.out + ".cfg");
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensorial-kernel SVM for POVM snapshot data"};
  app.set_version_flag("--version", std::string("tksvm ") + kVersion);
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "generate snapshot datasets");
  sample->add_option("--model", sa.model, "cluster | toric | product | random")->required();
  sample->add_option("--L", sa.length, "chain length");
  sample->add_option("--Lx", sa.lx, "torus extent x");
  sample->add_option("--Ly", sa.ly, "torus extent y");
  sample->add_option("--h1", sa.h1, "cluster model field h1 (>= 0)");
  sample->add_option("--h2", sa.h2, "cluster model coupling h2");
  sample->add_option("--hx", sa.hx, "toric field hx (>= 0)");
  sample->add_option("--hz", sa.hz, "toric field hz (>= 0)");
  sample->add_option("--method", sa.method, "auto | tableau | ed");
  sample->add_option("--bloch", sa.bloch, "product state Bloch vector bx,by,bz");
  sample->add_flag("--stagger", sa.stagger, "flip the product state on odd sites");
  sample->add_option("--shots", sa.shots, "number of snapshots")->required();
  sample->add_option("--seed", sa.seed, "RNG seed");
  sample->add_option("--out", sa.out, "output snapshot file")->required();

  TrainArgs ta;
  auto* traincmd = app.add_subcommand("train", "train against the random class");
  traincmd->add_option("--data", ta.data, "snapshot file (class +1)")->required();
  traincmd->add_option("--r", ta.rank, "monomial rank")->required();
  traincmd->add_option("--n", ta.n, "chain cluster length");
  traincmd->add_option("--cells", ta.cells, "square-link cluster cells k (k x k)");
  traincmd->add_option("--cluster-shape", ta.shape, "cells | vertex | plaquette");
  traincmd->add_flag("--overlap", ta.overlap, "overlapping cluster placements");
  traincmd->add_option("--nu", ta.nu, "nu-SVM parameter in (0, 1]");
  traincmd->add_option("--group-size", ta.group_size, "snapshots per feature vector (0 = auto)");
  traincmd->add_option("--seed", ta.seed, "seed for the random class and the split");
  traincmd->add_option("--out", ta.out, "output model file")->required();

  FeaturesArgs fa;
  auto* feat = app.add_subcommand("features", "rank columns and extract order parameters");
  feat->add_option("--model", fa.model, "model file")->required();
  feat->add_option("--top-k", fa.top_k, "number of columns to report");
  feat->add_option("--rho", fa.rho, "relative hit threshold in (0, 1)");
  feat->add_option("--out-dir", fa.out_dir, "report directory")->required();

  PhaseDiagramArgs pa;
  auto* phase = app.add_subcommand("phase-diagram", "pairwise biases, Fiedler partition");
  phase->add_option("--data-dir", pa.data_dir, "directory of snapshot files");
  phase->add_option("--generate", pa.generate, "generate grid datasets: cluster | toric");
  phase->add_option("--L", pa.length, "chain length for --generate cluster");
  phase->add_option("--Lx", pa.lx, "torus extent x for --generate toric");
  phase->add_option("--Ly", pa.ly, "torus extent y for --generate toric");
  phase->add_option("--grid1", pa.grid1, "first coupling grid (min:max:count or list)");
  phase->add_option("--grid2", pa.grid2, "second coupling grid");
  phase->add_option("--shots", pa.shots, "snapshots per grid point");
  phase->add_option("--seed", pa.seed, "base RNG seed");
  phase->add_option("--r", pa.rank, "monomial rank");
  phase->add_option("--n", pa.n, "chain cluster length");
  phase->add_option("--cells", pa.cells, "square-link cluster cells");
  phase->add_option("--cluster-shape", pa.shape, "cells | vertex | plaquette");
  phase->add_flag("--overlap", pa.overlap, "overlapping cluster placements");
  phase->add_option("--nu", pa.nu, "nu-SVM parameter");
  phase->add_option("--group-size", pa.group_size, "snapshots per feature vector (0 = auto)");
  phase->add_option("--b-c", pa.b_c, "Lorentzian weight scale");
  phase->add_option("--mode", pa.mode, "sign | histogram");
  phase->add_option("--bins", pa.bins, "histogram bins");
  phase->add_option("--min-occupancy", pa.min_occupancy, "minimum vertices per band");
  phase->add_option("--out-dir", pa.out_dir, "output directory")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "accuracy vs samples and system size");
  bench->add_option("--L-list", ba.l_list, "chain lengths, comma separated");
  bench->add_option("--shots-list", ba.shots_list, "snapshot counts, comma separated");
  bench->add_option("--rn-list", ba.rn_list, "r = n values, comma separated");
  bench->add_option("--seeds", ba.seeds, "seeds per configuration");
  bench->add_option("--nu", ba.nu, "nu-SVM parameter");
  bench->add_flag("!--no-overlap", ba.overlap, "use non-overlapping clusters");
  bench->add_option("--out", ba.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
    if (sample->parsed()) return run_sample(sa, threads, app);
    if (traincmd->parsed()) return run_train(ta, threads, app);
    if (feat->parsed()) return run_features(fa, app);
    if (phase->parsed()) return run_phase_diagram(pa, threads, app);
    if (bench->parsed()) return run_bench(ba, threads, app);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
