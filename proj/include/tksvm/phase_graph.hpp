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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "tksvm/errors.hpp"
#include "tksvm/features.hpp"
#include "tksvm/parallel.hpp"
#include "tksvm/rng.hpp"
#include "tksvm/snapshot.hpp"
#include "tksvm/svm.hpp"

namespace tksvm {

/// Lorentzian normalization of a bias into an edge weight in [0, 1):
/// w = 1 - b_c^2 / ((|b| - 1)^2 + b_c^2). Nondecreasing in |b| for |b| >= 1;
/// b_c sets the scale of "much larger than 1".
inline double lorentzian_weight(double b, double b_c) {
  if (!(b_c > 0)) throw std::invalid_argument("lorentzian_weight: b_c > 0 required");
  const double d = std::abs(b) - 1.0;
  return 1.0 - b_c * b_c / (d * d + b_c * b_c);
}

/// Snapshot datasets pinned to parameter-grid coordinates.
struct DatasetGrid {
  struct Point {
    std::vector<double> coords;
    std::vector<Snapshot> snapshots;
  };
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
};

/// Vertices, raw pairwise biases and the Lorentzian scale. Weighted edges are
/// derived on demand so b_c can be changed without retraining.
struct PhaseGraph {
  std::vector<std::vector<double>> coords;
  Eigen::MatrixXd biases;  // |b|, symmetric, zero diagonal
  double b_c = 100.0;

  int size() const { return static_cast<int>(biases.rows()); }

  Eigen::MatrixXd weights() const {
    const int m = size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) w(i, j) = lorentzian_weight(biases(i, j), b_c);
    return w;
  }
};

struct PairwiseOptions {
  ClusterSpec cluster;
  int rank = 3;
  Povm povm = pauli6();
  std::size_t group_size = 0;  // 0: default_group_size per point
  double nu = 0.5;
  SvmOptions svm{};
  int threads = 0;
};

struct PairwiseResult {
  Eigen::MatrixXd biases;
  std::vector<std::string> warnings;  // one entry per failed pair (weight 0)
};

/// Run the M(M-1)/2 binary classifications between all dataset pairs and
/// collect |bias|. The class assignment (+1 to the lower index) carries no
/// physical information. A pair whose training fails is recorded with bias 0,
/// which the Lorentzian maps to "different phase".
inline PairwiseResult pairwise_biases(const DatasetGrid& grid, const PairwiseOptions& opt) {
  const std::size_t m = grid.size();
  if (m < 2) throw std::invalid_argument("pairwise_biases: at least two datasets required");
  const auto n_clusters = enumerate_clusters(opt.cluster).size();

  std::vector<std::vector<FeatureVector>> batches(m);
  std::vector<std::string> point_errors(m);
  parallel_for(m, opt.threads, [&](std::size_t i) {
    try {
      const auto& snaps = grid.points[i].snapshots;
      const std::size_t g =
          opt.group_size ? opt.group_size : default_group_size(opt.rank, n_clusters, snaps.size());
      batches[i] = batch_feature_vectors(snaps, opt.cluster, opt.rank, opt.povm, g, 1);
    } catch (const std::exception& e) {
      point_errors[i] = e.what();
    }
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  PairwiseResult res;
  res.biases = Eigen::MatrixXd::Zero(m, m);
  std::vector<std::string> warn(pairs.size());
  SvmOptions svm_opt = opt.svm;
  svm_opt.nu = opt.nu;
  parallel_for(pairs.size(), opt.threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      if (!point_errors[i].empty() || !point_errors[j].empty())
        throw std::runtime_error(point_errors[i].empty() ? point_errors[j] : point_errors[i]);
      TrainingSet ts;
      for (const auto& v : batches[i]) {
        ts.vectors.push_back(v);
        ts.labels.push_back(+1);
      }
      for (const auto& v : batches[j]) {
        ts.vectors.push_back(v);
        ts.labels.push_back(-1);
      }
      const TrainedModel model = train(ts, svm_opt);
      res.biases(i, j) = res.biases(j, i) = std::abs(model.bias);
    } catch (const std::exception& e) {
      warn[k] = "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what();
      res.biases(i, j) = res.biases(j, i) = 0.0;
    }
  });
  for (auto& w : warn)
    if (!w.empty()) res.warnings.push_back(std::move(w));
  return res;
}

/// Graph Laplacian: diag(sum of weights) - weights. Rows sum to zero.
inline Eigen::MatrixXd laplacian(const Eigen::MatrixXd& weights) {
  const int m = static_cast<int>(weights.rows());
  Eigen::MatrixXd lap = -weights;
  for (int i = 0; i < m; ++i) {
    lap(i, i) = 0;
    double deg = 0;
    for (int j = 0; j < m; ++j)
      if (j != i) deg += weights(i, j);
    lap(i, i) = deg;
  }
  return lap;
}

struct FiedlerResult {
  double lambda2 = 0;
  Eigen::VectorXd vector;
  double residual = 0;
  bool disconnected = false;  // lambda2 below 1e-10
};

/// Second-smallest eigenpair of a Laplacian by power iteration on the
/// spectrally shifted matrix, deflating the constant eigenvector. Sign is
/// fixed so the first entry of magnitude above 1e-12 is positive.
inline FiedlerResult fiedler(const Eigen::MatrixXd& lap, double tol = 1e-8,
                             long max_iterations = 2'000'000) {
  const int m = static_cast<int>(lap.rows());
  if (m < 2) throw std::invalid_argument("fiedler: need at least 2 vertices");
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
  const double sigma = 2.0 * lap.diagonal().maxCoeff() + 1e-9 * (1.0 + lap.diagonal().maxCoeff());

  Eigen::VectorXd v(m);
  Rng rng(0x8f1e2d3c4b5a6978ull);
  for (int i = 0; i < m; ++i) v(i) = rng.next_double() - 0.5;
  v -= ones.dot(v) * ones;
  if (v.norm() < 1e-12) {
    v.setZero();
    v(0) = 1;
    v -= ones.dot(v) * ones;
  }
  v.normalize();

  double theta = 0, resid = 0;
  bool ok = false;
  for (long it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = sigma * v - lap * v;
    w -= ones.dot(w) * ones;
    const double nw = w.norm();
    if (nw < 1e-300) break;  // lap acts as sigma*I on the deflated space
    v = w / nw;
    if (it % 8 == 0 || it + 1 == max_iterations) {
      const Eigen::VectorXd lv = lap * v;
      theta = v.dot(lv);
      resid = (lv - theta * v).norm();
      if (resid < tol) {
        ok = true;
        break;
      }
    }
  }
  if (!ok) {
    // Either the deflated space is an exact eigenspace (tiny graphs) or we
    // failed; recheck the residual before giving up.
    const Eigen::VectorXd lv = lap * v;
    theta = v.dot(lv);
    resid = (lv - theta * v).norm();
    if (resid >= tol)
      throw convergence_error("fiedler: power iteration residual " + std::to_string(resid));
  }
  for (int i = 0; i < m; ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  FiedlerResult out;
  out.lambda2 = theta;
  out.vector = v;
  out.residual = resid;
  out.disconnected = theta < 1e-10;
  return out;
}

enum class PartitionMode { sign, histogram };

struct PartitionResult {
  std::vector<int> labels;  // canonical: numbered by first occurrence
  int n_parts = 0;
  double lambda2 = 0;
  Eigen::VectorXd fiedler_vector;
  std::vector<int> histogram;  // occupancy per bin (histogram mode)
  double hist_min = 0, hist_max = 0;
};

namespace detail {

/// Renumber labels by first occurrence so the result is invariant under any
/// permutation of the incoming label values (e.g. a Fiedler sign flip).
inline void canonicalize_labels(std::vector<int>& labels, int& n_parts) {
  std::vector<int> remap;
  for (auto& l : labels) {
    int found = -1;
    for (std::size_t k = 0; k < remap.size(); ++k)
      if (remap[k] == l) {
        found = static_cast<int>(k);
        break;
      }
    if (found < 0) {
      remap.push_back(l);
      found = static_cast<int>(remap.size()) - 1;
    }
    l = found;
  }
  n_parts = static_cast<int>(remap.size());
}

}  // namespace detail

/// Turn a Fiedler vector into part labels. Sign mode applies sign(z_i);
/// histogram mode bins the entries, splits bands at runs of empty bins, and
/// merges bands occupying fewer than `min_occupancy` vertices into the
/// nearest neighbor band.
inline PartitionResult partition(const Eigen::VectorXd& fiedler_vec, PartitionMode mode,
                                 int bins = 64, int min_occupancy = 2) {
  const int m = static_cast<int>(fiedler_vec.size());
  PartitionResult out;
  out.fiedler_vector = fiedler_vec;
  out.labels.assign(m, 0);

  if (mode == PartitionMode::sign) {
    for (int i = 0; i < m; ++i) out.labels[i] = fiedler_vec(i) >= 0 ? 1 : 0;
    detail::canonicalize_labels(out.labels, out.n_parts);
    return out;
  }

  const double lo = fiedler_vec.minCoeff();
  const double hi = fiedler_vec.maxCoeff();
  out.hist_min = lo;
  out.hist_max = hi;
  const double span = hi - lo;
  if (span < 1e-12 * std::max(1.0, std::abs(hi))) {
    out.n_parts = 1;
    out.histogram.assign(bins, 0);
    out.histogram[0] = m;
    return out;
  }
  std::vector<int> bin_of(m);
  out.histogram.assign(bins, 0);
  for (int i = 0; i < m; ++i) {
    int b = static_cast<int>((fiedler_vec(i) - lo) / span * bins);
    if (b >= bins) b = bins - 1;
    bin_of[i] = b;
    ++out.histogram[b];
  }
  // Bands: maximal runs of occupied bins.
  std::vector<int> band_of_bin(bins, -1);
  int band = -1;
  bool in_band = false;
  for (int b = 0; b < bins; ++b) {
    if (out.histogram[b] > 0) {
      if (!in_band) {
        ++band;
        in_band = true;
      }
      band_of_bin[b] = band;
    } else {
      in_band = false;
    }
  }
  const int n_bands = band + 1;
  std::vector<int> merged(n_bands);
  for (int k = 0; k < n_bands; ++k) merged[k] = k;
  std::vector<int> group_occ(n_bands, 0);
  for (int i = 0; i < m; ++i) ++group_occ[band_of_bin[bin_of[i]]];
  // Repeatedly merge the smallest undersized group into its nearest neighbor
  // group (bin distance; ties toward lower bins) until all groups reach the
  // minimum occupancy or one group remains.
  for (;;) {
    int small = -1;
    for (int k = 0; k < n_bands; ++k) {
      if (merged[k] != k || group_occ[k] >= min_occupancy) continue;
      if (small < 0 || group_occ[k] < group_occ[small]) small = k;
    }
    int groups = 0;
    for (int k = 0; k < n_bands; ++k) groups += (merged[k] == k);
    if (small < 0 || groups <= 1) break;
    int best = -1, best_dist = bins + 1;
    for (int b = 0; b < bins; ++b) {
      if (band_of_bin[b] < 0 || merged[band_of_bin[b]] == small) continue;
      for (int b2 = 0; b2 < bins; ++b2) {
        if (band_of_bin[b2] < 0 || merged[band_of_bin[b2]] != small) continue;
        const int d = std::abs(b - b2);
        if (d < best_dist) {
          best_dist = d;
          best = merged[band_of_bin[b]];
        }
      }
    }
    if (best < 0) break;
    group_occ[best] += group_occ[small];
    for (int k = 0; k < n_bands; ++k)
      if (merged[k] == small) merged[k] = best;
  }
  for (int i = 0; i < m; ++i) out.labels[i] = merged[band_of_bin[bin_of[i]]];
  detail::canonicalize_labels(out.labels, out.n_parts);
  return out;
}

/// Full pipeline from a graph: connected components are partitioned
/// separately (a disconnected Laplacian has lambda2 ~ 0, carrying no split
/// information within components).
inline PartitionResult partition_graph(const PhaseGraph& graph,
                                       PartitionMode mode = PartitionMode::histogram,
                                       int bins = 64, int min_occupancy = 2) {
  const int m = graph.size();
  if (m < 2) throw std::invalid_argument("partition_graph: need at least 2 vertices");
  const Eigen::MatrixXd w = graph.weights();

  // Components under edges with weight above a numerical floor.
  std::vector<int> comp(m, -1);
  int n_comp = 0;
  for (int i = 0; i < m; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> stack{i};
    comp[i] = n_comp;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < m; ++v)
        if (comp[v] < 0 && w(u, v) > 1e-15) {
          comp[v] = n_comp;
          stack.push_back(v);
        }
    }
    ++n_comp;
  }

  if (n_comp == 1) {
    const auto fr = fiedler(laplacian(w));
    auto res = partition(fr.vector, mode, bins, min_occupancy);
    res.lambda2 = fr.lambda2;
    return res;
  }

  PartitionResult out;
  out.labels.assign(m, -1);
  out.fiedler_vector = Eigen::VectorXd::Zero(m);
  int next_label = 0;
  for (int c = 0; c < n_comp; ++c) {
    std::vector<int> verts;
    for (int i = 0; i < m; ++i)
      if (comp[i] == c) verts.push_back(i);
    if (verts.size() == 1) {
      out.labels[verts[0]] = next_label++;
      continue;
    }
    Eigen::MatrixXd sub(verts.size(), verts.size());
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = 0; b < verts.size(); ++b) sub(a, b) = w(verts[a], verts[b]);
    const auto fr = fiedler(laplacian(sub));
    const auto res = partition(fr.vector, mode, bins, min_occupancy);
    for (std::size_t a = 0; a < verts.size(); ++a) {
      out.labels[verts[a]] = next_label + res.labels[a];
      out.fiedler_vector(verts[a]) = fr.vector(a);
    }
    next_label += res.n_parts;
  }
  detail::canonicalize_labels(out.labels, out.n_parts);
  return out;
}

// --- persistence (same JSON container family as model files) ---

inline std::string graph_to_string(const PhaseGraph& g) {
  nlohmann::json j;
  j["format"] = "tksvm-graph-v1";
  j["b_c"] = g.b_c;
  j["coords"] = g.coords;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < g.size(); ++i) {
    std::vector<double> row(g.size());
    for (int k = 0; k < g.size(); ++k) row[k] = g.biases(i, k);
    rows.push_back(row);
  }
  j["biases"] = std::move(rows);
  return j.dump(1) + "\n";
}

inline PhaseGraph graph_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("graph file: ") + e.what());
  }
  if (j.value("format", "") != "tksvm-graph-v1") throw io_error("graph file: bad format tag");
  PhaseGraph g;
  g.b_c = j.at("b_c");
  g.coords = j.at("coords").get<std::vector<std::vector<double>>>();
  const auto rows = j.at("biases");
  const int m = static_cast<int>(rows.size());
  g.biases = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != m) throw io_error("graph file: bias matrix not square");
    for (int k = 0; k < m; ++k) g.biases(i, k) = row[k];
  }
  return g;
}

inline void save_graph(const std::string& path, const PhaseGraph& g) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path);
  f << graph_to_string(g);
  if (!f) throw io_error("write failed: " + path);
}

inline PhaseGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return graph_from_string(text);
}

}  // namespace tksvm
