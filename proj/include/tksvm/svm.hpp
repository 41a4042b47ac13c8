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
#include <limits>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "tksvm/errors.hpp"
#include "tksvm/features.hpp"

namespace tksvm {

/// Labelled feature vectors, labels +-1.
struct TrainingSet {
  std::vector<FeatureVector> vectors;
  std::vector<int> labels;

  void validate() const {
    if (vectors.size() != labels.size()) throw std::invalid_argument("training set: size mismatch");
    if (vectors.empty()) throw std::invalid_argument("training set: empty");
    const std::size_t dim = vectors.front().values.size();
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].values.size() != dim) throw std::invalid_argument("training set: mixed dimensions");
      if (labels[i] == 1)
        pos = true;
      else if (labels[i] == -1)
        neg = true;
      else
        throw std::invalid_argument("training set: labels must be +-1");
    }
    if (!pos || !neg) throw std::invalid_argument("training set: both classes required");
  }
};

struct SvmOptions {
  double nu = 0.5;
  double kkt_tol = 1e-6;        // stop when the max KKT violation, in units of
                                // the largest kernel diagonal, falls below this
  long max_iterations = 0;      // 0: max(1e7, 1000 * N)
  std::size_t cache_mb = 512;   // Gram storage budget; row LRU beyond it
};

/// Result of nu-SVM training with the quadratic kernel K(u,v) = (u.v)^2.
///
/// The dual solution alpha (0 <= alpha_s <= 1/N, sum alpha_s y_s = 0,
/// sum alpha_s >= nu) is rescaled by the margin rho = (r+ - r-)/2 so that
/// margin support vectors sit at decision value +-1:
///   lambda_s = alpha_s / rho,  bias = (r+ + r-) / (r+ - r-),
///   d(phi) = sum_s lambda_s y_s (phi_s . phi)^2 - bias.
/// This makes |bias| the dimensionless same-phase indicator; the raw duals
/// are recoverable as lambda_s * rho.
struct TrainedModel {
  int dim = 0;
  int r = 0;
  int n = 0;
  ClusterSpec cluster = ClusterSpec::chain_string(Lattice::chain(1), 1, false);
  double nu = 0;
  double bias = 0;
  double rho = 1;  // margin used for rescaling
  std::size_t n_train = 0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> duals;  // lambda_s > 0 (rescaled)
  std::vector<int> labels;    // y_s

  std::size_t support_count() const { return support_vectors.size(); }
  double raw_dual(std::size_t s) const { return duals.at(s) * rho; }
};

/// Exact finite sum over support vectors of one coefficient-matrix column
/// C_{mu, nu_bar} = sum_s lambda_s y_s phi_mu^(s) phi_nubar^(s). No dim^2
/// object is ever materialized.
struct CoefficientColumn {
  std::int64_t nu_bar = 0;
  std::vector<double> values;
};

namespace detail {

/// Gram rows under a memory budget: dense storage when the full matrix fits,
/// least-recently-used row cache otherwise.
class KernelCache {
 public:
  KernelCache(const std::vector<const double*>& xs, std::size_t dim, std::size_t budget_mb)
      : xs_(xs), dim_(dim), n_(xs.size()) {
    const std::size_t full_bytes = n_ * n_ * sizeof(double);
    dense_ = full_bytes <= budget_mb * (std::size_t{1} << 20);
    if (dense_) {
      rows_.assign(n_ * n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          const double k = kernel(i, j);
          rows_[i * n_ + j] = k;
          rows_[j * n_ + i] = k;
        }
    } else {
      max_cached_ = std::max<std::size_t>(2, budget_mb * (std::size_t{1} << 20) / (n_ * sizeof(double)));
    }
  }

  const double* row(std::size_t i) {
    if (dense_) return rows_.data() + i * n_;
    auto it = cache_.find(i);
    if (it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first.data();
    }
    if (cache_.size() >= max_cached_) {
      cache_.erase(lru_.back());
      lru_.pop_back();
    }
    std::vector<double> r(n_);
    for (std::size_t j = 0; j < n_; ++j) r[j] = kernel(i, j);
    lru_.push_front(i);
    auto [pos, inserted] = cache_.emplace(i, std::make_pair(std::move(r), lru_.begin()));
    return pos->second.first.data();
  }

  double diag(std::size_t i) { return kernel(i, i); }

 private:
  double kernel(std::size_t i, std::size_t j) const {
    const double* a = xs_[i];
    const double* b = xs_[j];
    double dot = 0;
    for (std::size_t d = 0; d < dim_; ++d) dot += a[d] * b[d];
    return dot * dot;
  }

  std::vector<const double*> xs_;
  std::size_t dim_, n_;
  bool dense_ = true;
  std::vector<double> rows_;
  std::size_t max_cached_ = 0;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> cache_;
};

}  // namespace detail

/// Train a nu-SVM by sequential minimal optimization. The two equality sums
/// (nu/2 of dual mass per class) are kept invariant by always updating a pair
/// within one class; the working pair is the maximal KKT violating pair, ties
/// broken by lowest index, so training is deterministic.
inline TrainedModel train(const TrainingSet& ts, const SvmOptions& opt = {}) {
  ts.validate();
  const std::size_t n = ts.vectors.size();
  const std::size_t dim = ts.vectors.front().values.size();
  if (!(opt.nu > 0.0 && opt.nu <= 1.0)) throw std::invalid_argument("train: nu must be in (0, 1]");
  std::size_t n_pos = 0;
  for (int y : ts.labels) n_pos += (y == 1);
  const std::size_t n_neg = n - n_pos;
  const double nu_max = 2.0 * static_cast<double>(std::min(n_pos, n_neg)) / static_cast<double>(n);
  if (opt.nu > nu_max + 1e-12)
    throw std::invalid_argument("train: infeasible nu (max " + std::to_string(nu_max) + ")");

  std::vector<const double*> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = ts.vectors[i].values.data();
  detail::KernelCache cache(xs, dim, opt.cache_mb);

  double qscale = 0;
  for (std::size_t i = 0; i < n; ++i) qscale = std::max(qscale, cache.diag(i));
  const bool degenerate_kernel = qscale <= 0;
  if (degenerate_kernel) qscale = 1;

  const double box = 1.0 / static_cast<double>(n);
  std::vector<double> alpha(n, 0.0);
  for (int cls : {+1, -1}) {
    double remaining = opt.nu / 2.0;
    for (std::size_t i = 0; i < n && remaining > 0; ++i) {
      if (ts.labels[i] != cls) continue;
      const double a = std::min(box, remaining);
      alpha[i] = a;
      remaining -= a;
    }
  }

  // Gradient of (1/2) a^T Q a in qscale units, Q_ij = y_i y_j K_ij.
  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ki = cache.row(i);
    double g = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (alpha[j] != 0.0) g += ts.labels[i] * ts.labels[j] * ki[j] * alpha[j];
    grad[i] = g / qscale;
  }

  const long max_iter = opt.max_iterations > 0
                            ? opt.max_iterations
                            : std::max<long>(10'000'000L, 1000L * static_cast<long>(n));
  double violation = std::numeric_limits<double>::infinity();
  long iter = 0;
  for (; iter < max_iter; ++iter) {
    std::size_t best_up = n, best_low = n;
    double best_viol = 0;
    for (int cls : {+1, -1}) {
      std::size_t up = n, low = n;
      double up_g = std::numeric_limits<double>::infinity();
      double low_g = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (ts.labels[i] != cls) continue;
        if (alpha[i] < box && grad[i] < up_g) {
          up_g = grad[i];
          up = i;
        }
        if (alpha[i] > 0.0 && grad[i] > low_g) {
          low_g = grad[i];
          low = i;
        }
      }
      if (up == n || low == n) continue;
      const double v = low_g - up_g;
      if (v > best_viol) {
        best_viol = v;
        best_up = up;
        best_low = low;
      }
    }
    violation = best_viol;
    if (violation < opt.kkt_tol || best_up == n) break;

    const double* k_up = cache.row(best_up);
    const double* k_low = cache.row(best_low);
    const int y = ts.labels[best_up];  // both in the same class
    const double q_uu = k_up[best_up] / qscale;
    const double q_ll = k_low[best_low] / qscale;
    const double q_ul = y * y * k_up[best_low] / qscale;
    const double eta = std::max(q_uu + q_ll - 2.0 * q_ul, 1e-12);
    const double room_up = box - alpha[best_up];
    const double room_low = alpha[best_low];
    double delta = (grad[best_low] - grad[best_up]) / eta;
    delta = std::min({delta, room_up, room_low});
    // Pin exactly at the bounds so the box constraints hold bit-exactly.
    alpha[best_up] = (delta == room_up) ? box : alpha[best_up] + delta;
    alpha[best_low] = (delta == room_low) ? 0.0 : alpha[best_low] - delta;
    for (std::size_t k = 0; k < n; ++k) {
      const double q_ku = ts.labels[k] * y * k_up[k] / qscale;
      const double q_kl = ts.labels[k] * y * k_low[k] / qscale;
      grad[k] += delta * (q_ku - q_kl);
    }
  }
  if (iter >= max_iter)
    throw convergence_error("svm: SMO did not converge; KKT violation " + std::to_string(violation));

  // Margin values per class from g_i = sum_j alpha_j y_j K_ij = y_i grad_i.
  double r_cls[2];
  for (int c = 0; c < 2; ++c) {
    const int cls = c == 0 ? +1 : -1;
    double free_sum = 0;
    std::size_t free_cnt = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (ts.labels[i] != cls) continue;
      const double g = cls * grad[i] * qscale;
      if (alpha[i] > 0.0 && alpha[i] < box) {
        free_sum += g;
        ++free_cnt;
      } else if (alpha[i] == 0.0) {
        // KKT bound: g >= r for +1, g <= r for -1
        if (cls == +1)
          hi = std::min(hi, g);
        else
          lo = std::max(lo, g);
      } else {
        if (cls == +1)
          lo = std::max(lo, g);
        else
          hi = std::min(hi, g);
      }
    }
    if (free_cnt > 0) {
      r_cls[c] = free_sum / static_cast<double>(free_cnt);
    } else {
      if (!std::isfinite(lo)) lo = hi;
      if (!std::isfinite(hi)) hi = lo;
      r_cls[c] = 0.5 * (lo + hi);
    }
  }
  const double r_plus = r_cls[0], r_minus = r_cls[1];
  const double rho_margin = 0.5 * (r_plus - r_minus);
  const double b_raw = 0.5 * (r_plus + r_minus);

  // Rescale so margin SVs sit at +-1; cap |bias| when the margin collapses
  // (statistically identical classes).
  constexpr double kBiasCap = 1e6;
  double rho_eff = rho_margin;
  const double rho_floor = std::abs(b_raw) / kBiasCap;
  if (!(rho_eff > rho_floor)) rho_eff = rho_floor;
  if (!(rho_eff > 0)) rho_eff = 1.0;  // fully degenerate: d identically 0
  const double bias = b_raw / rho_eff;

  TrainedModel model;
  model.dim = static_cast<int>(dim);
  model.r = ts.vectors.front().r;
  model.n = ts.vectors.front().n;
  model.nu = opt.nu;
  model.bias = bias;
  model.rho = rho_eff;
  model.n_train = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] <= 0.0) continue;
    model.support_vectors.push_back(ts.vectors[i].values);
    model.duals.push_back(alpha[i] / rho_eff);
    model.labels.push_back(ts.labels[i]);
  }
  return model;
}

/// Decision function d(phi) = sum_s lambda_s y_s (phi_s . phi)^2 - bias.
inline double decide(const TrainedModel& model, const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != model.dim)
    throw std::invalid_argument("decide: dimension mismatch");
  double d = 0;
  for (std::size_t s = 0; s < model.support_count(); ++s) {
    const auto& sv = model.support_vectors[s];
    double dot = 0;
    for (std::size_t k = 0; k < sv.size(); ++k) dot += sv[k] * phi[k];
    d += model.duals[s] * model.labels[s] * dot * dot;
  }
  return d - model.bias;
}

inline double decide(const TrainedModel& model, const FeatureVector& phi) {
  return decide(model, phi.values);
}

inline CoefficientColumn coefficient_column(const TrainedModel& model, std::int64_t nu_bar) {
  if (nu_bar < 0 || nu_bar >= model.dim) throw std::out_of_range("coefficient_column: index out of range");
  CoefficientColumn col;
  col.nu_bar = nu_bar;
  col.values.assign(model.dim, 0.0);
  for (std::size_t s = 0; s < model.support_count(); ++s) {
    const auto& sv = model.support_vectors[s];
    const double w = model.duals[s] * model.labels[s] * sv[nu_bar];
    if (w == 0.0) continue;
    for (int mu = 0; mu < model.dim; ++mu) col.values[mu] += w * sv[mu];
  }
  return col;
}

/// The column screening statistic |sum_s lambda_s phi_nu^(s)|.
inline double column_weight(const TrainedModel& model, std::int64_t nu) {
  if (nu < 0 || nu >= model.dim) throw std::out_of_range("column_weight: index out of range");
  double w = 0;
  for (std::size_t s = 0; s < model.support_count(); ++s)
    w += model.duals[s] * model.support_vectors[s][nu];
  return std::abs(w);
}

/// Fraction of test vectors classified correctly; d == 0 counts as an error.
inline double accuracy(const TrainedModel& model, const TrainingSet& test) {
  if (test.vectors.empty()) throw std::invalid_argument("accuracy: empty test set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.vectors.size(); ++i) {
    const double d = decide(model, test.vectors[i]);
    if ((d > 0 && test.labels[i] == 1) || (d < 0 && test.labels[i] == -1)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.vectors.size());
}

// --- model file (self-describing JSON; bit-identical round trips) ---

namespace detail {

inline nlohmann::json cluster_to_json(const ClusterSpec& c) {
  nlohmann::json j;
  j["lattice"] = c.lattice.kind_name();
  j["L"] = lattice_extent_string(c.lattice);
  j["boundary"] = boundary_name(c.lattice.boundary);
  j["shape"] = c.shape_name();
  j["param"] = c.param;
  j["overlapping"] = c.overlapping;
  return j;
}

inline ClusterSpec cluster_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("lattice");
  const std::string ext = j.at("L");
  const Boundary bc = j.at("boundary") == "periodic" ? Boundary::periodic : Boundary::open;
  Lattice lat;
  if (kind == "chain") {
    lat = Lattice::chain(std::stoi(ext), bc);
  } else {
    const auto x = ext.find('x');
    lat = Lattice::square_link(std::stoi(ext.substr(0, x)), std::stoi(ext.substr(x + 1)));
  }
  const std::string shape = j.at("shape");
  const int param = j.at("param");
  const bool overlap = j.at("overlapping");
  if (shape == "chain-string") return ClusterSpec::chain_string(lat, param, overlap);
  if (shape == "square-vertex") return ClusterSpec::square_vertex(lat);
  if (shape == "square-plaquette") return ClusterSpec::square_plaquette(lat);
  if (shape == "square-cells") return ClusterSpec::square_cells(lat, param, overlap);
  throw io_error("model file: unknown cluster shape '" + shape + "'");
}

}  // namespace detail

inline std::string model_to_string(const TrainedModel& model) {
  nlohmann::json j;
  j["format"] = "tksvm-model-v1";
  j["dim"] = model.dim;
  j["r"] = model.r;
  j["n"] = model.n;
  j["cluster"] = detail::cluster_to_json(model.cluster);
  j["nu"] = model.nu;
  j["bias"] = model.bias;
  j["rho"] = model.rho;
  j["n_train"] = model.n_train;
  j["kernel"] = "quadratic";
  nlohmann::json svs = nlohmann::json::array();
  for (std::size_t s = 0; s < model.support_count(); ++s) {
    nlohmann::json e;
    e["lambda"] = model.duals[s];
    e["y"] = model.labels[s];
    e["phi"] = model.support_vectors[s];
    svs.push_back(std::move(e));
  }
  j["support"] = std::move(svs);
  return j.dump(1) + "\n";
}

inline TrainedModel model_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("model file: ") + e.what());
  }
  if (j.value("format", "") != "tksvm-model-v1") throw io_error("model file: bad format tag");
  TrainedModel m;
  m.dim = j.at("dim");
  m.r = j.at("r");
  m.n = j.at("n");
  m.cluster = detail::cluster_from_json(j.at("cluster"));
  m.nu = j.at("nu");
  m.bias = j.at("bias");
  m.rho = j.at("rho");
  m.n_train = j.at("n_train");
  for (const auto& e : j.at("support")) {
    m.duals.push_back(e.at("lambda"));
    m.labels.push_back(e.at("y"));
    m.support_vectors.push_back(e.at("phi").get<std::vector<double>>());
    if (static_cast<int>(m.support_vectors.back().size()) != m.dim)
      throw io_error("model file: support vector dimension mismatch");
  }
  return m;
}

inline void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path);
  f << model_to_string(model);
  if (!f) throw io_error("write failed: " + path);
}

inline TrainedModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return model_from_string(text);
}

}  // namespace tksvm
