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
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tksvm/svm.hpp"

namespace tksvm {

/// Render a monomial as a Pauli string. Labels default to 1-based
/// within-cluster positions ("Z1 X2 Z3"); passing the cluster's site list
/// substitutes absolute lattice sites.
inline std::string render_pauli(const MonomialIndex& m, const std::vector<int>& site_labels = {}) {
  std::string out;
  for (std::size_t k = 0; k < m.sites.size(); ++k) {
    if (k) out += ' ';
    const int label = site_labels.empty() ? m.sites[k] + 1 : site_labels.at(m.sites[k]);
    out += pauli_char(m.components[k]);
    out += std::to_string(label);
  }
  return out;
}

/// Inverse of render_pauli with default labels.
inline MonomialIndex parse_pauli(const std::string& text) {
  MonomialIndex m;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2) throw std::invalid_argument("parse_pauli: bad token '" + tok + "'");
    PauliOp op;
    switch (tok[0]) {
      case 'X': op = PauliOp::X; break;
      case 'Y': op = PauliOp::Y; break;
      case 'Z': op = PauliOp::Z; break;
      default: throw std::invalid_argument("parse_pauli: bad operator in '" + tok + "'");
    }
    m.components.push_back(op);
    m.sites.push_back(std::stoi(tok.substr(1)) - 1);
  }
  return m;
}

/// Shift a monomial's sites so the first one is 0; two monomials with equal
/// canonical form are within-cluster translations of each other.
inline MonomialIndex translated_to_origin(const MonomialIndex& m) {
  MonomialIndex out = m;
  if (out.sites.empty()) return out;
  const int off = out.sites.front();
  for (auto& s : out.sites) s -= off;
  return out;
}

/// Top-k column indices by screening weight, descending, ties by index.
inline std::vector<std::int64_t> rank_columns(const TrainedModel& model, int k) {
  if (k < 1) throw std::invalid_argument("rank_columns: k >= 1 required");
  std::vector<std::pair<double, std::int64_t>> ws(model.dim);
  for (int nu = 0; nu < model.dim; ++nu) ws[nu] = {column_weight(model, nu), nu};
  std::stable_sort(ws.begin(), ws.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const int take = std::min<int>(k, model.dim);
  std::vector<std::int64_t> out(take);
  for (int i = 0; i < take; ++i) out[i] = ws[i].second;
  return out;
}

struct FeatureHit {
  std::int64_t index;
  double value;
  MonomialIndex monomial;
  std::string rendering;
};

/// Hits of one coefficient column above a relative threshold; sorted by
/// descending magnitude. `no_signal` flags an all-zero column.
struct FeatureReport {
  std::int64_t nu_bar = 0;
  double threshold_used = 0;
  double max_abs = 0;
  bool no_signal = false;
  std::vector<FeatureHit> hits;
};

/// Entries with |value| >= rho * max|value|, decoded and rendered.
inline FeatureReport extract_features(const CoefficientColumn& column, double rho, int r, int n) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("extract_features: rho in (0,1) required");
  FeatureReport rep;
  rep.nu_bar = column.nu_bar;
  for (double v : column.values) rep.max_abs = std::max(rep.max_abs, std::abs(v));
  if (rep.max_abs == 0.0) {
    rep.no_signal = true;
    rep.threshold_used = 0;
    return rep;
  }
  rep.threshold_used = rho * rep.max_abs;
  for (std::int64_t mu = 0; mu < static_cast<std::int64_t>(column.values.size()); ++mu) {
    const double v = column.values[mu];
    if (std::abs(v) < rep.threshold_used) continue;
    FeatureHit hit;
    hit.index = mu;
    hit.value = v;
    hit.monomial = monomial_decode(mu, r, n);
    hit.rendering = render_pauli(hit.monomial);
    rep.hits.push_back(std::move(hit));
  }
  std::stable_sort(rep.hits.begin(), rep.hits.end(), [](const FeatureHit& a, const FeatureHit& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) > std::abs(b.value);
    return a.index < b.index;
  });
  return rep;
}

/// N_f analog: distinct monomials across the top-min(8, dim) columns with
/// magnitude above rho times the global maximum of those columns. The global
/// reference keeps noise-only columns from contributing.
inline std::size_t feature_count(const TrainedModel& model, double rho) {
  const auto cols = rank_columns(model, std::min(8, model.dim));
  std::vector<CoefficientColumn> data;
  double global_max = 0;
  for (const auto nu_bar : cols) {
    data.push_back(coefficient_column(model, nu_bar));
    for (double v : data.back().values) global_max = std::max(global_max, std::abs(v));
  }
  if (global_max == 0.0) return 0;
  std::set<std::int64_t> seen;
  for (const auto& col : data)
    for (std::int64_t mu = 0; mu < static_cast<std::int64_t>(col.values.size()); ++mu)
      if (std::abs(col.values[mu]) >= rho * global_max) seen.insert(mu);
  return seen.size();
}

// --- report emission ---

inline void write_column_csv(std::ostream& os, const CoefficientColumn& col) {
  os << "index,value\n";
  char buf[64];
  for (std::size_t mu = 0; mu < col.values.size(); ++mu) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", mu, col.values[mu]);
    os << buf;
  }
}

inline nlohmann::json report_to_json(const FeatureReport& rep) {
  nlohmann::json j;
  j["column"] = rep.nu_bar;
  j["threshold"] = rep.threshold_used;
  j["max_abs"] = rep.max_abs;
  j["no_signal"] = rep.no_signal;
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& h : rep.hits) {
    nlohmann::json e;
    e["index"] = h.index;
    e["value"] = h.value;
    e["pauli"] = h.rendering;
    hits.push_back(std::move(e));
  }
  j["hits"] = std::move(hits);
  return j;
}

inline void write_report_text(std::ostream& os, const FeatureReport& rep) {
  os << "column " << rep.nu_bar << "  max|C| = " << rep.max_abs
     << "  threshold = " << rep.threshold_used << "\n";
  if (rep.no_signal) {
    os << "  (no signal)\n";
    return;
  }
  std::size_t wide = 12;
  for (const auto& h : rep.hits) wide = std::max(wide, h.rendering.size());
  for (const auto& h : rep.hits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "% .6e", h.value);
    os << "  " << h.rendering << std::string(wide - h.rendering.size() + 2, ' ') << buf
       << "  [" << h.index << "]\n";
  }
}

}  // namespace tksvm
