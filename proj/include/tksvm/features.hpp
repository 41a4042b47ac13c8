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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tksvm/lattice.hpp"
#include "tksvm/parallel.hpp"
#include "tksvm/pauli.hpp"
#include "tksvm/povm.hpp"
#include "tksvm/snapshot.hpp"

namespace tksvm {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t acc = 1;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

inline std::int64_t pow3(int r) {
  std::int64_t acc = 1;
  for (int i = 0; i < r; ++i) acc *= 3;
  return acc;
}

/// dim(phi) = C(n, r) * 3^r.
inline std::int64_t feature_dimension(int n, int r) {
  if (r < 1 || r > n) throw std::invalid_argument("feature dimension: need 1 <= r <= n");
  return binomial(n, r) * pow3(r);
}

/// Identifies one rank-r monomial: within-cluster positions (strictly
/// increasing, 0-based) and a spin component per position.
struct MonomialIndex {
  std::vector<int> sites;
  std::vector<PauliOp> components;
};

// Flat monomial layout, fixed because model files and feature reports depend
// on it: site-combination index in colexicographic order is the major index,
// the component tuple read as a base-3 number (x=0, y=1, z=2, first site most
// significant) is the minor index.

inline std::int64_t combination_rank(const std::vector<int>& sites) {
  std::int64_t rank = 0;
  for (std::size_t k = 0; k < sites.size(); ++k) rank += binomial(sites[k], static_cast<int>(k) + 1);
  return rank;
}

inline std::int64_t monomial_encode(const MonomialIndex& m, int r, int n) {
  if (static_cast<int>(m.sites.size()) != r || static_cast<int>(m.components.size()) != r)
    throw std::invalid_argument("monomial_encode: size mismatch with rank");
  if (r < 1 || r > n) throw std::invalid_argument("monomial_encode: need 1 <= r <= n");
  for (int k = 0; k < r; ++k) {
    if (m.sites[k] < 0 || m.sites[k] >= n) throw std::invalid_argument("monomial_encode: site out of range");
    if (k > 0 && m.sites[k] <= m.sites[k - 1])
      throw std::invalid_argument("monomial_encode: sites must be strictly increasing");
  }
  std::int64_t comp = 0;
  for (int k = 0; k < r; ++k) comp = comp * 3 + static_cast<int>(m.components[k]);
  return combination_rank(m.sites) * pow3(r) + comp;
}

inline MonomialIndex monomial_decode(std::int64_t mu, int r, int n) {
  if (mu < 0 || mu >= feature_dimension(n, r)) throw std::out_of_range("monomial_decode: index out of range");
  const std::int64_t p3 = pow3(r);
  std::int64_t comb = mu / p3;
  std::int64_t comp = mu % p3;
  MonomialIndex m;
  m.sites.resize(r);
  m.components.resize(r);
  for (int k = r; k >= 1; --k) {
    // Largest s with C(s, k) <= comb (colex unranking).
    int s = k - 1;
    while (binomial(s + 1, k) <= comb) ++s;
    m.sites[k - 1] = s;
    comb -= binomial(s, k);
  }
  for (int k = r - 1; k >= 0; --k) {
    m.components[k] = static_cast<PauliOp>(comp % 3);
    comp /= 3;
  }
  return m;
}

/// How snapshots are partitioned into clusters of adjacent sites.
struct ClusterSpec {
  enum class Shape { chain_string, square_vertex, square_plaquette, square_cells };

  Lattice lattice;
  Shape shape = Shape::chain_string;
  int param = 1;  // string length n, or k for k x k unit cells
  bool overlapping = false;

  static ClusterSpec chain_string(const Lattice& lat, int n, bool overlap) {
    if (lat.kind != Lattice::Kind::chain) throw std::invalid_argument("chain_string: chain lattice required");
    if (n < 1) throw std::invalid_argument("chain_string: n >= 1 required");
    return {lat, Shape::chain_string, n, overlap};
  }

  static ClusterSpec square_vertex(const Lattice& lat) {
    if (lat.kind != Lattice::Kind::square_link)
      throw std::invalid_argument("square_vertex: square-link lattice required");
    return {lat, Shape::square_vertex, 0, true};
  }

  static ClusterSpec square_plaquette(const Lattice& lat) {
    if (lat.kind != Lattice::Kind::square_link)
      throw std::invalid_argument("square_plaquette: square-link lattice required");
    return {lat, Shape::square_plaquette, 0, true};
  }

  static ClusterSpec square_cells(const Lattice& lat, int k, bool overlap) {
    if (lat.kind != Lattice::Kind::square_link)
      throw std::invalid_argument("square_cells: square-link lattice required");
    if (k < 1) throw std::invalid_argument("square_cells: k >= 1 required");
    return {lat, Shape::square_cells, k, overlap};
  }

  int cluster_size() const {
    switch (shape) {
      case Shape::chain_string: return param;
      case Shape::square_vertex:
      case Shape::square_plaquette: return 4;
      case Shape::square_cells: return 2 * param * param;
    }
    return 0;
  }

  std::string shape_name() const {
    switch (shape) {
      case Shape::chain_string: return "chain-string";
      case Shape::square_vertex: return "square-vertex";
      case Shape::square_plaquette: return "square-plaquette";
      case Shape::square_cells: return "square-cells";
    }
    return "?";
  }
};

/// Deterministically ordered cluster placements, each a list of site indices.
inline std::vector<std::vector<int>> enumerate_clusters(const ClusterSpec& spec) {
  const Lattice& lat = spec.lattice;
  std::vector<std::vector<int>> out;
  switch (spec.shape) {
    case ClusterSpec::Shape::chain_string: {
      const int len = lat.lx, n = spec.param;
      if (n > len) throw std::invalid_argument("enumerate_clusters: cluster larger than lattice");
      if (!spec.overlapping) {
        if (len % n != 0)
          throw std::invalid_argument("enumerate_clusters: L must be divisible by n for non-overlapping clusters");
        for (int start = 0; start < len; start += n) {
          std::vector<int> c(n);
          for (int i = 0; i < n; ++i) c[i] = start + i;
          out.push_back(std::move(c));
        }
      } else {
        const int count = lat.boundary == Boundary::periodic ? len : len - n + 1;
        for (int start = 0; start < count; ++start) {
          std::vector<int> c(n);
          for (int i = 0; i < n; ++i) c[i] = (start + i) % len;
          out.push_back(std::move(c));
        }
      }
      break;
    }
    case ClusterSpec::Shape::square_vertex:
      for (int y = 0; y < lat.ly; ++y)
        for (int x = 0; x < lat.lx; ++x) {
          const auto star = lat.vertex_star(x, y);
          out.emplace_back(star.begin(), star.end());
        }
      break;
    case ClusterSpec::Shape::square_plaquette:
      for (int y = 0; y < lat.ly; ++y)
        for (int x = 0; x < lat.lx; ++x) {
          const auto pb = lat.plaquette_bonds(x, y);
          out.emplace_back(pb.begin(), pb.end());
        }
      break;
    case ClusterSpec::Shape::square_cells: {
      const int k = spec.param;
      if (k > lat.lx || k > lat.ly)
        throw std::invalid_argument("enumerate_clusters: cluster larger than lattice");
      const int step = spec.overlapping ? 1 : k;
      if (!spec.overlapping && (lat.lx % k != 0 || lat.ly % k != 0))
        throw std::invalid_argument("enumerate_clusters: extents must be divisible by k for non-overlapping clusters");
      for (int y = 0; y < lat.ly; y += step)
        for (int x = 0; x < lat.lx; x += step) {
          std::vector<int> c;
          c.reserve(2 * k * k);
          for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx) {
              c.push_back(lat.hbond(x + dx, y + dy));
              c.push_back(lat.vbond(x + dx, y + dy));
            }
          out.push_back(std::move(c));
        }
      break;
    }
  }
  return out;
}

/// Cluster- and sample-averaged rank-r feature vector.
struct FeatureVector {
  std::vector<double> values;
  int r = 0;
  int n = 0;
  std::size_t samples_averaged = 0;
};

namespace detail {

struct SiteComponents {
  double v[3];
};

// Depth-first product over component choices; zero factors prune the branch,
// so for Pauli-6 data exactly one component tuple survives per combination.
inline void accumulate_products(const std::vector<SiteComponents>& site_vals,
                                const std::vector<int>& combo, int depth, double partial,
                                std::int64_t comp_idx, std::int64_t base, std::vector<double>& acc) {
  if (depth == static_cast<int>(combo.size())) {
    acc[base + comp_idx] += partial;
    return;
  }
  const auto& sv = site_vals[combo[depth]];
  for (int c = 0; c < 3; ++c) {
    const double v = sv.v[c];
    if (v == 0.0) continue;
    accumulate_products(site_vals, combo, depth + 1, partial * v, comp_idx * 3 + c, base, acc);
  }
}

}  // namespace detail

/// Feature vector from a batch of snapshots: the classical map applied per
/// site, rank-r monomials per cluster, averaged over all clusters of all
/// snapshots.
inline FeatureVector build_feature_vector(const std::vector<Snapshot>& snapshots,
                                          const ClusterSpec& spec, int r, const Povm& povm) {
  if (snapshots.empty()) throw std::invalid_argument("build_feature_vector: no snapshots");
  const int n = spec.cluster_size();
  const std::int64_t dim = feature_dimension(n, r);
  const auto clusters = enumerate_clusters(spec);
  const int sites = spec.lattice.site_count();
  for (const auto& s : snapshots)
    if (static_cast<int>(s.outcomes.size()) != sites)
      throw std::invalid_argument("build_feature_vector: snapshot does not match lattice");

  // Combinations of r positions out of n, in colexicographic order.
  std::vector<std::vector<int>> combos;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i;
  for (;;) {
    combos.push_back(cur);
    int k = 0;
    while (k + 1 < r && cur[k] + 1 == cur[k + 1]) ++k;
    if (cur[k] + 1 >= n && k + 1 == r) break;
    ++cur[k];
    for (int i = 0; i < k; ++i) cur[i] = i;
    if (cur[r - 1] >= n) break;
  }

  std::vector<detail::SiteComponents> bloch_table(povm.size());
  for (std::size_t o = 0; o < povm.size(); ++o)
    for (int c = 0; c < 3; ++c) bloch_table[o].v[c] = povm.bloch(o)[c];

  FeatureVector fv;
  fv.values.assign(dim, 0.0);
  fv.r = r;
  fv.n = n;
  fv.samples_averaged = snapshots.size();

  std::vector<detail::SiteComponents> site_vals(n);
  const std::int64_t p3 = pow3(r);
  for (const auto& snap : snapshots) {
    for (const auto& cluster : clusters) {
      for (int i = 0; i < n; ++i) site_vals[i] = bloch_table[snap.outcomes[cluster[i]]];
      std::int64_t base = 0;
      for (const auto& combo : combos) {
        detail::accumulate_products(site_vals, combo, 0, 1.0, 0, base, fv.values);
        base += p3;
      }
    }
  }
  const double scale = 1.0 / (static_cast<double>(snapshots.size()) * clusters.size());
  for (auto& v : fv.values) v *= scale;
  return fv;
}

/// Consecutive groups of `group_size` snapshots, one feature vector each;
/// a trailing remainder is dropped. This is the training-set constructor.
inline std::vector<FeatureVector> batch_feature_vectors(const std::vector<Snapshot>& snapshots,
                                                        const ClusterSpec& spec, int r,
                                                        const Povm& povm, std::size_t group_size,
                                                        int threads = 0) {
  if (group_size < 1) throw std::invalid_argument("batch_feature_vectors: group_size >= 1 required");
  if (group_size > snapshots.size())
    throw std::invalid_argument("batch_feature_vectors: group_size exceeds snapshot count");
  const std::size_t groups = snapshots.size() / group_size;
  std::vector<FeatureVector> out(groups);
  parallel_for(groups, threads, [&](std::size_t g) {
    std::vector<Snapshot> slice(snapshots.begin() + g * group_size,
                                snapshots.begin() + (g + 1) * group_size);
    out[g] = build_feature_vector(slice, spec, r, povm);
  });
  return out;
}

/// Default samples per feature vector: 100 * 3^r / N_cl rounded up, keeping
/// per-component noise roughly rank-independent, clamped so at least 20
/// vectors come out of the batch.
inline std::size_t default_group_size(int r, std::size_t n_clusters, std::size_t shots) {
  const std::int64_t want = (100 * pow3(r) + static_cast<std::int64_t>(n_clusters) - 1) /
                            static_cast<std::int64_t>(n_clusters);
  std::size_t g = static_cast<std::size_t>(want < 1 ? 1 : want);
  const std::size_t cap = shots / 20;
  if (cap >= 1 && g > cap) g = cap;
  if (g < 1) g = 1;
  return g;
}

}  // namespace tksvm
