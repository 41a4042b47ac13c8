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

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tksvm/lattice.hpp"
#include "tksvm/statevector.hpp"

namespace tksvm {

/// One Y-free Pauli product: coeff * X^{xmask} Z^{zmask}. All model terms
/// used here are Y-free, so the Hamiltonian is real in the Z basis.
struct PauliTerm {
  double coeff;
  std::uint64_t xmask;
  std::uint64_t zmask;

  PauliTerm(double c, std::uint64_t x, std::uint64_t z) : coeff(c), xmask(x), zmask(z) {
    if (x & z) throw std::invalid_argument("pauli term: overlapping X/Z masks (Y not supported)");
  }
};

// Splitting that picks a unique state out of a (near-)degenerate ground
// space. Small enough to leave expectation values unchanged at sampling
// precision, large enough to dominate finite-size tunneling splittings.
inline constexpr double kTieBreakField = 1e-6;

enum class ModelKind { cluster_chain, toric_code };

/// Model + couplings + lattice. Couplings are (h1, h2) for the cluster chain
/// and (hx, hz) for the toric code.
struct HamiltonianSpec {
  ModelKind model;
  double c1 = 0;
  double c2 = 0;
  Lattice lattice;

  static HamiltonianSpec cluster_chain(int length, double h1, double h2) {
    if (h1 < 0) throw std::invalid_argument("cluster chain: h1 >= 0 required");
    return {ModelKind::cluster_chain, h1, h2, Lattice::chain(length, Boundary::open)};
  }

  static HamiltonianSpec toric_code(int lx, int ly, double hx, double hz) {
    if (hx < 0 || hz < 0) throw std::invalid_argument("toric code: hx, hz >= 0 required");
    return {ModelKind::toric_code, hx, hz, Lattice::square_link(lx, ly)};
  }

  int site_count() const { return lattice.site_count(); }

  /// Expand into Pauli terms. With `tie_break` set, tiny extra fields select
  /// a unique ground state at exactly degenerate points:
  ///  - cluster chain: the two edge operators X_0 Z_1 and Z_{L-2} X_{L-1},
  ///    resolving the 4-fold edge-mode degeneracy at h1 = h2 = 0 toward the
  ///    same state the tableau preparation builds;
  ///  - toric code: both non-contractible Z loops (matching the tableau
  ///    preparation sector).
  /// The antiferromagnetic regime needs no term: its quasi-degenerate pair is
  /// split by a finite-size tunneling gap much larger than kTieBreakField, so
  /// the solver lands on the symmetric combination deterministically.
  std::vector<PauliTerm> terms(bool tie_break = true) const {
    std::vector<PauliTerm> out;
    const auto bit = [](int q) { return std::uint64_t{1} << q; };
    if (model == ModelKind::cluster_chain) {
      const int len = lattice.lx;
      if (len < 3) throw std::invalid_argument("cluster chain: L >= 3 required");
      if (len > 63) throw std::invalid_argument("cluster chain: L too large for masks");
      for (int k = 1; k + 1 < len; ++k)
        out.emplace_back(-1.0, bit(k), bit(k - 1) | bit(k + 1));
      for (int i = 0; i < len; ++i)
        if (c1 != 0) out.emplace_back(-c1, bit(i), 0);
      for (int i = 0; i + 1 < len; ++i)
        if (c2 != 0) out.emplace_back(-c2, bit(i) | bit(i + 1), 0);
      if (tie_break) {
        out.emplace_back(-kTieBreakField, bit(0), bit(1));
        out.emplace_back(-kTieBreakField, bit(len - 1), bit(len - 2));
      }
    } else {
      const Lattice& lat = lattice;
      if (lat.site_count() > 63) throw std::invalid_argument("toric code: lattice too large for masks");
      for (int y = 0; y < lat.ly; ++y)
        for (int x = 0; x < lat.lx; ++x) {
          std::uint64_t zm = 0;
          for (int q : lat.vertex_star(x, y)) zm |= bit(q);
          out.emplace_back(-1.0, 0, zm);
          std::uint64_t xm = 0;
          for (int q : lat.plaquette_bonds(x, y)) xm |= bit(q);
          out.emplace_back(-1.0, xm, 0);
        }
      for (int q = 0; q < lat.site_count(); ++q) {
        if (c1 != 0) out.emplace_back(-c1, bit(q), 0);
        if (c2 != 0) out.emplace_back(-c2, 0, bit(q));
      }
      if (tie_break) {
        std::uint64_t loop1 = 0, loop2 = 0;
        for (int x = 0; x < lat.lx; ++x) loop1 |= bit(lat.vbond(x, 0));
        for (int y = 0; y < lat.ly; ++y) loop2 |= bit(lat.hbond(0, y));
        out.emplace_back(-kTieBreakField, 0, loop1);
        out.emplace_back(-kTieBreakField, 0, loop2);
      }
    }
    return out;
  }
};

/// out += H * in for a term list.
inline void apply_terms(const std::vector<PauliTerm>& terms,
                        const std::vector<std::complex<double>>& in,
                        std::vector<std::complex<double>>& out) {
  if (out.size() != in.size()) throw std::invalid_argument("apply_terms: size mismatch");
  for (const auto& t : terms) {
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double sgn = (std::popcount(i & t.zmask) & 1) ? -t.coeff : t.coeff;
      out[i ^ t.xmask] += sgn * in[i];
    }
  }
}

inline std::vector<std::complex<double>> apply_hamiltonian(const std::vector<PauliTerm>& terms,
                                                           const std::vector<std::complex<double>>& in) {
  std::vector<std::complex<double>> out(in.size(), {0, 0});
  apply_terms(terms, in, out);
  return out;
}

}  // namespace tksvm
