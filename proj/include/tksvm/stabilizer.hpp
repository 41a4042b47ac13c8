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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tksvm/lattice.hpp"
#include "tksvm/pauli.hpp"
#include "tksvm/rng.hpp"

namespace tksvm {

/// Pure stabilizer state in the binary-symplectic tableau representation:
/// rows 0..n-1 are destabilizer generators, rows n..2n-1 stabilizer
/// generators, each row an X bit-vector, a Z bit-vector and a sign bit.
/// Single-qubit measurements follow the standard tableau update: outcomes
/// are random (fair coin) when the measured Pauli anticommutes with the
/// stabilizer group and deterministic otherwise.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int n_qubits)
      : n_(n_qubits), words_((n_qubits + 63) / 64) {
    if (n_qubits < 1) throw std::invalid_argument("tableau: need at least one qubit");
    x_.assign(static_cast<std::size_t>(2 * n_) * words_, 0);
    z_.assign(static_cast<std::size_t>(2 * n_) * words_, 0);
    sign_.assign(2 * n_, 0);
    // |0...0>: destabilizer i = X_i, stabilizer i = Z_i.
    for (int i = 0; i < n_; ++i) {
      set_bit(x_, i, i);
      set_bit(z_, n_ + i, i);
    }
  }

  int qubit_count() const { return n_; }

  // --- Clifford gates (conjugate every tableau row) ---

  void h(int a) {
    check_qubit(a);
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xb = get_bit(x_, i, a), zb = get_bit(z_, i, a);
      sign_[i] ^= static_cast<std::uint8_t>(xb && zb);
      put_bit(x_, i, a, zb);
      put_bit(z_, i, a, xb);
    }
  }

  void s(int a) {
    check_qubit(a);
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xb = get_bit(x_, i, a), zb = get_bit(z_, i, a);
      sign_[i] ^= static_cast<std::uint8_t>(xb && zb);
      put_bit(z_, i, a, zb ^ xb);
    }
  }

  void sdg(int a) {
    check_qubit(a);
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xb = get_bit(x_, i, a), zb = get_bit(z_, i, a);
      sign_[i] ^= static_cast<std::uint8_t>(xb && !zb);
      put_bit(z_, i, a, zb ^ xb);
    }
  }

  void cnot(int c, int t) {
    check_qubit(c);
    check_qubit(t);
    if (c == t) throw std::invalid_argument("cnot: control equals target");
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xc = get_bit(x_, i, c), zc = get_bit(z_, i, c);
      const bool xt = get_bit(x_, i, t), zt = get_bit(z_, i, t);
      sign_[i] ^= static_cast<std::uint8_t>(xc && zt && (xt == zc));
      put_bit(x_, i, t, xt ^ xc);
      put_bit(z_, i, c, zc ^ zt);
    }
  }

  void cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw std::invalid_argument("cz: identical qubits");
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xa = get_bit(x_, i, a), za = get_bit(z_, i, a);
      const bool xb = get_bit(x_, i, b), zb = get_bit(z_, i, b);
      sign_[i] ^= static_cast<std::uint8_t>(xa && xb && (za != zb));
      put_bit(z_, i, a, za ^ xb);
      put_bit(z_, i, b, zb ^ xa);
    }
  }

  /// Apply the Pauli Z_a (flips the sign of rows anticommuting with it).
  void pauli_z(int a) {
    check_qubit(a);
    for (int i = 0; i < 2 * n_; ++i) sign_[i] ^= static_cast<std::uint8_t>(get_bit(x_, i, a));
  }

  void pauli_x(int a) {
    check_qubit(a);
    for (int i = 0; i < 2 * n_; ++i) sign_[i] ^= static_cast<std::uint8_t>(get_bit(z_, i, a));
  }

  // --- Measurements ---

  /// Measure Z on qubit a; returns +1 or -1. `rng` supplies the coin for
  /// outcomes that are random.
  int measure_z(int a, Rng& rng) {
    check_qubit(a);
    int pivot = -1;
    for (int p = n_; p < 2 * n_; ++p)
      if (get_bit(x_, p, a)) {
        pivot = p;
        break;
      }
    if (pivot >= 0) {
      for (int i = 0; i < 2 * n_; ++i)
        if (i != pivot && get_bit(x_, i, a)) rowsum(i, pivot);
      copy_row(pivot - n_, pivot);
      zero_row(pivot);
      set_bit(z_, pivot, a);
      const bool one = rng.next_bool();
      sign_[pivot] = one ? 1 : 0;
      return one ? -1 : +1;
    }
    // Deterministic: accumulate the product of stabilizers indicated by the
    // destabilizer X bits at qubit a.
    ScratchRow acc(words_);
    for (int i = 0; i < n_; ++i)
      if (get_bit(x_, i, a)) accumulate(acc, n_ + i);
    return acc.phase4 == 0 ? +1 : -1;
  }

  /// Measure X or Y by rotating the qubit frame so the operator becomes Z.
  /// The frame is not rotated back; use on a per-shot copy.
  int measure_x(int a, Rng& rng) {
    h(a);
    return measure_z(a, rng);
  }

  int measure_y(int a, Rng& rng) {
    sdg(a);
    h(a);
    return measure_z(a, rng);
  }

  int measure_basis(PauliOp basis, int a, Rng& rng) {
    switch (basis) {
      case PauliOp::X: return measure_x(a, rng);
      case PauliOp::Y: return measure_y(a, rng);
      default: return measure_z(a, rng);
    }
  }

  /// Projective measurement of a multi-site Pauli product (sign must be +1).
  /// The conjugating circuit is undone afterwards, so the tableau is left in
  /// the correctly collapsed state in the original frame.
  int measure_pauli(const PauliString& p, Rng& rng) {
    if (p.sign != +1) throw std::invalid_argument("measure_pauli: sign must be +1");
    if (p.factors.empty()) return +1;
    for (const auto& f : p.factors) check_qubit(f.site);
    for (const auto& f : p.factors) rotate_to_z(f.op, f.site);
    const int target = p.factors.front().site;
    for (std::size_t k = 1; k < p.factors.size(); ++k) cnot(p.factors[k].site, target);
    const int outcome = measure_z(target, rng);
    for (std::size_t k = p.factors.size(); k-- > 1;) cnot(p.factors[k].site, target);
    for (const auto& f : p.factors) rotate_from_z(f.op, f.site);
    return outcome;
  }

  /// Exact expectation of a Pauli string on the stabilizer state: +1/-1 when
  /// +-P is in the stabilizer group, 0 when P anticommutes with it.
  double expectation(const PauliString& p) const {
    for (const auto& f : p.factors) check_qubit(f.site);
    std::vector<std::uint64_t> px(words_, 0), pz(words_, 0);
    for (const auto& f : p.factors) {
      if (f.op != PauliOp::Z) px[f.site / 64] |= 1ull << (f.site % 64);
      if (f.op != PauliOp::X) pz[f.site / 64] |= 1ull << (f.site % 64);
    }
    for (int srow = n_; srow < 2 * n_; ++srow)
      if (anticommutes(px, pz, srow)) return 0.0;
    // Express P as a product of stabilizer generators; generator i appears
    // iff P anticommutes with destabilizer i.
    ScratchRow acc(words_);
    for (int i = 0; i < n_; ++i)
      if (anticommutes(px, pz, i)) accumulate(acc, n_ + i);
    for (int w = 0; w < words_; ++w)
      if (acc.x[w] != px[w] || acc.z[w] != pz[w])
        throw std::logic_error("tableau expectation: generator product mismatch");
    return p.sign * (acc.phase4 == 0 ? 1.0 : -1.0);
  }

  /// Structural sanity: symplectic pairing between destabilizer and
  /// stabilizer rows. Implies independence of the generators.
  bool is_valid() const {
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j) {
        const bool anti = row_anticommutes(i, j);
        const bool paired = (j == i + n_);
        if (anti != paired) return false;
      }
    return true;
  }

 private:
  struct ScratchRow {
    explicit ScratchRow(int words) : x(words, 0), z(words, 0) {}
    std::vector<std::uint64_t> x, z;
    int phase4 = 0;  // exponent of (-1) times 2, tracked mod 4
  };

  void check_qubit(int a) const {
    if (a < 0 || a >= n_) throw std::out_of_range("tableau: qubit index out of range");
  }

  bool get_bit(const std::vector<std::uint64_t>& bits, int row, int col) const {
    return (bits[static_cast<std::size_t>(row) * words_ + col / 64] >> (col % 64)) & 1;
  }

  void put_bit(std::vector<std::uint64_t>& bits, int row, int col, bool v) {
    auto& w = bits[static_cast<std::size_t>(row) * words_ + col / 64];
    const std::uint64_t m = 1ull << (col % 64);
    w = v ? (w | m) : (w & ~m);
  }

  void set_bit(std::vector<std::uint64_t>& bits, int row, int col) { put_bit(bits, row, col, true); }

  void copy_row(int dst, int src) {
    for (int w = 0; w < words_; ++w) {
      x_[static_cast<std::size_t>(dst) * words_ + w] = x_[static_cast<std::size_t>(src) * words_ + w];
      z_[static_cast<std::size_t>(dst) * words_ + w] = z_[static_cast<std::size_t>(src) * words_ + w];
    }
    sign_[dst] = sign_[src];
  }

  void zero_row(int row) {
    for (int w = 0; w < words_; ++w) {
      x_[static_cast<std::size_t>(row) * words_ + w] = 0;
      z_[static_cast<std::size_t>(row) * words_ + w] = 0;
    }
    sign_[row] = 0;
  }

  // Exponent of i contributed by multiplying single-qubit Paulis (x1,z1)*(x2,z2).
  static int phase_g(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return static_cast<int>(z2) - static_cast<int>(x2);
    if (x1) return z2 ? (x2 ? 1 : -1) : 0;
    return x2 ? (z2 ? -1 : 1) : 0;
  }

  int row_phase_sum(int src, const std::vector<std::uint64_t>& hx,
                    const std::vector<std::uint64_t>& hz) const {
    int g = 0;
    for (int c = 0; c < n_; ++c) {
      const bool x1 = get_bit(x_, src, c), z1 = get_bit(z_, src, c);
      const bool x2 = (hx[c / 64] >> (c % 64)) & 1, z2 = (hz[c / 64] >> (c % 64)) & 1;
      g += phase_g(x1, z1, x2, z2);
    }
    return g;
  }

  /// row h <- row src * row h, with sign bookkeeping. Destabilizer rows can
  /// pick up i-phases; their signs are never read, so only stabilizer rows
  /// enforce Hermiticity.
  void rowsum(int h, int src) {
    std::vector<std::uint64_t> hx(words_), hz(words_);
    for (int w = 0; w < words_; ++w) {
      hx[w] = x_[static_cast<std::size_t>(h) * words_ + w];
      hz[w] = z_[static_cast<std::size_t>(h) * words_ + w];
    }
    int ph = 2 * sign_[h] + 2 * sign_[src] + row_phase_sum(src, hx, hz);
    ph = ((ph % 4) + 4) % 4;
    if (h >= n_ && ph != 0 && ph != 2)
      throw std::logic_error("tableau rowsum: non-Hermitian stabilizer product");
    sign_[h] = static_cast<std::uint8_t>(ph / 2);
    for (int w = 0; w < words_; ++w) {
      x_[static_cast<std::size_t>(h) * words_ + w] ^= x_[static_cast<std::size_t>(src) * words_ + w];
      z_[static_cast<std::size_t>(h) * words_ + w] ^= z_[static_cast<std::size_t>(src) * words_ + w];
    }
  }

  /// acc <- row src * acc.
  void accumulate(ScratchRow& acc, int src) const {
    int ph = acc.phase4 + 2 * sign_[src] + row_phase_sum(src, acc.x, acc.z);
    acc.phase4 = ((ph % 4) + 4) % 4;
    if (acc.phase4 != 0 && acc.phase4 != 2)
      throw std::logic_error("tableau accumulate: non-Hermitian product");
    for (int w = 0; w < words_; ++w) {
      acc.x[w] ^= x_[static_cast<std::size_t>(src) * words_ + w];
      acc.z[w] ^= z_[static_cast<std::size_t>(src) * words_ + w];
    }
  }

  bool anticommutes(const std::vector<std::uint64_t>& px, const std::vector<std::uint64_t>& pz,
                    int row) const {
    int par = 0;
    for (int w = 0; w < words_; ++w) {
      par ^= std::popcount(px[w] & z_[static_cast<std::size_t>(row) * words_ + w]) & 1;
      par ^= std::popcount(pz[w] & x_[static_cast<std::size_t>(row) * words_ + w]) & 1;
    }
    return par;
  }

  bool row_anticommutes(int i, int j) const {
    int par = 0;
    for (int w = 0; w < words_; ++w) {
      par ^= std::popcount(x_[static_cast<std::size_t>(i) * words_ + w] &
                           z_[static_cast<std::size_t>(j) * words_ + w]) & 1;
      par ^= std::popcount(z_[static_cast<std::size_t>(i) * words_ + w] &
                           x_[static_cast<std::size_t>(j) * words_ + w]) & 1;
    }
    return par;
  }

  void rotate_to_z(PauliOp op, int a) {
    if (op == PauliOp::X) {
      h(a);
    } else if (op == PauliOp::Y) {
      sdg(a);
      h(a);
    }
  }

  void rotate_from_z(PauliOp op, int a) {
    if (op == PauliOp::X) {
      h(a);
    } else if (op == PauliOp::Y) {
      h(a);
      s(a);
    }
  }

  int n_;
  int words_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> sign_;
};

/// Cluster state: H on every site, then CZ on every nearest-neighbor pair.
/// Open chains are stabilized by Z_{i-1} X_i Z_{i+1} in the bulk plus the
/// edge operators X_0 Z_1 and Z_{L-2} X_{L-1}; rings close the CZ pattern
/// and carry the bulk stabilizer on every site.
inline StabilizerTableau prepare_cluster_state(int length, Boundary bc = Boundary::open) {
  if (length < 3) throw std::invalid_argument("cluster state: L >= 3 required");
  StabilizerTableau t(length);
  for (int i = 0; i < length; ++i) t.h(i);
  for (int i = 0; i + 1 < length; ++i) t.cz(i, i + 1);
  if (bc == Boundary::periodic) t.cz(length - 1, 0);
  return t;
}

/// Toric-code ground state on an Lx x Ly torus (2*Lx*Ly qubits on bonds),
/// in the sector where both non-contractible Z loops equal +1.
///
/// Starting from |0...0> every vertex operator A_v = prod Z and both logical
/// Z loops are already +1. Each plaquette operator B_p = prod X is then
/// measured; a -1 outcome is repaired with a Z string connecting that
/// plaquette to the last one on the dual lattice, which flips only the two
/// endpoint plaquettes. The final plaquette is fixed by the closed-surface
/// constraint prod_p B_p = I.
inline StabilizerTableau prepare_toric_code(int lx, int ly) {
  if (lx < 2 || ly < 2) throw std::invalid_argument("toric code: extents >= 2 required");
  const Lattice lat = Lattice::square_link(lx, ly);
  StabilizerTableau t(lat.site_count());
  Rng rng(0);  // outcome randomness is corrected away; the state is unique
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) {
      if (x == lx - 1 && y == ly - 1) continue;
      std::vector<PauliString::Factor> f;
      for (int q : lat.plaquette_bonds(x, y)) f.push_back({q, PauliOp::X});
      const int outcome = t.measure_pauli(PauliString(std::move(f)), rng);
      if (outcome == -1) {
        for (int xx = x + 1; xx < lx; ++xx) t.pauli_z(lat.vbond(xx, y));
        for (int yy = y + 1; yy < ly; ++yy) t.pauli_z(lat.hbond(lx - 1, yy));
      }
    }
  }
  return t;
}

}  // namespace tksvm
