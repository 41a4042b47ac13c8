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
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tksvm/errors.hpp"
#include "tksvm/pauli.hpp"
#include "tksvm/rng.hpp"

namespace tksvm {

/// Full 2^n amplitude vector. Basis index bit q gives the computational
/// state of qubit q (bit 0 is |0>, the +1 eigenstate of Z).
class Statevector {
 public:
  using Complex = std::complex<double>;

  explicit Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 26)
      throw std::invalid_argument("statevector: qubit count out of supported range");
    amp_.assign(std::size_t{1} << n_, Complex{0, 0});
    amp_[0] = 1.0;
  }

  Statevector(int n_qubits, std::vector<Complex> amplitudes) : n_(n_qubits), amp_(std::move(amplitudes)) {
    if (amp_.size() != (std::size_t{1} << n_))
      throw std::invalid_argument("statevector: amplitude count mismatch");
  }

  int qubit_count() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  std::vector<Complex>& amplitudes() { return amp_; }

  double norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double nm = norm();
    if (nm < 1e-300) throw std::runtime_error("statevector: zero norm");
    for (auto& a : amp_) a /= nm;
  }

  void h(int q) {
    check(q);
    const double inv = 1.0 / std::sqrt(2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      const Complex a0 = amp_[i], a1 = amp_[i | bit];
      amp_[i] = inv * (a0 + a1);
      amp_[i | bit] = inv * (a0 - a1);
    }
  }

  void s(int q) {
    check(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_[i] *= Complex{0, 1};
  }

  void sdg(int q) {
    check(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_[i] *= Complex{0, -1};
  }

  void cz(int a, int b) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("cz: identical qubits");
    const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & ma) && (i & mb)) amp_[i] = -amp_[i];
  }

  /// Measure the Pauli `basis` on qubit q and collapse. The qubit frame is
  /// rotated so the operator becomes Z and is not rotated back; use on a
  /// per-shot copy. Returns +1 or -1.
  int measure_basis(PauliOp basis, int q, Rng& rng) {
    check(q);
    if (basis == PauliOp::X) {
      h(q);
    } else if (basis == PauliOp::Y) {
      sdg(q);
      h(q);
    }
    const std::size_t bit = std::size_t{1} << q;
    double p_plus = 0;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if (!(i & bit)) p_plus += std::norm(amp_[i]);
    const bool plus = rng.next_double() < p_plus;
    const double p_branch = plus ? p_plus : 1.0 - p_plus;
    if (p_branch < 1e-14)
      throw std::runtime_error("statevector measurement: branch probability underflow");
    const double scale = 1.0 / std::sqrt(p_branch);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (((i & bit) == 0) == plus)
        amp_[i] *= scale;
      else
        amp_[i] = 0;
    }
    return plus ? +1 : -1;
  }

  /// Exact <P> by direct operator application. The test oracle for sampling.
  double expectation(const PauliString& p) const {
    if (p.max_site() >= n_) throw std::out_of_range("expectation: site out of range");
    std::uint64_t xm, zm;
    p.to_masks(xm, zm);
    int n_y = 0;
    for (const auto& f : p.factors) n_y += (f.op == PauliOp::Y);
    Complex acc{0, 0};
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      const double sgn = (std::popcount(i & zm) & 1) ? -1.0 : 1.0;
      acc += std::conj(amp_[i ^ xm]) * sgn * amp_[i];
    }
    // P = sign * i^{n_y} * X^x Z^z with Y = i X Z per site.
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex val = static_cast<double>(p.sign) * kIPow[n_y % 4] * acc;
    return val.real();
  }

 private:
  void check(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("statevector: qubit index out of range");
  }

  int n_;
  std::vector<Complex> amp_;
};

/// Dense cluster-state construction (same circuit as the tableau path).
inline Statevector cluster_state_vector(int length) {
  if (length < 3) throw std::invalid_argument("cluster state: L >= 3 required");
  Statevector psi(length);
  for (int i = 0; i < length; ++i) psi.h(i);
  for (int i = 0; i + 1 < length; ++i) psi.cz(i, i + 1);
  return psi;
}

/// Product state with one qubit per site along +x.
inline Statevector plus_state_vector(int length) {
  Statevector psi(length);
  for (int i = 0; i < length; ++i) psi.h(i);
  return psi;
}

}  // namespace tksvm
