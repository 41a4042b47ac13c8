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
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tksvm/errors.hpp"
#include "tksvm/hamiltonian.hpp"
#include "tksvm/rng.hpp"
#include "tksvm/statevector.hpp"

namespace tksvm {

struct GroundState {
  Statevector psi;
  double energy;
};

struct EigensolverOptions {
  double tol = 1e-10;
  int max_iterations = 5000;  // total matvecs across restarts
  int max_basis = 250;
  int dense_threshold_qubits = 10;
};

namespace detail {

using CVec = std::vector<std::complex<double>>;

inline std::complex<double> vdot(const CVec& a, const CVec& b) {
  std::complex<double> s{0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double vnorm(const CVec& a) {
  double s = 0;
  for (const auto& x : a) s += std::norm(x);
  return std::sqrt(s);
}

/// Fix the global phase: largest-magnitude amplitude made real positive.
inline void canonicalize_phase(CVec& v) {
  std::size_t imax = 0;
  double best = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::norm(v[i]);
    if (m > best) {
      best = m;
      imax = i;
    }
  }
  const double mag = std::abs(v[imax]);
  if (mag < 1e-300) return;
  const std::complex<double> rot = std::conj(v[imax]) / mag;
  for (auto& x : v) x *= rot;
}

}  // namespace detail

/// Dense full diagonalization; exact reference path for small systems.
inline GroundState dense_ground_state(const HamiltonianSpec& spec) {
  const int n = spec.site_count();
  if (n > 14) throw std::invalid_argument("dense ground state: more than 14 qubits");
  const auto terms = spec.terms();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& t : terms)
    for (std::size_t i = 0; i < dim; ++i) {
      const double sgn = (std::popcount(i & t.zmask) & 1) ? -t.coeff : t.coeff;
      hmat(i ^ t.xmask, i) += sgn;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hmat);
  if (es.info() != Eigen::Success) throw convergence_error("dense eigensolver failed");
  detail::CVec amp(dim);
  for (std::size_t i = 0; i < dim; ++i) amp[i] = es.eigenvectors()(i, 0);
  detail::canonicalize_phase(amp);
  return {Statevector(n, std::move(amp)), es.eigenvalues()(0)};
}

/// Lanczos with full reorthogonalization and thick restarts from the current
/// Ritz vector. Deterministic: the start vector comes from a fixed seed.
inline GroundState lanczos_ground_state(const HamiltonianSpec& spec,
                                        const EigensolverOptions& opt = {}) {
  const int n = spec.site_count();
  const auto terms = spec.terms();
  const std::size_t dim = std::size_t{1} << n;
  using detail::CVec;

  CVec v(dim);
  Rng rng(0x1a2b3c4d5e6f7788ull);
  for (auto& x : v) x = rng.next_double() - 0.5;
  {
    const double nm = detail::vnorm(v);
    for (auto& x : v) x /= nm;
  }

  const int max_basis = static_cast<int>(std::min<std::size_t>(opt.max_basis, dim));
  int matvecs = 0;
  double theta = 0;
  while (matvecs < opt.max_iterations) {
    std::vector<CVec> basis;
    std::vector<double> alpha, beta;  // beta[j] couples basis[j] and basis[j+1]
    basis.push_back(v);
    for (int j = 0; j < max_basis && matvecs < opt.max_iterations; ++j) {
      CVec w = apply_hamiltonian(terms, basis[j]);
      ++matvecs;
      alpha.push_back(detail::vdot(basis[j], w).real());
      // Remove components along all previous vectors (twice, for stability).
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) {
          const auto c = detail::vdot(u, w);
          for (std::size_t i = 0; i < dim; ++i) w[i] -= c * u[i];
        }
      const double b = detail::vnorm(w);
      // Ritz decomposition of the tridiagonal section.
      const int m = static_cast<int>(alpha.size());
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int k = 0; k < m; ++k) {
        tri(k, k) = alpha[k];
        if (k + 1 < m) tri(k, k + 1) = tri(k + 1, k) = beta[k];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      theta = es.eigenvalues()(0);
      const double resid_est = b * std::abs(es.eigenvectors()(m - 1, 0));
      const bool converged = resid_est < opt.tol * std::max(1.0, std::abs(theta)) ||
                             b < 1e-13 || m == static_cast<int>(dim);
      if (converged || j + 1 == max_basis || matvecs >= opt.max_iterations) {
        v.assign(dim, {0, 0});
        for (int k = 0; k < m; ++k) {
          const double c = es.eigenvectors()(k, 0);
          for (std::size_t i = 0; i < dim; ++i) v[i] += c * basis[k][i];
        }
        const double nm = detail::vnorm(v);
        for (auto& x : v) x /= nm;
        if (converged) {
          detail::canonicalize_phase(v);
          return {Statevector(n, std::move(v)), theta};
        }
        break;  // restart from the current Ritz vector
      }
      beta.push_back(b);
      CVec next(dim);
      for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }
  }
  throw convergence_error("lanczos: no convergence after " + std::to_string(matvecs) +
                          " iterations (last Ritz value " + std::to_string(theta) + ")");
}

/// Ground state of a model Hamiltonian. Dense diagonalization for small
/// systems, Lanczos otherwise; both deterministic up to the fixed sign
/// convention, with degeneracies resolved by the tie-break fields.
inline GroundState ground_state(const HamiltonianSpec& spec, const EigensolverOptions& opt = {}) {
  const int n = spec.site_count();
  if (n > 20) throw std::invalid_argument("ground_state: more than 20 qubits");
  GroundState gs = (n <= opt.dense_threshold_qubits) ? dense_ground_state(spec)
                                                     : lanczos_ground_state(spec, opt);
  // Residual contract: ||H psi - E psi|| below 1e-8.
  const auto terms = spec.terms();
  auto hv = apply_hamiltonian(terms, gs.psi.amplitudes());
  double r2 = 0;
  for (std::size_t i = 0; i < hv.size(); ++i) r2 += std::norm(hv[i] - gs.energy * gs.psi.amplitudes()[i]);
  if (std::sqrt(r2) > 1e-8)
    throw convergence_error("ground_state: residual above tolerance");
  return gs;
}

}  // namespace tksvm
