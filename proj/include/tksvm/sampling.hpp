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
#include <vector>

#include "tksvm/parallel.hpp"
#include "tksvm/povm.hpp"
#include "tksvm/rng.hpp"
#include "tksvm/snapshot.hpp"
#include "tksvm/stabilizer.hpp"
#include "tksvm/statevector.hpp"

namespace tksvm {

// All Pauli-6 samplers share one convention: per shot, sites are visited in
// ascending order; per site, one RNG draw picks the basis (0:x 1:y 2:z) and
// the measurement consumes further draws as needed. Shot i uses the RNG
// stream derive_stream(seed, i), so results do not depend on threading.

namespace detail {

inline std::uint8_t pauli6_outcome(PauliOp basis, int result) {
  return static_cast<std::uint8_t>(2 * static_cast<int>(basis) + (result == +1 ? 0 : 1));
}

inline PauliOp draw_basis(Rng& rng) { return static_cast<PauliOp>(rng.next_below(3)); }

}  // namespace detail

/// Pauli-6 snapshots of a stabilizer state. Each shot measures a private
/// copy of the tableau.
inline std::vector<Snapshot> sample_pauli6_tableau(const StabilizerTableau& state,
                                                   std::size_t shots, std::uint64_t seed,
                                                   int threads = 0) {
  const int sites = state.qubit_count();
  std::vector<Snapshot> out(shots);
  parallel_for(shots, threads, [&](std::size_t shot) {
    Rng rng = derive_stream(seed, shot);
    StabilizerTableau t = state;
    auto& outcomes = out[shot].outcomes;
    outcomes.resize(sites);
    for (int q = 0; q < sites; ++q) {
      const PauliOp basis = detail::draw_basis(rng);
      const int r = t.measure_basis(basis, q, rng);
      outcomes[q] = detail::pauli6_outcome(basis, r);
    }
  });
  return out;
}

/// Pauli-6 snapshots of a statevector; per shot the (copied) state collapses
/// site by site, so the joint outcome distribution is exact.
inline std::vector<Snapshot> sample_pauli6_statevector(const Statevector& state,
                                                       std::size_t shots, std::uint64_t seed,
                                                       int threads = 0) {
  const int sites = state.qubit_count();
  if (sites > 20) throw std::invalid_argument("sample_pauli6_statevector: more than 20 qubits");
  std::vector<Snapshot> out(shots);
  parallel_for(shots, threads, [&](std::size_t shot) {
    Rng rng = derive_stream(seed, shot);
    Statevector psi = state;
    auto& outcomes = out[shot].outcomes;
    outcomes.resize(sites);
    for (int q = 0; q < sites; ++q) {
      const PauliOp basis = detail::draw_basis(rng);
      const int r = psi.measure_basis(basis, q, rng);
      outcomes[q] = detail::pauli6_outcome(basis, r);
    }
  });
  return out;
}

/// Product-state snapshots: every site drawn independently from the POVM
/// outcome law of its Bloch vector.
inline std::vector<Snapshot> sample_product(const std::vector<Vec3>& blochs, const Povm& povm,
                                            std::size_t shots, std::uint64_t seed,
                                            int threads = 0) {
  std::vector<std::vector<double>> cdf(blochs.size());
  for (std::size_t s = 0; s < blochs.size(); ++s) {
    auto p = outcome_probabilities(blochs[s], povm);
    double acc = 0;
    cdf[s].resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) cdf[s][i] = (acc += p[i]);
  }
  std::vector<Snapshot> out(shots);
  parallel_for(shots, threads, [&](std::size_t shot) {
    Rng rng = derive_stream(seed, shot);
    auto& outcomes = out[shot].outcomes;
    outcomes.resize(blochs.size());
    for (std::size_t s = 0; s < blochs.size(); ++s) {
      const double u = rng.next_double();
      std::size_t k = 0;
      while (k + 1 < cdf[s].size() && u >= cdf[s][k]) ++k;
      outcomes[s] = static_cast<std::uint8_t>(k);
    }
  });
  return out;
}

/// The featureless class: every site outcome uniform over the POVM outcomes.
inline std::vector<Snapshot> random_snapshots(const Lattice& lattice, const Povm& povm,
                                              std::size_t shots, std::uint64_t seed,
                                              int threads = 0) {
  const int sites = lattice.site_count();
  const std::uint64_t k = povm.size();
  std::vector<Snapshot> out(shots);
  parallel_for(shots, threads, [&](std::size_t shot) {
    Rng rng = derive_stream(seed, shot);
    auto& outcomes = out[shot].outcomes;
    outcomes.resize(sites);
    for (int q = 0; q < sites; ++q) outcomes[q] = static_cast<std::uint8_t>(rng.next_below(k));
  });
  return out;
}

}  // namespace tksvm
