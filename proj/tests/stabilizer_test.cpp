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

#include "tksvm/stabilizer.hpp"

#include <gtest/gtest.h>

#include "tksvm/lattice.hpp"
#include "tksvm/rng.hpp"
#include "tksvm/statevector.hpp"

using namespace tksvm;

namespace {

PauliString random_pauli(Rng& rng, int n_qubits, int max_weight) {
  const int w = 1 + static_cast<int>(rng.next_below(max_weight));
  std::vector<int> sites(n_qubits);
  for (int i = 0; i < n_qubits; ++i) sites[i] = i;
  // Partial Fisher-Yates for a random support.
  for (int i = 0; i < w; ++i) {
    const int j = i + static_cast<int>(rng.next_below(n_qubits - i));
    std::swap(sites[i], sites[j]);
  }
  std::vector<PauliString::Factor> f;
  for (int i = 0; i < w; ++i)
    f.push_back({sites[i], static_cast<PauliOp>(rng.next_below(3))});
  return PauliString(std::move(f), rng.next_bool() ? -1 : +1);
}

}  // namespace

TEST(Stabilizer, ClusterStateStabilizers) {
  const auto t = prepare_cluster_state(3);
  EXPECT_DOUBLE_EQ(t.expectation(cluster_stabilizer(1)), 1.0);  // Z0 X1 Z2
  EXPECT_DOUBLE_EQ(t.expectation(PauliString({{0, PauliOp::X}, {1, PauliOp::Z}})), 1.0);
  EXPECT_DOUBLE_EQ(t.expectation(PauliString({{1, PauliOp::Z}, {2, PauliOp::X}})), 1.0);
  // A single X in the bulk anticommutes with neighboring stabilizers.
  EXPECT_DOUBLE_EQ(t.expectation(PauliString({{0, PauliOp::Z}})), 0.0);
}

TEST(Stabilizer, ClusterStateMatchesStatevectorOracle) {
  const int length = 6;
  const auto t = prepare_cluster_state(length);
  const auto psi = cluster_state_vector(length);
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_pauli(rng, length, 4);
    ASSERT_NEAR(t.expectation(p), psi.expectation(p), 1e-12) << p.str();
  }
}

TEST(Stabilizer, RandomCliffordCircuitMatchesStatevector) {
  const int n = 4;
  StabilizerTableau t(n);
  Statevector psi(n);
  Rng rng(99);
  for (int step = 0; step < 60; ++step) {
    const int gate = static_cast<int>(rng.next_below(4));
    const int a = static_cast<int>(rng.next_below(n));
    int b = static_cast<int>(rng.next_below(n));
    if (b == a) b = (a + 1) % n;
    switch (gate) {
      case 0:
        t.h(a);
        psi.h(a);
        break;
      case 1:
        t.s(a);
        psi.s(a);
        break;
      case 2:
        t.cnot(a, b);
        // CNOT = H(b) CZ(a,b) H(b)
        psi.h(b);
        psi.cz(a, b);
        psi.h(b);
        break;
      default:
        t.cz(a, b);
        psi.cz(a, b);
        break;
    }
    ASSERT_TRUE(t.is_valid());
  }
  Rng prng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_pauli(prng, n, 4);
    ASSERT_NEAR(t.expectation(p), psi.expectation(p), 1e-12) << p.str();
  }
}

TEST(Stabilizer, MeasurementCollapsesAndRepeats) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = prepare_cluster_state(5);
    const int q = static_cast<int>(rng.next_below(5));
    const auto basis = static_cast<PauliOp>(rng.next_below(3));
    const int first = t.measure_basis(basis, q, rng);
    ASSERT_TRUE(t.is_valid());
    // The frame was rotated so the measured operator is now Z_q.
    const int again = t.measure_z(q, rng);
    ASSERT_EQ(first, again);
  }
}

TEST(Stabilizer, DeterministicZMeasurementOnComputationalState) {
  StabilizerTableau t(3);
  Rng rng(1);
  EXPECT_EQ(t.measure_z(0, rng), +1);
  EXPECT_EQ(t.measure_z(1, rng), +1);
}

TEST(Stabilizer, StringOperatorsOnClusterState) {
  const auto t = prepare_cluster_state(9);
  // Odd string = product of even-centered stabilizers, always +1.
  EXPECT_DOUBLE_EQ(t.expectation(odd_string(0, 5)), 1.0);
  EXPECT_DOUBLE_EQ(t.expectation(odd_string(2, 7)), 1.0);
  // Dense string of length n carries sign (-1)^n; verified against the
  // independent statevector oracle as well.
  const auto psi = cluster_state_vector(9);
  for (int n = 4; n <= 7; ++n) {
    const auto s = dense_string(1, n);
    const double expected = (n % 2 == 0) ? 1.0 : -1.0;
    EXPECT_DOUBLE_EQ(t.expectation(s), expected) << s.str();
    EXPECT_NEAR(psi.expectation(s), expected, 1e-12) << s.str();
  }
}

TEST(Stabilizer, PeriodicClusterStateIsTranslationInvariant) {
  const int length = 8;
  const auto t = prepare_cluster_state(length, Boundary::periodic);
  ASSERT_TRUE(t.is_valid());
  for (int i = 0; i < length; ++i) {
    const PauliString wrap({{(i + length - 1) % length, PauliOp::Z},
                            {i, PauliOp::X},
                            {(i + 1) % length, PauliOp::Z}});
    EXPECT_DOUBLE_EQ(t.expectation(wrap), 1.0) << i;
  }
}

TEST(Stabilizer, ToricCodeStabilizersAllPlusOne) {
  for (const auto [lx, ly] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 2}}) {
    const Lattice lat = Lattice::square_link(lx, ly);
    const auto t = prepare_toric_code(lx, ly);
    EXPECT_EQ(t.qubit_count(), 2 * lx * ly);
    ASSERT_TRUE(t.is_valid());
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        std::vector<PauliString::Factor> av, bp;
        for (int q : lat.vertex_star(x, y)) av.push_back({q, PauliOp::Z});
        for (int q : lat.plaquette_bonds(x, y)) bp.push_back({q, PauliOp::X});
        EXPECT_DOUBLE_EQ(t.expectation(PauliString(std::move(av))), 1.0)
            << "A_v at (" << x << "," << y << ") on " << lx << "x" << ly;
        EXPECT_DOUBLE_EQ(t.expectation(PauliString(std::move(bp))), 1.0)
            << "B_p at (" << x << "," << y << ") on " << lx << "x" << ly;
      }
    // Logical sector fixed to +1 for both non-contractible Z loops.
    std::vector<PauliString::Factor> loop1, loop2;
    for (int x = 0; x < lx; ++x) loop1.push_back({lat.vbond(x, 0), PauliOp::Z});
    for (int y = 0; y < ly; ++y) loop2.push_back({lat.hbond(0, y), PauliOp::Z});
    EXPECT_DOUBLE_EQ(t.expectation(PauliString(std::move(loop1))), 1.0);
    EXPECT_DOUBLE_EQ(t.expectation(PauliString(std::move(loop2))), 1.0);
  }
}

TEST(Stabilizer, ToricCode18Qubits) {
  const auto t = prepare_toric_code(3, 3);
  EXPECT_EQ(t.qubit_count(), 18);
}

TEST(Stabilizer, ToricRejectsSmallExtents) {
  EXPECT_THROW(prepare_toric_code(1, 3), std::invalid_argument);
}

TEST(Stabilizer, ClusterRejectsShortChains) {
  EXPECT_THROW(prepare_cluster_state(2), std::invalid_argument);
}

TEST(Stabilizer, ExpectationRejectsOutOfRange) {
  const auto t = prepare_cluster_state(4);
  EXPECT_THROW(t.expectation(PauliString({{7, PauliOp::X}})), std::out_of_range);
}
