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

#include "tksvm/povm.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "tksvm/rng.hpp"

using namespace tksvm;

TEST(Povm, Pauli6OutcomeOrderAndBlochs) {
  const Povm p = pauli6();
  ASSERT_EQ(p.size(), 6u);
  const Vec3 expected[6] = {{+1, 0, 0}, {-1, 0, 0}, {0, +1, 0}, {0, -1, 0}, {0, 0, +1}, {0, 0, -1}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(p.weight(i), 1.0 / 3.0);
    for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(map_to_bloch(i, p)[c], expected[i][c]);
  }
}

TEST(Povm, CompletenessWithinTolerance) {
  EXPECT_TRUE(pauli6().is_complete(1e-12));
  EXPECT_TRUE(tetra().is_complete(1e-12));
}

TEST(Povm, TetraGeometry) {
  const Povm t = tetra();
  ASSERT_EQ(t.size(), 4u);
  EXPECT_DOUBLE_EQ(t.bloch(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(t.bloch(0)[1], 0.0);
  EXPECT_DOUBLE_EQ(t.bloch(0)[2], 1.0);
  // All pairwise overlaps equal -1/3 (symmetric POVM).
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) EXPECT_NEAR(dot(t.bloch(i), t.bloch(j)), -1.0 / 3.0, 1e-12);
}

TEST(Povm, OutcomeProbabilitiesPauli6) {
  const Povm p = pauli6();
  const auto up = outcome_probabilities({0, 0, 1}, p);
  const double expected[6] = {1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 3, 0.0};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(up[i], expected[i], 1e-15);

  const auto mixed = outcome_probabilities({0, 0, 0}, p);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(mixed[i], 1.0 / 6, 1e-15);
}

TEST(Povm, OutcomeProbabilitiesTetra) {
  const Povm t = tetra();
  const auto p = outcome_probabilities({0, 0, 1}, t);
  // p_i = (1/4)(1 + S_i . b)
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(p[i], 0.25 * (1.0 - 1.0 / 3.0), 1e-12);
}

TEST(Povm, RejectsInvalidBloch) {
  EXPECT_THROW(outcome_probabilities({1.1, 0, 0}, pauli6()), std::invalid_argument);
}

TEST(Povm, ProbabilityLawOnRandomStates) {
  const Povm p6 = pauli6();
  const Povm t = tetra();
  Rng rng(2024);
  for (int trial = 0; trial < 100000; ++trial) {
    // Uniform direction, uniform radius^3 in the ball.
    Vec3 b;
    double n2;
    do {
      for (int c = 0; c < 3; ++c) b[c] = 2 * rng.next_double() - 1;
      n2 = dot(b, b);
    } while (n2 > 1.0);
    for (const Povm* povm : {&p6, &t}) {
      const auto p = outcome_probabilities(b, *povm);
      double sum = 0;
      for (double x : p) {
        ASSERT_GE(x, -1e-12);
        sum += x;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Povm, InformationalCompleteness) {
  EXPECT_TRUE(is_informationally_complete(pauli6()));
  EXPECT_TRUE(is_informationally_complete(tetra()));
  // Two-outcome z-basis POVM spans only 2 of 4 operator dimensions.
  const Povm zbasis("zbasis", {{1.0, {0, 0, 1}}, {1.0, {0, 0, -1}}});
  EXPECT_TRUE(zbasis.is_complete(1e-12));
  EXPECT_FALSE(is_informationally_complete(zbasis));
}

TEST(Povm, TomographicReconstruction) {
  // For an IC POVM, least squares on exact probabilities recovers the state.
  Rng rng(55);
  for (const Povm& povm : {pauli6(), tetra()}) {
    Eigen::MatrixXd design(povm.size(), 3);
    Eigen::VectorXd offset(povm.size());
    for (std::size_t i = 0; i < povm.size(); ++i) {
      for (int c = 0; c < 3; ++c) design(i, c) = 0.5 * povm.weight(i) * povm.bloch(i)[c];
      offset(i) = 0.5 * povm.weight(i);
    }
    for (int trial = 0; trial < 200; ++trial) {
      Vec3 b;
      do {
        for (int c = 0; c < 3; ++c) b[c] = 2 * rng.next_double() - 1;
      } while (dot(b, b) > 1.0);
      const auto probs = outcome_probabilities(b, povm);
      Eigen::VectorXd rhs(povm.size());
      for (std::size_t i = 0; i < povm.size(); ++i) rhs(i) = probs[i] - offset(i);
      const Eigen::Vector3d rec = design.colPivHouseholderQr().solve(rhs);
      for (int c = 0; c < 3; ++c) ASSERT_NEAR(rec(c), b[c], 1e-10);
    }
  }
}

TEST(Povm, MapToBlochRejectsOutOfRange) {
  EXPECT_THROW(map_to_bloch(6, pauli6()), std::out_of_range);
  EXPECT_THROW(map_to_bloch(4, tetra()), std::out_of_range);
}
