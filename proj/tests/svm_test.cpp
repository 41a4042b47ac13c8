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

#include "tksvm/svm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tksvm/rng.hpp"

using namespace tksvm;

namespace {

FeatureVector fv(std::vector<double> v) {
  FeatureVector f;
  f.values = std::move(v);
  f.r = 1;
  f.n = 1;
  f.samples_averaged = 1;
  return f;
}

// Toy problem separable by the quadratic kernel: label sign(u1^2 - u2^2).
TrainingSet separable_toy(int n_points, std::uint64_t seed, double margin = 0.05) {
  Rng rng(seed);
  TrainingSet ts;
  while (static_cast<int>(ts.vectors.size()) < n_points) {
    const double u1 = 2 * rng.next_double() - 1;
    const double u2 = 2 * rng.next_double() - 1;
    const double f = u1 * u1 - u2 * u2;
    if (std::abs(f) < margin) continue;
    ts.vectors.push_back(fv({u1, u2}));
    ts.labels.push_back(f > 0 ? +1 : -1);
  }
  return ts;
}

// Two classes drawn from Gaussians around given means.
TrainingSet gaussian_classes(int per_class, const std::vector<double>& mean_pos,
                             const std::vector<double>& mean_neg, double sigma,
                             std::uint64_t seed) {
  Rng rng(seed);
  auto gauss = [&rng] {
    const double u1 = std::max(rng.next_double(), 1e-300);
    const double u2 = rng.next_double();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
  };
  TrainingSet ts;
  for (int i = 0; i < per_class; ++i) {
    std::vector<double> a(mean_pos.size()), b(mean_neg.size());
    for (std::size_t d = 0; d < a.size(); ++d) {
      a[d] = mean_pos[d] + sigma * gauss();
      b[d] = mean_neg[d] + sigma * gauss();
    }
    ts.vectors.push_back(fv(std::move(a)));
    ts.labels.push_back(+1);
    ts.vectors.push_back(fv(std::move(b)));
    ts.labels.push_back(-1);
  }
  return ts;
}

// KKT feasibility of the raw dual solution; the optimality certificate of
// the convex dual, so it doubles as the solver oracle.
void expect_dual_feasible(const TrainedModel& m) {
  const double box = 1.0 / static_cast<double>(m.n_train);
  double sum = 0, sum_y = 0;
  for (std::size_t s = 0; s < m.support_count(); ++s) {
    const double a = m.raw_dual(s);
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, box + 1e-12);
    sum += a;
    sum_y += a * m.labels[s];
  }
  EXPECT_NEAR(sum_y, 0.0, 1e-8);
  EXPECT_GE(sum, m.nu - 1e-8);
}

}  // namespace

TEST(Svm, SeparableToyReachesFullTrainingAccuracy) {
  const TrainingSet ts = separable_toy(200, 7);
  SvmOptions opt;
  opt.nu = 0.2;
  const TrainedModel m = train(ts, opt);
  EXPECT_DOUBLE_EQ(accuracy(m, ts), 1.0);
  expect_dual_feasible(m);
}

TEST(Svm, TwoVectorProblem) {
  TrainingSet ts;
  for (int i = 0; i < 3; ++i) {
    ts.vectors.push_back(fv({1.0, 0.2}));
    ts.labels.push_back(+1);
    ts.vectors.push_back(fv({0.1, 0.8}));
    ts.labels.push_back(-1);
  }
  const TrainedModel m = train(ts);
  EXPECT_GT(decide(m, fv({1.0, 0.2})), 0.0);
  EXPECT_LT(decide(m, fv({0.1, 0.8})), 0.0);
  expect_dual_feasible(m);
}

TEST(Svm, KktInvariantsAcrossProblems) {
  for (std::uint64_t seed : {11u, 22u, 33u, 44u, 55u}) {
    const TrainingSet ts = gaussian_classes(40, {0.3, 0.1, 0.0}, {0.0, 0.2, 0.25}, 0.1, seed);
    for (double nu : {0.2, 0.5, 0.8}) {
      SvmOptions opt;
      opt.nu = nu;
      const TrainedModel m = train(ts, opt);
      expect_dual_feasible(m);
    }
  }
}

TEST(Svm, DecisionOfZeroVectorIsMinusBias) {
  const TrainingSet ts = separable_toy(100, 13);
  const TrainedModel m = train(ts);
  EXPECT_DOUBLE_EQ(decide(m, fv({0.0, 0.0})), -m.bias);
}

TEST(Svm, SupportSumEqualsCoefficientForm) {
  // The kernel expansion equals the assembled quadratic form in the
  // coefficient columns.
  const TrainingSet ts =
      gaussian_classes(30, {0.2, 0.0, 0.1, 0.05}, {0.0, 0.15, 0.0, 0.2}, 0.08, 3);
  const TrainedModel m = train(ts);
  std::vector<CoefficientColumn> cols;
  for (int nu = 0; nu < m.dim; ++nu) cols.push_back(coefficient_column(m, nu));
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> phi(m.dim);
    for (auto& x : phi) x = rng.next_double() - 0.5;
    double quad = 0;
    for (int nu = 0; nu < m.dim; ++nu)
      for (int mu = 0; mu < m.dim; ++mu) quad += cols[nu].values[mu] * phi[mu] * phi[nu];
    const double d = decide(m, phi);
    ASSERT_NEAR(d, quad - m.bias, 1e-8 * std::max(1.0, std::abs(d)));
  }
}

TEST(Svm, CoefficientColumnsAreSymmetric) {
  const TrainingSet ts = gaussian_classes(25, {0.2, 0.0, 0.1}, {0.0, 0.15, 0.05}, 0.1, 5);
  const TrainedModel m = train(ts);
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const int a = static_cast<int>(rng.next_below(m.dim));
    const int b = static_cast<int>(rng.next_below(m.dim));
    const auto ca = coefficient_column(m, a);
    const auto cb = coefficient_column(m, b);
    ASSERT_NEAR(ca.values[b], cb.values[a], 1e-10);
  }
}

TEST(Svm, ColumnWeightBasics) {
  // A feature that is zero across the training set has zero weight.
  TrainingSet ts;
  Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    const double v = rng.next_double() - 0.5;
    ts.vectors.push_back(fv({v, 0.0, 0.3 + 0.1 * v}));
    ts.labels.push_back(i % 2 ? +1 : -1);
  }
  const TrainedModel m = train(ts);
  EXPECT_DOUBLE_EQ(column_weight(m, 1), 0.0);
  EXPECT_GT(column_weight(m, 2), 0.0);
  EXPECT_THROW(column_weight(m, 3), std::out_of_range);
  EXPECT_THROW(coefficient_column(m, -1), std::out_of_range);
}

TEST(Svm, DeterministicTraining) {
  const TrainingSet ts = gaussian_classes(30, {0.2, 0.1}, {0.0, 0.25}, 0.1, 31);
  const TrainedModel a = train(ts);
  const TrainedModel b = train(ts);
  ASSERT_EQ(a.support_count(), b.support_count());
  EXPECT_EQ(a.bias, b.bias);
  for (std::size_t s = 0; s < a.support_count(); ++s) EXPECT_EQ(a.duals[s], b.duals[s]);
}

TEST(Svm, TrainingOrderPermutationKeepsColumnWeights) {
  const TrainingSet ts = gaussian_classes(30, {0.25, 0.05, 0.0}, {0.0, 0.2, 0.1}, 0.08, 37);
  TrainingSet shuffled = ts;
  Rng rng(41);
  for (std::size_t i = shuffled.vectors.size(); i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(shuffled.vectors[i - 1], shuffled.vectors[j]);
    std::swap(shuffled.labels[i - 1], shuffled.labels[j]);
  }
  const TrainedModel a = train(ts);
  const TrainedModel b = train(shuffled);
  // Agreement is limited by the solver KKT tolerance, amplified by the
  // margin rescaling of the duals.
  for (int nu = 0; nu < a.dim; ++nu) {
    const double wa = column_weight(a, nu), wb = column_weight(b, nu);
    ASSERT_NEAR(wa, wb, 1e-3 * std::max(1.0, std::max(wa, wb))) << nu;
  }
}

TEST(Svm, ScalingPreservesColumnRanking) {
  const TrainingSet ts =
      gaussian_classes(40, {0.3, 0.02, 0.1, 0.0}, {0.0, 0.25, 0.0, 0.05}, 0.05, 43);
  TrainingSet scaled = ts;
  for (auto& v : scaled.vectors)
    for (auto& x : v.values) x *= 3.0;
  const TrainedModel a = train(ts);
  const TrainedModel b = train(scaled);
  auto ranking = [](const TrainedModel& m) {
    std::vector<std::pair<double, int>> w;
    for (int nu = 0; nu < m.dim; ++nu) w.emplace_back(column_weight(m, nu), nu);
    std::stable_sort(w.begin(), w.end(), [](auto& x, auto& y) { return x.first > y.first; });
    std::vector<int> order;
    for (auto& [weight, nu] : w) order.push_back(nu);
    return order;
  };
  EXPECT_EQ(ranking(a), ranking(b));
}

TEST(Svm, AccuracyBehaviour) {
  const TrainingSet toy = separable_toy(150, 47);
  const TrainedModel m = train(toy, {.nu = 0.2});
  EXPECT_DOUBLE_EQ(accuracy(m, toy), 1.0);

  // No signal: both classes the same zero-mean law, held-out accuracy ~ 0.5.
  const TrainingSet noise = gaussian_classes(100, {0, 0, 0}, {0, 0, 0}, 0.1, 53);
  const TrainedModel mn = train(noise);
  const TrainingSet fresh = gaussian_classes(100, {0, 0, 0}, {0, 0, 0}, 0.1, 59);
  EXPECT_NEAR(accuracy(mn, fresh), 0.5, 0.1);

  EXPECT_THROW(accuracy(m, TrainingSet{}), std::invalid_argument);
}

TEST(Svm, SameDistributionSplitGivesLargeBias) {
  // Two halves of one structured dataset are indistinguishable: the margin
  // collapses while the cloud sits far from the feature-space origin, so the
  // rescaled |bias| (origin distance over margin) blows up. Needs the cloud
  // mean to dominate the noise.
  for (std::uint64_t seed : {101u, 202u, 303u, 404u, 505u}) {
    const TrainingSet ts = gaussian_classes(50, {0.3, 0.2, 0.1}, {0.3, 0.2, 0.1}, 0.002, seed);
    const TrainedModel m = train(ts);
    EXPECT_GT(std::abs(m.bias), 10.0) << seed;
  }
}

TEST(Svm, FeaturelessVersusStructuredClassGivesUnitBias) {
  // One class near the origin, one well separated: the hyperplane sits
  // between them at about half the margin distance from the origin.
  for (std::uint64_t seed : {61u, 62u, 63u}) {
    const TrainingSet ts = gaussian_classes(50, {0.25, 0.1, 0.0}, {0.0, 0.0, 0.0}, 0.005, seed);
    const TrainedModel m = train(ts);
    EXPECT_LT(std::abs(m.bias), 2.0) << seed;
    EXPECT_GT(std::abs(m.bias), 0.5) << seed;
  }
}

TEST(Svm, InfeasibleNuRejected) {
  TrainingSet ts;
  for (int i = 0; i < 100; ++i) {
    ts.vectors.push_back(fv({i * 0.01, 0.5}));
    ts.labels.push_back(i < 10 ? +1 : -1);
  }
  SvmOptions opt;
  opt.nu = 0.5;  // nu_max = 2*10/100 = 0.2
  EXPECT_THROW(train(ts, opt), std::invalid_argument);
  opt.nu = 0.15;
  EXPECT_NO_THROW(train(ts, opt));
}

TEST(Svm, ValidationErrors) {
  TrainingSet ts;
  ts.vectors.push_back(fv({1.0}));
  ts.labels.push_back(+1);
  EXPECT_THROW(train(ts), std::invalid_argument);  // one class only
  ts.vectors.push_back(fv({1.0, 2.0}));
  ts.labels.push_back(-1);
  EXPECT_THROW(train(ts), std::invalid_argument);  // mixed dimensions

  const TrainingSet ok = separable_toy(50, 67);
  const TrainedModel m = train(ok, {.nu = 0.2});
  EXPECT_THROW(decide(m, fv({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST(Svm, LruCachePathMatchesDense) {
  const TrainingSet ts = gaussian_classes(60, {0.2, 0.1}, {0.0, 0.25}, 0.1, 71);
  SvmOptions lru_opt;
  lru_opt.cache_mb = 0;  // forces the row cache
  const TrainedModel a = train(ts);
  const TrainedModel b = train(ts, lru_opt);
  ASSERT_EQ(a.support_count(), b.support_count());
  EXPECT_NEAR(a.bias, b.bias, 1e-10 * std::max(1.0, std::abs(a.bias)));
  for (std::size_t s = 0; s < a.support_count(); ++s)
    EXPECT_NEAR(a.duals[s], b.duals[s], 1e-10 * std::max(1.0, std::abs(a.duals[s])));
}
