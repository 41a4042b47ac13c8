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

#include "tksvm/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tksvm/stabilizer.hpp"
#include "tksvm/statevector.hpp"

using namespace tksvm;

namespace {

// Mean and standard error of the mapped product Prod_k S^{c_k}_{i_k} over
// snapshots, computed directly from outcomes (independent of the features
// module).
struct ProductStats {
  double mean;
  double se;
};

ProductStats product_estimator(const std::vector<Snapshot>& snaps, const PauliString& p) {
  const Povm povm = pauli6();
  double sum = 0, sum2 = 0;
  for (const auto& s : snaps) {
    double prod = 1;
    for (const auto& f : p.factors) {
      const int axis = static_cast<int>(f.op);
      prod *= map_to_bloch(s.outcomes[f.site], povm)[axis];
    }
    sum += prod;
    sum2 += prod * prod;
  }
  const double n = static_cast<double>(snaps.size());
  const double mean = sum / n;
  const double var = std::max(sum2 / n - mean * mean, 1e-300);
  return {mean, std::sqrt(var / n)};
}

// Apply a single-site Pauli to raw amplitudes (test-local helper).
void apply_pauli(std::vector<std::complex<double>>& amp, int q, PauliOp op) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    const auto a0 = amp[i], a1 = amp[i | bit];
    switch (op) {
      case PauliOp::X:
        amp[i] = a1;
        amp[i | bit] = a0;
        break;
      case PauliOp::Y:
        amp[i] = std::complex<double>{0, -1} * a1;
        amp[i | bit] = std::complex<double>{0, 1} * a0;
        break;
      case PauliOp::Z:
        amp[i | bit] = -a1;
        break;
    }
  }
}

// Exact Pauli-6 joint law of a statevector: p(outcomes) indexed base-6.
std::vector<double> exact_pauli6_joint(const Statevector& psi) {
  const int n = psi.qubit_count();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 6;
  std::vector<double> law(total);
  for (std::size_t code = 0; code < total; ++code) {
    auto amp = psi.amplitudes();
    std::size_t c = code;
    for (int q = 0; q < n; ++q) {
      const int outcome = static_cast<int>(c % 6);
      c /= 6;
      const auto basis = static_cast<PauliOp>(outcome / 2);
      const double sign = outcome % 2 == 0 ? 1.0 : -1.0;
      auto rotated = amp;
      apply_pauli(rotated, q, basis);
      for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = 0.5 * (amp[i] + sign * rotated[i]);
    }
    double norm2 = 0;
    for (const auto& a : amp) norm2 += std::norm(a);
    law[code] = norm2 / std::pow(3.0, n);
  }
  return law;
}

std::size_t snapshot_code(const Snapshot& s) {
  std::size_t code = 0;
  for (std::size_t q = s.outcomes.size(); q-- > 0;) code = code * 6 + s.outcomes[q];
  return code;
}

Statevector random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::complex<double>> amp(std::size_t{1} << n);
  for (auto& a : amp) a = {rng.next_double() - 0.5, rng.next_double() - 0.5};
  Statevector psi(n, std::move(amp));
  psi.normalize();
  return psi;
}

}  // namespace

TEST(Sampling, SingleQubitZeroStateFrequencies) {
  StabilizerTableau t(1);
  const std::size_t shots = 100000;
  const auto snaps = sample_pauli6_tableau(t, shots, 11);
  std::vector<double> freq(6, 0);
  for (const auto& s : snaps) freq[s.outcomes[0]] += 1.0 / shots;
  const double expected[6] = {1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 3, 0.0};
  for (int o = 0; o < 6; ++o) {
    const double sigma = std::sqrt(expected[o] * (1 - expected[o]) / shots) + 1e-9;
    EXPECT_NEAR(freq[o], expected[o], 3 * sigma + 1e-12) << o;
  }
}

TEST(Sampling, PlusProductStateStatevectorFrequencies) {
  const auto psi = plus_state_vector(4);
  const std::size_t shots = 60000;
  const auto snaps = sample_pauli6_statevector(psi, shots, 7);
  const double expected[6] = {1.0 / 3, 0.0, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  std::vector<double> freq(6, 0);
  for (const auto& s : snaps)
    for (int q = 0; q < 4; ++q) freq[s.outcomes[q]] += 1.0 / (4.0 * shots);
  for (int o = 0; o < 6; ++o) {
    const double sigma = std::sqrt(expected[o] * (1 - expected[o]) / (4.0 * shots)) + 1e-9;
    EXPECT_NEAR(freq[o], expected[o], 4 * sigma + 1e-12) << o;
  }
}

TEST(Sampling, ClusterStateStringEstimator) {
  const auto t = prepare_cluster_state(3);
  const auto snaps = sample_pauli6_tableau(t, 200000, 23);
  const auto stats = product_estimator(snaps, cluster_stabilizer(1));
  EXPECT_NEAR(stats.mean, 1.0 / 27.0, 4 * stats.se);
}

TEST(Sampling, GhzPairZzEstimator) {
  Statevector ghz(2, {1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)});
  const auto snaps = sample_pauli6_statevector(ghz, 200000, 29);
  const auto stats = product_estimator(snaps, PauliString({{0, PauliOp::Z}, {1, PauliOp::Z}}));
  EXPECT_NEAR(stats.mean, 1.0 / 9.0, 4 * stats.se);
}

TEST(Sampling, EstimatorIdentityRandomStatesAndStrings) {
  // E[prod S] = 3^{-r} <P> against the exact statevector oracle.
  Rng meta(404);
  int checked = 0;
  for (int rep = 0; rep < 4; ++rep) {
    const auto psi = random_state(6, 1000 + rep);
    const auto snaps = sample_pauli6_statevector(psi, 60000, 500 + rep);
    for (int k = 0; k < 6; ++k) {
      const int r = 1 + static_cast<int>(meta.next_below(4));
      std::vector<int> sites(6);
      for (int i = 0; i < 6; ++i) sites[i] = i;
      for (int i = 0; i < r; ++i) {
        const int j = i + static_cast<int>(meta.next_below(6 - i));
        std::swap(sites[i], sites[j]);
      }
      std::vector<PauliString::Factor> f;
      for (int i = 0; i < r; ++i) f.push_back({sites[i], static_cast<PauliOp>(meta.next_below(3))});
      const PauliString p(std::move(f));
      const auto stats = product_estimator(snaps, p);
      const double expected = psi.expectation(p) / std::pow(3.0, r);
      ASSERT_NEAR(stats.mean, expected, 5 * stats.se) << p.str();
      ++checked;
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Sampling, TableauAndStatevectorSamplersAgreeWithExactLaw) {
  // Both samplers target the same distribution; each empirical joint at 1e6
  // shots must sit within TV 0.02 of the exactly computed Pauli-6 law.
  const int length = 4;
  const auto t = prepare_cluster_state(length);
  const auto psi = cluster_state_vector(length);
  const auto law = exact_pauli6_joint(psi);

  const std::size_t shots = 1000000;
  for (int which = 0; which < 2; ++which) {
    const auto snaps = which == 0 ? sample_pauli6_tableau(t, shots, 31)
                                  : sample_pauli6_statevector(psi, shots, 37);
    std::vector<double> freq(law.size(), 0.0);
    for (const auto& s : snaps) freq[snapshot_code(s)] += 1.0 / shots;
    double tv = 0;
    for (std::size_t i = 0; i < law.size(); ++i) tv += std::abs(freq[i] - law[i]);
    tv /= 2;
    EXPECT_LT(tv, 0.02) << (which == 0 ? "tableau" : "statevector");
  }
}

TEST(Sampling, ProductSampler) {
  const Povm povm = pauli6();
  const std::size_t shots = 120000;
  {
    std::vector<Vec3> blochs(5, Vec3{1, 0, 0});
    const auto snaps = sample_product(blochs, povm, shots, 41);
    const auto stats = product_estimator(snaps, PauliString({{2, PauliOp::X}}));
    EXPECT_NEAR(stats.mean, 1.0 / 3.0, 4 * stats.se);
  }
  {
    std::vector<Vec3> blochs;
    for (int i = 0; i < 6; ++i) blochs.push_back({i % 2 ? -1.0 : 1.0, 0, 0});
    const auto snaps = sample_product(blochs, povm, shots, 43);
    for (int i = 0; i < 6; ++i) {
      const auto stats = product_estimator(snaps, PauliString({{i, PauliOp::X}}));
      const double staggered = (i % 2 ? -1 : 1) / 3.0;
      EXPECT_NEAR(stats.mean, staggered, 4 * stats.se) << i;
    }
  }
  {
    std::vector<Vec3> blochs(3, Vec3{0, 0, 0});
    const auto snaps = sample_product(blochs, povm, 60000, 47);
    std::vector<double> freq(6, 0);
    for (const auto& s : snaps)
      for (int q = 0; q < 3; ++q) freq[s.outcomes[q]] += 1.0 / (3.0 * 60000);
    for (int o = 0; o < 6; ++o) EXPECT_NEAR(freq[o], 1.0 / 6, 0.006) << o;
  }
  EXPECT_THROW(sample_product({Vec3{1.5, 0, 0}}, povm, 10, 1), std::invalid_argument);
}

TEST(Sampling, RandomSnapshotsUniform) {
  const auto lat = Lattice::chain(8);
  const auto snaps = random_snapshots(lat, pauli6(), 60000, 53);
  std::vector<double> freq(6, 0);
  for (const auto& s : snaps)
    for (int q = 0; q < 8; ++q) freq[s.outcomes[q]] += 1.0 / (8.0 * 60000);
  for (int o = 0; o < 6; ++o) {
    const double sigma = std::sqrt((1.0 / 6) * (5.0 / 6) / (8.0 * 60000));
    EXPECT_NEAR(freq[o], 1.0 / 6, 3 * sigma) << o;
  }
}

TEST(Sampling, DeterministicAcrossThreads) {
  const auto t = prepare_cluster_state(5);
  const auto a = sample_pauli6_tableau(t, 500, 77, 1);
  const auto b = sample_pauli6_tableau(t, 500, 77, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].outcomes, b[i].outcomes);

  const auto psi = cluster_state_vector(5);
  const auto c = sample_pauli6_statevector(psi, 300, 123, 1);
  const auto d = sample_pauli6_statevector(psi, 300, 123, 3);
  for (std::size_t i = 0; i < c.size(); ++i) ASSERT_EQ(c[i].outcomes, d[i].outcomes);

  const auto e = random_snapshots(Lattice::chain(4), pauli6(), 100, 9, 1);
  const auto f = random_snapshots(Lattice::chain(4), pauli6(), 100, 9, 2);
  for (std::size_t i = 0; i < e.size(); ++i) ASSERT_EQ(e[i].outcomes, f[i].outcomes);
  const auto g = random_snapshots(Lattice::chain(4), pauli6(), 100, 10, 1);
  int diff = 0;
  for (std::size_t i = 0; i < e.size(); ++i) diff += (e[i].outcomes != g[i].outcomes);
  EXPECT_GT(diff, 50);  // different seed, different stream
}
