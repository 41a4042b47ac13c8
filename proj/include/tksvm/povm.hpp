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

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tksvm {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Single-qubit POVM whose outcomes are weighted projectors
/// M_i = (w_i / 2) (I + S_i . sigma), together with the classical map
/// outcome i -> Bloch vector S_i. Value object; immutable after construction.
class Povm {
 public:
  struct Outcome {
    double weight;
    Vec3 bloch;
  };

  Povm(std::string name, std::vector<Outcome> outcomes)
      : name_(std::move(name)), outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw std::invalid_argument("povm: no outcomes");
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }

  double weight(std::size_t i) const { return outcomes_.at(i).weight; }

  const Vec3& bloch(std::size_t i) const {
    if (i >= outcomes_.size()) throw std::out_of_range("povm: outcome index out of range");
    return outcomes_[i].bloch;
  }

  /// Sum_i w_i = 2 and Sum_i w_i S_i = 0, each within tol. Together with unit
  /// Bloch vectors this is Sum_i M_i = I.
  bool is_complete(double tol = 1e-12) const {
    double wsum = 0.0;
    Vec3 vsum{0, 0, 0};
    for (const auto& o : outcomes_) {
      wsum += o.weight;
      for (int c = 0; c < 3; ++c) vsum[c] += o.weight * o.bloch[c];
      if (std::abs(norm(o.bloch) - 1.0) > tol) return false;
      if (o.weight <= 0.0) return false;
    }
    return std::abs(wsum - 2.0) <= tol && norm(vsum) <= tol;
  }

 private:
  std::string name_;
  std::vector<Outcome> outcomes_;
};

/// Pauli-6 POVM. Outcome order is fixed and part of the snapshot file format:
/// 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z, all with weight 1/3.
inline Povm pauli6() {
  const double w = 1.0 / 3.0;
  return Povm("pauli6", {{w, {+1, 0, 0}},
                         {w, {-1, 0, 0}},
                         {w, {0, +1, 0}},
                         {w, {0, -1, 0}},
                         {w, {0, 0, +1}},
                         {w, {0, 0, -1}}});
}

/// Tetra (SIC) POVM: four outcomes of weight 1/2 on tetrahedron vertices.
inline Povm tetra() {
  const double w = 0.5;
  const double s2 = std::sqrt(2.0);
  const double s23 = std::sqrt(2.0 / 3.0);
  return Povm("tetra", {{w, {0.0, 0.0, 1.0}},
                        {w, {2.0 * s2 / 3.0, 0.0, -1.0 / 3.0}},
                        {w, {-s2 / 3.0, -s23, -1.0 / 3.0}},
                        {w, {-s2 / 3.0, +s23, -1.0 / 3.0}}});
}

inline Povm povm_by_name(const std::string& name) {
  if (name == "pauli6") return pauli6();
  if (name == "tetra") return tetra();
  throw std::invalid_argument("unknown povm: " + name);
}

/// Outcome probabilities p_i = (w_i/2)(1 + S_i . b) for a state with Bloch
/// vector b, |b| <= 1.
inline std::vector<double> outcome_probabilities(const Vec3& bloch_state, const Povm& povm) {
  if (norm(bloch_state) > 1.0 + 1e-9)
    throw std::invalid_argument("outcome_probabilities: |b| > 1");
  std::vector<double> p(povm.size());
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const auto& o = povm.outcomes()[i];
    p[i] = 0.5 * o.weight * (1.0 + dot(o.bloch, bloch_state));
  }
  return p;
}

/// True iff the k x 4 matrix with rows (w_i, w_i S_i) has rank 4, i.e. the
/// outcomes span the space of single-qubit self-adjoint operators.
inline bool is_informationally_complete(const Povm& povm, double tol = 1e-10) {
  Eigen::MatrixXd m(povm.size(), 4);
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const auto& o = povm.outcomes()[i];
    m(i, 0) = o.weight;
    for (int c = 0; c < 3; ++c) m(i, c + 1) = o.weight * o.bloch[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank == 4;
}

/// Classical map: outcome index -> Bloch vector.
inline const Vec3& map_to_bloch(std::size_t outcome, const Povm& povm) {
  return povm.bloch(outcome);
}

}  // namespace tksvm
