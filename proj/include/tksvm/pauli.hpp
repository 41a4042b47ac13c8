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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tksvm {

enum class PauliOp : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline char pauli_char(PauliOp op) { return op == PauliOp::X ? 'X' : op == PauliOp::Y ? 'Y' : 'Z'; }

/// A signed product of single-site Pauli operators on distinct sites.
struct PauliString {
  struct Factor {
    int site;
    PauliOp op;
  };

  std::vector<Factor> factors;
  int sign = +1;  // +1 or -1

  PauliString() = default;

  PauliString(std::vector<Factor> f, int s = +1) : factors(std::move(f)), sign(s) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("pauli string: sign must be +-1");
    std::sort(factors.begin(), factors.end(),
              [](const Factor& a, const Factor& b) { return a.site < b.site; });
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
      if (factors[i].site == factors[i + 1].site)
        throw std::invalid_argument("pauli string: repeated site");
    if (!factors.empty() && factors.front().site < 0)
      throw std::invalid_argument("pauli string: negative site");
  }

  std::size_t weight() const { return factors.size(); }

  int max_site() const {
    return factors.empty() ? -1 : factors.back().site;
  }

  /// X / Z bit masks over sites [0, 64); Y sets both bits.
  void to_masks(std::uint64_t& xmask, std::uint64_t& zmask) const {
    if (max_site() >= 64) throw std::invalid_argument("pauli string: site >= 64");
    xmask = zmask = 0;
    for (const auto& f : factors) {
      const std::uint64_t bit = 1ull << f.site;
      if (f.op != PauliOp::Z) xmask |= bit;
      if (f.op != PauliOp::X) zmask |= bit;
    }
  }

  std::string str() const {
    std::string s = sign < 0 ? "-" : "";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += ' ';
      s += pauli_char(factors[i].op);
      s += std::to_string(factors[i].site);
    }
    if (factors.empty()) s += "I";
    return s;
  }
};

/// Convenience builders for the string operators of the cluster chain,
/// 0-based sites. B_k = Z_{k-1} X_k Z_{k+1}.
inline PauliString cluster_stabilizer(int k) {
  return PauliString({{k - 1, PauliOp::Z}, {k, PauliOp::X}, {k + 1, PauliOp::Z}});
}

/// Odd string of length n (n odd, >= 3) starting at `first`:
/// Z_first X_{first+1} X_{first+3} ... Z_{first+n-1}.
inline PauliString odd_string(int first, int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("odd string: length must be odd >= 3");
  std::vector<PauliString::Factor> f{{first, PauliOp::Z}, {first + n - 1, PauliOp::Z}};
  for (int k = 1; k <= (n - 1) / 2; ++k) f.push_back({first + 2 * k - 1, PauliOp::X});
  return PauliString(std::move(f));
}

/// Dense string of length n (>= 4) starting at `first`:
/// Z Y X ... X Y Z (X on the n-4 interior sites), unsigned form.
inline PauliString dense_string(int first, int n) {
  if (n < 4) throw std::invalid_argument("dense string: length must be >= 4");
  std::vector<PauliString::Factor> f{{first, PauliOp::Z},
                                     {first + 1, PauliOp::Y},
                                     {first + n - 2, PauliOp::Y},
                                     {first + n - 1, PauliOp::Z}};
  for (int k = 2; k <= n - 3; ++k) f.push_back({first + k, PauliOp::X});
  return PauliString(std::move(f));
}

}  // namespace tksvm
