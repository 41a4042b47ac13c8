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
#include <stdexcept>
#include <string>

namespace tksvm {

enum class Boundary { open, periodic };

/// Qubit layout. Two kinds:
///  - chain: L sites in a row.
///  - square_link: one qubit per bond of an Lx x Ly periodic square lattice,
///    2*Lx*Ly qubits. Site numbering: the horizontal bond leaving vertex
///    (x, y) eastward is 2*(y*Lx + x), the vertical bond leaving it northward
///    is 2*(y*Lx + x) + 1. This numbering is part of the snapshot file format.
struct Lattice {
  enum class Kind { chain, square_link };

  Kind kind = Kind::chain;
  int lx = 0;  // chain length L, or unit cells in x
  int ly = 1;
  Boundary boundary = Boundary::open;

  static Lattice chain(int length, Boundary bc = Boundary::open) {
    if (length < 1) throw std::invalid_argument("lattice: chain length < 1");
    return {Kind::chain, length, 1, bc};
  }

  static Lattice square_link(int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("lattice: square-link extents < 2");
    return {Kind::square_link, nx, ny, Boundary::periodic};
  }

  int site_count() const {
    return kind == Kind::chain ? lx : 2 * lx * ly;
  }

  bool operator==(const Lattice&) const = default;

  // --- square-link helpers; coordinates wrap mod (lx, ly) ---

  int hbond(int x, int y) const { return 2 * (mody(y) * lx + modx(x)); }
  int vbond(int x, int y) const { return 2 * (mody(y) * lx + modx(x)) + 1; }

  /// The four bonds meeting vertex (x, y): west, south, east, north.
  std::array<int, 4> vertex_star(int x, int y) const {
    return {hbond(x - 1, y), vbond(x, y - 1), hbond(x, y), vbond(x, y)};
  }

  /// The four bonds bounding the plaquette whose lower-left vertex is (x, y):
  /// bottom, left, right, top.
  std::array<int, 4> plaquette_bonds(int x, int y) const {
    return {hbond(x, y), vbond(x, y), vbond(x + 1, y), hbond(x, y + 1)};
  }

  std::string kind_name() const {
    return kind == Kind::chain ? "chain" : "square-link";
  }

 private:
  int modx(int x) const { return ((x % lx) + lx) % lx; }
  int mody(int y) const { return ((y % ly) + ly) % ly; }
};

inline std::string boundary_name(Boundary b) {
  return b == Boundary::open ? "open" : "periodic";
}

}  // namespace tksvm
