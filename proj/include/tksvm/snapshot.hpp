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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tksvm/errors.hpp"
#include "tksvm/lattice.hpp"

namespace tksvm {

/// One measurement shot of the whole lattice: a POVM outcome index per site.
struct Snapshot {
  std::vector<std::uint8_t> outcomes;
};

/// A batch of snapshots plus the metadata needed to interpret them.
/// Serialized as the `#tksvm v1` text format:
///
///   #tksvm v1 povm=pauli6 lattice=chain L=12 boundary=open seed=42 [k=v ...]
///   <outcome> <outcome> ... (one line per snapshot)
///
/// L is `<n>` for chains and `<nx>x<ny>` for square-link lattices. Extra
/// key=value tokens after the required ones are preserved (e.g. the grid
/// coordinates used by the phase-diagram pipeline).
struct SnapshotSet {
  Lattice lattice;
  std::string povm_name = "pauli6";
  std::uint64_t seed = 0;
  std::map<std::string, std::string> extra;
  std::vector<Snapshot> snapshots;
};

inline std::string lattice_extent_string(const Lattice& lat) {
  if (lat.kind == Lattice::Kind::chain) return std::to_string(lat.lx);
  return std::to_string(lat.lx) + "x" + std::to_string(lat.ly);
}

inline void write_snapshots(std::ostream& os, const SnapshotSet& set) {
  os << "#tksvm v1 povm=" << set.povm_name << " lattice=" << set.lattice.kind_name()
     << " L=" << lattice_extent_string(set.lattice)
     << " boundary=" << boundary_name(set.lattice.boundary) << " seed=" << set.seed;
  for (const auto& [k, v] : set.extra) os << ' ' << k << '=' << v;
  os << '\n';
  for (const auto& snap : set.snapshots) {
    for (std::size_t i = 0; i < snap.outcomes.size(); ++i) {
      if (i) os << ' ';
      os << static_cast<int>(snap.outcomes[i]);
    }
    os << '\n';
  }
}

inline void save_snapshots(const std::string& path, const SnapshotSet& set) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path);
  write_snapshots(f, set);
  if (!f) throw io_error("write failed: " + path);
}

inline SnapshotSet read_snapshots(std::istream& is, const std::string& origin = "<stream>") {
  std::string header;
  if (!std::getline(is, header)) throw io_error(origin + ": empty snapshot file");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "#tksvm" || version != "v1")
    throw io_error(origin + ": not a tksvm v1 snapshot file");
  std::map<std::string, std::string> kv;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw io_error(origin + ": malformed header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* req : {"povm", "lattice", "L", "boundary", "seed"})
    if (!kv.count(req)) throw io_error(origin + ": header missing '" + std::string(req) + "'");

  SnapshotSet set;
  set.povm_name = kv["povm"];
  set.seed = std::stoull(kv["seed"]);
  const std::string ext = kv["L"];
  const Boundary bc = kv["boundary"] == "periodic" ? Boundary::periodic : Boundary::open;
  if (kv["lattice"] == "chain") {
    set.lattice = Lattice::chain(std::stoi(ext), bc);
  } else if (kv["lattice"] == "square-link") {
    const auto xpos = ext.find('x');
    if (xpos == std::string::npos) throw io_error(origin + ": square-link needs L=<nx>x<ny>");
    set.lattice = Lattice::square_link(std::stoi(ext.substr(0, xpos)), std::stoi(ext.substr(xpos + 1)));
  } else {
    throw io_error(origin + ": unknown lattice kind '" + kv["lattice"] + "'");
  }
  for (auto& [k, v] : kv)
    if (k != "povm" && k != "lattice" && k != "L" && k != "boundary" && k != "seed")
      set.extra[k] = v;

  const int sites = set.lattice.site_count();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Snapshot snap;
    snap.outcomes.reserve(sites);
    int v;
    while (ls >> v) {
      if (v < 0 || v > 255) throw io_error(origin + ": outcome out of range");
      snap.outcomes.push_back(static_cast<std::uint8_t>(v));
    }
    if (static_cast<int>(snap.outcomes.size()) != sites)
      throw io_error(origin + ": snapshot line has " + std::to_string(snap.outcomes.size()) +
                     " outcomes, expected " + std::to_string(sites));
    set.snapshots.push_back(std::move(snap));
  }
  return set;
}

inline SnapshotSet load_snapshots(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open: " + path);
  return read_snapshots(f, path);
}

}  // namespace tksvm
