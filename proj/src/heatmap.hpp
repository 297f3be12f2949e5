// Copyright 2026 The DPDP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Edge heatmaps and the sparse graphs derived from them.

#ifndef DPDP_HEATMAP_HPP_
#define DPDP_HEATMAP_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "instance.hpp"

namespace dpdp {

// Largest representable heat value; the valid range is [0, 1).
inline constexpr double kMaxHeat = 1.0 - 1e-9;

// n x n edge scores. The diagonal is always 0. An undirected heatmap is
// exactly symmetric.
class Heatmap {
 public:
  // Values are row-major. Entries must lie in [0, 1]; 1 is clamped to
  // kMaxHeat and the diagonal is forced to 0. Throws ValidationError on a
  // size mismatch, an out-of-range entry, or an asymmetric undirected input.
  Heatmap(std::size_t n, std::vector<double> values, bool directed);

  std::size_t size() const { return n_; }
  bool directed() const { return directed_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
  bool directed_;
};

// h_ij = max(h_ij, h_ji); result is undirected.
Heatmap Symmetrize(const Heatmap& raw);

// Row-normalised cost heuristic c_ij / max_k c_ik (directed). With `invert`
// every entry becomes 1 - value. Throws ValidationError if a row has zero
// maximum cost.
Heatmap CostHeatmap(const CostMatrix& costs, bool invert = false);

// Directed adjacency with sorted out-lists and a packed bit matrix for O(1)
// membership tests.
class SparseGraph {
 public:
  // Takes per-node neighbour lists; sorts and deduplicates them and drops
  // self-loops.
  SparseGraph(std::size_t n, std::vector<std::vector<int>> out_edges);

  static SparseGraph Complete(std::size_t n);

  std::size_t size() const { return out_.size(); }
  std::span<const int> out_edges(std::size_t i) const { return out_[i]; }
  bool HasEdge(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  std::size_t NumEdges() const;

  // Adds (i, depot) and (depot, i) for every node i.
  SparseGraph WithDepotConnected(int depot = kDepot) const;

 private:
  std::size_t words_;
  std::vector<std::vector<int>> out_;
  std::vector<std::uint64_t> bits_;
};

// Keeps edge (i, j) iff h_ij >= threshold.
SparseGraph SparsifyThreshold(const Heatmap& heat, double threshold);

// Each node contributes its k nearest neighbours (ties to the lower index) in
// both directions. With `vrp`, the depot is connected to every node both ways.
SparseGraph SparsifyKnn(const CostMatrix& costs, int k, bool vrp);

// Text heatmap format. Header "dense n [directed]" followed by n rows of n
// values, or "sparse n [directed]" followed by "i j h" lines (missing
// entries are 0). `expected_n` must match the header.
Heatmap ParseHeatmap(std::istream& in, std::size_t expected_n);
Heatmap ReadHeatmap(const std::filesystem::path& path, std::size_t expected_n);
// Writes the dense format with full double precision.
void WriteHeatmap(const Heatmap& heat, const std::filesystem::path& path);

}  // namespace dpdp

#endif  // DPDP_HEATMAP_HPP_
