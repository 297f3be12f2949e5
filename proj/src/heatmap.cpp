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

#include "heatmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

namespace dpdp {
namespace {

std::string Entry(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

double ParseDouble(const std::string& token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("heatmap line " + std::to_string(line) +
                     ": malformed number '" + token + "'");
  }
  return value;
}

std::size_t ParseIndex(const std::string& token, std::size_t n,
                       std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("heatmap line " + std::to_string(line) +
                     ": malformed index '" + token + "'");
  }
  if (value >= n) {
    throw ParseError("heatmap line " + std::to_string(line) + ": index " +
                     token + " out of range for n = " + std::to_string(n));
  }
  return value;
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(std::move(token));
  return out;
}

}  // namespace

Heatmap::Heatmap(std::size_t n, std::vector<double> values, bool directed)
    : n_(n), values_(std::move(values)), directed_(directed) {
  if (values_.size() != n_ * n_) {
    throw ValidationError("heatmap expects " + std::to_string(n_ * n_) +
                          " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double& h = values_[i * n_ + j];
      if (!(h >= 0.0 && h <= 1.0)) {
        throw ValidationError("heat value " + std::to_string(h) +
                              " at entry " + Entry(i, j) +
                              " outside [0, 1]");
      }
      if (i == j) {
        h = 0.0;
      } else if (h > kMaxHeat) {
        h = kMaxHeat;
      }
    }
  }
  if (!directed_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (values_[i * n_ + j] != values_[j * n_ + i]) {
          throw ValidationError("undirected heatmap is asymmetric at " +
                                Entry(i, j));
        }
      }
    }
  }
}

Heatmap Symmetrize(const Heatmap& raw) {
  const std::size_t n = raw.size();
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] = std::max(raw(i, j), raw(j, i));
    }
  }
  return Heatmap(n, std::move(values), /*directed=*/false);
}

Heatmap CostHeatmap(const CostMatrix& costs, bool invert) {
  const std::size_t n = costs.size();
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = costs.row(i);
    const double row_max = *std::max_element(row.begin(), row.end());
    if (!(row_max > 0.0)) {
      throw ValidationError("cost heatmap: row " + std::to_string(i) +
                            " has zero maximum cost");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double h = std::min(row[j] / row_max, kMaxHeat);
      if (invert) h = std::min(1.0 - h, kMaxHeat);
      values[i * n + j] = h;
    }
  }
  return Heatmap(n, std::move(values), /*directed=*/true);
}

SparseGraph::SparseGraph(std::size_t n, std::vector<std::vector<int>> out_edges)
    : words_((n + 63) / 64), out_(std::move(out_edges)), bits_(n * words_, 0) {
  if (out_.size() != n) {
    throw ValidationError("sparse graph expects " + std::to_string(n) +
                          " adjacency lists");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = out_[i];
    std::erase_if(list, [&](int j) {
      return j < 0 || static_cast<std::size_t>(j) >= n ||
             static_cast<std::size_t>(j) == i;
    });
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (int j : list) bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }
}

SparseGraph SparseGraph::Complete(std::size_t n) {
  std::vector<std::vector<int>> out(n);
  for (auto& list : out) {
    list.resize(n);
    std::iota(list.begin(), list.end(), 0);
  }
  return SparseGraph(n, std::move(out));
}

std::size_t SparseGraph::NumEdges() const {
  std::size_t total = 0;
  for (const auto& list : out_) total += list.size();
  return total;
}

SparseGraph SparseGraph::WithDepotConnected(int depot) const {
  const std::size_t n = out_.size();
  std::vector<std::vector<int>> out = out_;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) == depot) continue;
    out[i].push_back(depot);
    out[depot].push_back(static_cast<int>(i));
  }
  return SparseGraph(n, std::move(out));
}

SparseGraph SparsifyThreshold(const Heatmap& heat, double threshold) {
  const std::size_t n = heat.size();
  std::vector<std::vector<int>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && heat(i, j) >= threshold) out[i].push_back(static_cast<int>(j));
    }
  }
  return SparseGraph(n, std::move(out));
}

SparseGraph SparsifyKnn(const CostMatrix& costs, int k, bool vrp) {
  const std::size_t n = costs.size();
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw ValidationError("knn must lie in [1, n - 1], got " +
                          std::to_string(k));
  }
  std::vector<std::vector<int>> out(n);
  std::vector<int> order;
  for (std::size_t i = 0; i < n; ++i) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::erase(order, static_cast<int>(i));
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](int a, int b) {
                        const double ca = costs(i, a);
                        const double cb = costs(i, b);
                        return ca < cb || (ca == cb && a < b);
                      });
    for (int r = 0; r < k; ++r) {
      const int j = order[r];
      out[i].push_back(j);
      out[j].push_back(static_cast<int>(i));
    }
  }
  SparseGraph graph(n, std::move(out));
  return vrp ? graph.WithDepotConnected(kDepot) : graph;
}

Heatmap ParseHeatmap(std::istream& in, std::size_t expected_n) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("heatmap: empty file");
  const auto header = Tokens(line);
  if (header.size() < 2 || header.size() > 3 ||
      (header[0] != "dense" && header[0] != "sparse") ||
      (header.size() == 3 && header[2] != "directed")) {
    throw ParseError("heatmap line 1: expected 'dense|sparse n [directed]'");
  }
  const bool dense = header[0] == "dense";
  const bool directed = header.size() == 3;
  std::size_t n = 0;
  {
    auto [ptr, ec] = std::from_chars(
        header[1].data(), header[1].data() + header[1].size(), n);
    if (ec != std::errc() || ptr != header[1].data() + header[1].size()) {
      throw ParseError("heatmap line 1: malformed size '" + header[1] + "'");
    }
  }
  if (n != expected_n) {
    throw ValidationError("heatmap declares n = " + std::to_string(n) +
                          " but the instance has " +
                          std::to_string(expected_n) + " nodes");
  }

  std::vector<double> values(n * n, 0.0);
  auto store = [&](std::size_t i, std::size_t j, double h) {
    if (!(h >= 0.0 && h <= 1.0)) {
      throw ValidationError("heatmap line " + std::to_string(line_no) +
                            ": value " + std::to_string(h) + " at entry " +
                            Entry(i, j) + " outside [0, 1]");
    }
    values[i * n + j] = h;
  };

  if (dense) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!next_line()) {
        throw ParseError("heatmap: expected " + std::to_string(n) +
                         " rows, got " + std::to_string(i));
      }
      const auto row = Tokens(line);
      if (row.size() != n) {
        throw ParseError("heatmap line " + std::to_string(line_no) +
                         ": expected " + std::to_string(n) + " values, got " +
                         std::to_string(row.size()));
      }
      for (std::size_t j = 0; j < n; ++j) store(i, j, ParseDouble(row[j], line_no));
    }
    if (next_line()) {
      throw ParseError("heatmap line " + std::to_string(line_no) +
                       ": trailing data after " + std::to_string(n) + " rows");
    }
  } else {
    std::vector<char> given(n * n, 0);
    while (next_line()) {
      const auto triple = Tokens(line);
      if (triple.size() != 3) {
        throw ParseError("heatmap line " + std::to_string(line_no) +
                         ": expected 'i j h'");
      }
      const std::size_t i = ParseIndex(triple[0], n, line_no);
      const std::size_t j = ParseIndex(triple[1], n, line_no);
      const double h = ParseDouble(triple[2], line_no);
      store(i, j, h);
      given[i * n + j] = 1;
      // Undirected files may list each edge once.
      if (!directed) {
        if (given[j * n + i] && values[j * n + i] != h) {
          throw ValidationError("heatmap line " + std::to_string(line_no) +
                                ": entries " + Entry(i, j) + " and " +
                                Entry(j, i) + " differ in an undirected heatmap");
        }
        store(j, i, h);
      }
    }
  }
  return Heatmap(n, std::move(values), directed);
}

Heatmap ReadHeatmap(const std::filesystem::path& path, std::size_t expected_n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open heatmap file " + path.string());
  try {
    return ParseHeatmap(in, expected_n);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteHeatmap(const Heatmap& heat, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write heatmap file " + path.string());
  const std::size_t n = heat.size();
  out << "dense " << n << (heat.directed() ? " directed" : "") << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << heat(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dpdp
