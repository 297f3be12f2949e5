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

// Reference implementations used by the tests. Everything here is written
// from the definitions and deliberately slow.

#ifndef DPDP_TESTS_SUPPORT_HPP_
#define DPDP_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dp.hpp"
#include "heatmap.hpp"
#include "instance.hpp"
#include "oracle.hpp"
#include "policy.hpp"
#include "solution.hpp"

namespace dpdp::testing {

// ---------------------------------------------------------------------------
// Dominance.

// a dominates b inside one DP state.
inline bool Dominates(const Candidate& a, const Candidate& b, ProblemKind kind) {
  if (kind == ProblemKind::kTsp) {
    return a.cost < b.cost || (a.cost == b.cost && RanksBefore(a, b));
  }
  const bool maximize = kind == ProblemKind::kVrp;
  const bool res_le = maximize ? a.resource >= b.resource : a.resource <= b.resource;
  const bool res_lt = maximize ? a.resource > b.resource : a.resource < b.resource;
  if (a.cost <= b.cost && res_le && (a.cost < b.cost || res_lt)) return true;
  // Exact duplicates: the first in the total order survives.
  return a.cost == b.cost && a.resource == b.resource && RanksBefore(a, b);
}

// O(m^2) survivors, grouped by target node (the DP state within a group).
inline std::vector<Candidate> NaiveFront(const std::vector<Candidate>& all,
                                         ProblemKind kind) {
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
      if (i != j && all[j].node == all[i].node) {
        dominated = Dominates(all[j], all[i], kind);
      }
    }
    if (!dominated) kept.push_back(all[i]);
  }
  return kept;
}

using CandidateKey = std::tuple<int, int, int>;  // node, parent, action

inline std::vector<CandidateKey> Keys(const std::vector<Candidate>& cands) {
  std::vector<CandidateKey> keys;
  for (const Candidate& c : cands) keys.emplace_back(c.node, c.parent, c.action);
  std::sort(keys.begin(), keys.end());
  return keys;
}

// ---------------------------------------------------------------------------
// Policy quantities from scratch.

// The heatmap as the policy uses it.
inline std::vector<double> HeatValues(const Heatmap& h) {
  const std::size_t n = h.size();
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = h(i, j);
  }
  return v;
}

struct ScratchPolicy {
  std::size_t n;
  std::vector<double> h;  // row-major h_ij
  std::vector<double> w;
  std::vector<double> z;

  ScratchPolicy(const Heatmap& heat, const CostMatrix& costs, bool with_potential)
      : n(heat.size()), h(HeatValues(heat)), w(n, 0.0), z(n, 0.0) {
    double max_to_start = 0.0;
    for (std::size_t j = 0; j < n; ++j) max_to_start = std::max(max_to_start, costs(j, 0));
    for (std::size_t i = 0; i < n; ++i) {
      double max_in = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        max_in = std::max(max_in, h[j * n + i]);
        z[i] += h[j * n + i];
      }
      const double rel = max_to_start > 0.0 ? costs(i, 0) / max_to_start : 0.0;
      w[i] = with_potential ? max_in * (1.0 - 0.1 * (rel - 0.5)) : 0.0;
    }
  }

  double NodePotential(std::size_t i, const std::vector<bool>& visited) const {
    if (z[i] == 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!visited[j]) num += h[j * n + i];
    }
    return w[i] * num / z[i];
  }

  double Total(const std::vector<bool>& visited) const {
    double total = NodePotential(0, visited);
    for (std::size_t i = 1; i < n; ++i) {
      if (!visited[i]) total += NodePotential(i, visited);
    }
    return total;
  }

  // Heat of an action prefix (no terminal action).
  double Heat(ProblemKind kind, const std::vector<int>& actions) const {
    double heat = 0.0;
    std::size_t cur = 0;
    for (int a : actions) {
      if (kind == ProblemKind::kVrp && a >= static_cast<int>(n)) {
        const std::size_t j = a - n;
        heat += h[cur * n + 0] * h[0 * n + j] * 0.1;
        cur = j;
      } else {
        heat += h[cur * n + a];
        cur = a;
      }
    }
    return heat;
  }
};

// ---------------------------------------------------------------------------
// Grouping oracle: visited-set words as a string key.

inline std::string WordsKey(std::span<const std::uint64_t> words) {
  std::string key;
  for (std::uint64_t w : words) key += std::to_string(w) + ",";
  return key;
}

inline std::vector<std::vector<std::int32_t>> HashGroups(const Beam& beam) {
  std::unordered_map<std::string, std::vector<std::int32_t>> groups;
  for (std::size_t s = 0; s < beam.size(); ++s) {
    groups[WordsKey(beam.visited(s))].push_back(static_cast<std::int32_t>(s));
  }
  std::vector<std::vector<std::int32_t>> out;
  for (auto& [key, slots] : groups) {
    std::sort(slots.begin(), slots.end());
    out.push_back(slots);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Random inputs.

inline Heatmap RandomHeatmap(std::size_t n, bool directed, std::mt19937_64& rng,
                             double zero_prob = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      const double x = u(rng) < zero_prob ? 0.0 : u(rng);
      v[i * n + j] = x;
      if (!directed) v[j * n + i] = x;
    }
  }
  return Heatmap(n, std::move(v), directed);
}

// Random instance of `kind` with n nodes. TSPTW windows are random
// intervals when `random_windows`, else generated around a feasible order.
inline Instance RandomInstance(ProblemKind kind, int n, std::uint64_t seed,
                               double max_window = 100.0) {
  switch (kind) {
    case ProblemKind::kTsp:
      return GenerateTsp(n, seed);
    case ProblemKind::kVrp:
      return GenerateVrp(n - 1, seed);
    case ProblemKind::kTsptw:
      return GenerateTsptw(n, seed, max_window);
  }
  throw InternalError("kind");
}

// TSPTW with independent random windows; often infeasible.
inline Instance RandomWindowInstance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> grid(0.0, 100.0);
  std::vector<Point> coords(n);
  for (Point& p : coords) p = {grid(rng), grid(rng)};
  std::vector<TimeWindow> windows(n);
  windows[0] = {0.0, kInf};
  std::uniform_real_distribution<double> start(0.0, 300.0);
  std::uniform_real_distribution<double> width(10.0, 250.0);
  for (int i = 1; i < n; ++i) {
    const double l = start(rng);
    windows[i] = {l, l + width(rng)};
  }
  return Instance::Tsptw(std::move(coords), std::move(windows));
}

// A beam whose entries all share one visited set, with ties in cost and
// resource made likely by drawing from small grids.
inline Beam RandomGroupBeam(const Instance& instance, const PolicyTables& tables,
                            std::mt19937_64& rng, std::size_t max_entries) {
  const std::size_t n = instance.size();
  const ProblemKind kind = instance.kind();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Beam beam(n, tables.has_potential());
  // Visited set: start node (TSP/TSPTW) plus a random subset, leaving at
  // least one customer open.
  std::vector<std::uint64_t> words(WordsFor(n), 0);
  std::vector<int> members;
  if (kind != ProblemKind::kVrp) SetBit(words, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (u(rng) < 0.5) {
      SetBit(words, i);
      members.push_back(static_cast<int>(i));
    }
  }
  if (members.empty()) {
    SetBit(words, 1);
    members.push_back(1);
  }
  if (members.size() == n - 1) {
    const int drop = members.back();
    words[drop / 64] &= ~(std::uint64_t{1} << (drop % 64));
    members.pop_back();
    if (members.empty()) {
      SetBit(words, 1);
      members.push_back(1);
    }
  }
  std::uniform_int_distribution<std::size_t> count(1, max_entries);
  const std::size_t m = count(rng);
  beam.Resize(m);
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  std::uniform_int_distribution<int> grid(0, 12);
  for (std::size_t s = 0; s < m; ++s) {
    std::copy(words.begin(), words.end(), beam.visited(s).begin());
    const int cur = members[pick(rng)];
    beam.current[s] = cur;
    beam.cost[s] = 0.25 * grid(rng);
    beam.heat[s] = 0.5 * (grid(rng) % 3);
    beam.parent[s] = static_cast<std::int32_t>(s);
    if (kind == ProblemKind::kVrp) {
      beam.resource[s] = instance.capacity() * grid(rng) / 12.0;
    } else if (kind == ProblemKind::kTsptw) {
      beam.resource[s] = std::max(instance.time_windows()[cur].open, 10.0 * grid(rng));
    } else {
      beam.resource[s] = 0.0;
    }
    if (beam.with_potential) {
      beam.potential[s] = InitPotential(
          tables, beam.visited(s),
          {beam.node_potential.data() + s * n, n}, {beam.exhausted.data() + s * n, n});
    } else {
      beam.potential[s] = 0.0;
    }
    beam.score[s] = Score(beam.heat[s], beam.potential[s]);
  }
  return beam;
}

}  // namespace dpdp::testing

#endif  // DPDP_TESTS_SUPPORT_HPP_
