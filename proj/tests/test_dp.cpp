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

#include <random>
#include <set>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "dp.hpp"
#include "support.hpp"

namespace dpdp {
namespace {

SolverConfig Config(PolicyKind policy, std::size_t beam, bool dominance = true) {
  SolverConfig c;
  c.policy = policy;
  c.beam_size = beam;
  c.dominance = dominance;
  return c;
}

SolveOptions Options(std::size_t beam, PolicyKind policy = PolicyKind::kCostHeatPotential) {
  SolveOptions o;
  o.solver.beam_size = beam;
  o.solver.policy = policy;
  return o;
}

// Collinear nodes at x = 0, 1, 2, 3.
Instance Line4() { return Instance::Tsp({{0, 0}, {1, 0}, {2, 0}, {3, 0}}); }

TEST_CASE("initial beams") {
  const Instance tsp = GenerateTsp(5, 1);
  const PolicyTables tt = MakePolicyTables(tsp, nullptr, PolicyKind::kHeatPotential, false);
  const Beam b = InitBeam(tsp, tt, Config(PolicyKind::kHeatPotential, 1));
  REQUIRE(b.size() == 1);
  const BeamEntry e = b.Entry(0, ProblemKind::kTsp);
  CHECK(e.cost == 0.0);
  CHECK(e.current == 0);
  CHECK(e.visited.count() == 1);
  CHECK(e.heat == 0.0);
  CHECK(e.score == doctest::Approx(e.potential));
  CHECK(e.potential == doctest::Approx(PotentialState::Initial(tt, e.visited).total()));

  const Instance vrp = GenerateVrp(6, 1);
  const PolicyTables vt = MakePolicyTables(vrp, nullptr, PolicyKind::kHeat, false);
  const BeamEntry v = InitBeam(vrp, vt, Config(PolicyKind::kHeat, 1)).Entry(0, ProblemKind::kVrp);
  CHECK(v.remaining_capacity == vrp.capacity());
  CHECK(v.visited.count() == 0);

  const Instance tw = GenerateTsptw(5, 1, 100.0);
  const PolicyTables wt = MakePolicyTables(tw, nullptr, PolicyKind::kHeat, false);
  CHECK(InitBeam(tw, wt, Config(PolicyKind::kHeat, 1)).Entry(0, ProblemKind::kTsptw).time == 0.0);
}

Beam ManualBeam(std::size_t n, const std::vector<std::vector<int>>& visited,
                const std::vector<int>& current, const std::vector<double>& cost) {
  Beam beam(n, false);
  beam.Resize(current.size());
  std::fill(beam.visited_words.begin(), beam.visited_words.end(), 0);
  for (std::size_t s = 0; s < current.size(); ++s) {
    for (int v : visited[s]) SetBit(beam.visited(s), v);
    beam.current[s] = current[s];
    beam.cost[s] = cost[s];
    beam.score[s] = -cost[s];
    beam.parent[s] = 0;
  }
  return beam;
}

TEST_CASE("group by visited") {
  const Beam distinct = ManualBeam(5, {{0, 1}, {0, 2}, {0, 3}}, {1, 2, 3}, {1, 1, 1});
  CHECK(GroupByVisited(distinct).groups() == 3);
  const Beam same = ManualBeam(5, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}},
                               {1, 2, 1, 2}, {4, 3, 2, 3});
  const Grouping g = GroupByVisited(same);
  REQUIRE(g.groups() == 1);
  // Total order inside the group: score descending (cost ascending here),
  // then current node, then slot.
  const auto group = g.group(0);
  CHECK(std::vector<std::int32_t>(group.begin(), group.end()) ==
        std::vector<std::int32_t>{2, 1, 3, 0});

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 70;  // two words
    const std::size_t m = 1 + rng() % 60;
    std::vector<std::vector<int>> sets(m);
    std::vector<int> cur(m, 0);
    std::vector<double> cost(m);
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        // Few distinct sets so groups merge.
        if ((i * 7 + rng() % 3) % 5 == 0) sets[s].push_back(static_cast<int>(i));
      }
      cost[s] = static_cast<double>(rng() % 5);
    }
    const Beam beam = ManualBeam(n, sets, cur, cost);
    const Grouping grouping = GroupByVisited(beam);
    std::vector<std::vector<std::int32_t>> fast;
    for (std::size_t k = 0; k < grouping.groups(); ++k) {
      auto group = grouping.group(k);
      std::vector<std::int32_t> slots(group.begin(), group.end());
      std::sort(slots.begin(), slots.end());
      fast.push_back(slots);
      if (k > 0) {
        CHECK(CompareWords(beam.visited(grouping.group(k - 1)[0]),
                           beam.visited(group[0])) < 0);
      }
    }
    std::sort(fast.begin(), fast.end());
    CHECK(fast == testing::HashGroups(beam));
  }
}

TEST_CASE("tsp expansion examples") {
  const Instance inst = Line4();
  const PolicyTables t = MakePolicyTables(inst, nullptr, PolicyKind::kCost, false);
  const SparseGraph graph = SparseGraph::Complete(4);
  Expander ex(inst, t, graph, Config(PolicyKind::kCost, 10));

  // Parents at 1 (cost 3) and 2 (cost 6) both reach 3: 5 versus 7.
  const Beam two = ManualBeam(4, {{0, 1, 2}, {0, 1, 2}}, {1, 2}, {3, 6});
  std::vector<Candidate> out;
  ex.ExpandGroup(two, GroupByVisited(two).group(0), -kInf, out);
  REQUIRE(out.size() == 1);
  CHECK(out[0].node == 3);
  CHECK(out[0].cost == 5.0);
  CHECK(out[0].parent == 0);

  const Beam start = InitBeam(inst, t, Config(PolicyKind::kCost, 10));
  out.clear();
  ex.ExpandGroup(start, GroupByVisited(start).group(0), -kInf, out);
  REQUIRE(out.size() == 3);
  for (const Candidate& c : out) CHECK(c.cost == inst.costs()(0, c.node));

  // Node 1 only touches node 0: a parent sitting there is a dead end.
  const SparseGraph sparse(4, {{1, 2, 3}, {0}, {0, 3}, {0, 2}});
  Expander ex2(inst, t, sparse, Config(PolicyKind::kCost, 10));
  const Beam dead = ManualBeam(4, {{0, 1}}, {1}, {1});
  out.clear();
  ex2.ExpandGroup(dead, GroupByVisited(dead).group(0), -kInf, out);
  CHECK(out.empty());
}

TEST_CASE("pareto examples") {
  auto cand = [](double cost, double res, int parent) {
    Candidate c;
    c.cost = cost;
    c.resource = res;
    c.score = -cost;
    c.node = 1;
    c.parent = parent;
    return c;
  };
  std::vector<Candidate> a = {cand(6, 2, 1), cand(5, 3, 0)};
  std::vector<Candidate> out;
  ParetoPrune(a, true, out);
  REQUIRE(out.size() == 1);
  CHECK(out[0].cost == 5.0);

  std::vector<Candidate> b = {cand(5, 2, 0), cand(6, 3, 1)};
  out.clear();
  ParetoPrune(b, true, out);
  CHECK(out.size() == 2);

  // Time is minimised.
  std::vector<Candidate> c = {cand(5, 2, 0), cand(6, 3, 1), cand(7, 1, 2)};
  out.clear();
  ParetoPrune(c, false, out);
  CHECK(out.size() == 2);

  std::vector<Candidate> dup = {cand(5, 2, 3), cand(5, 2, 1)};
  out.clear();
  ParetoPrune(dup, true, out);
  REQUIRE(out.size() == 1);
  CHECK(out[0].parent == 1);
}

// Fast pruning against the naive oracle on random groups.
void CheckDominanceEquivalence(ProblemKind kind, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 9);
    const Instance inst = kind == ProblemKind::kTsptw && trial % 2
                              ? testing::RandomWindowInstance(n, rng())
                              : testing::RandomInstance(kind, n, rng(), 300.0);
    const PolicyKind policy = trial % 3 == 0 ? PolicyKind::kCost : PolicyKind::kCostHeatPotential;
    const PolicyTables t = MakePolicyTables(inst, nullptr, policy, false);
    const SparseGraph graph = trial % 4 == 0
                                  ? MakeGraph(inst, nullptr, {Sparsification::Mode::kKnn, 0, 2}, false)
                                  : SparseGraph::Complete(inst.size());
    const Beam beam = testing::RandomGroupBeam(inst, t, rng, 200);
    const Grouping g = GroupByVisited(beam);
    REQUIRE(g.groups() == 1);
    Expander fast(inst, t, graph, Config(policy, 1, true));
    Expander raw(inst, t, graph, Config(policy, 1, false));
    std::vector<Candidate> pruned, all;
    fast.ExpandGroup(beam, g.group(0), -kInf, pruned);
    raw.ExpandGroup(beam, g.group(0), -kInf, all);
    CHECK(testing::Keys(pruned) == testing::Keys(testing::NaiveFront(all, kind)));
  }
}

TEST_CASE("dominance pruning equals the pairwise oracle") {
  CheckDominanceEquivalence(ProblemKind::kTsp, 300, 1);
  CheckDominanceEquivalence(ProblemKind::kVrp, 300, 2);
  CheckDominanceEquivalence(ProblemKind::kTsptw, 300, 3);
}

TEST_CASE("tsptw lookahead and waiting") {
  // v at distance 10, j three further with u_j = 12.
  const std::vector<Point> pts = {{0, 0}, {10, 0}, {13, 0}};
  auto expand = [&](double close_j, double open_v) {
    const Instance inst = Instance::Tsptw(pts, {{0, kInf}, {open_v, 100}, {0, close_j}});
    const PolicyTables t = MakePolicyTables(inst, nullptr, PolicyKind::kCost, false);
    const SparseGraph graph = SparseGraph::Complete(3);
    Expander ex(inst, t, graph, Config(PolicyKind::kCost, 10));
    const Beam start = InitBeam(inst, t, Config(PolicyKind::kCost, 10));
    std::vector<Candidate> out;
    ex.ExpandGroup(start, GroupByVisited(start).group(0), -kInf, out);
    return out;
  };
  auto has = [](const std::vector<Candidate>& cs, int node) {
    return std::any_of(cs.begin(), cs.end(), [&](const Candidate& c) { return c.node == node; });
  };
  CHECK_FALSE(has(expand(12.0, 0.0), 1));
  CHECK(has(expand(13.0, 0.0), 1));

  const auto waited = expand(100.0, 25.0);
  for (const Candidate& c : waited) {
    if (c.node == 1) {
      CHECK(c.resource == 25.0);
      CHECK(c.cost == 10.0);
    }
  }
}

TEST_CASE("top-B selection") {
  auto cand = [](double score, double cost, int node) {
    Candidate c;
    c.score = score;
    c.cost = cost;
    c.node = node;
    return c;
  };
  TopBSelector two(2);
  for (double s : {3.0, 1.0, 2.0}) two.Offer(cand(s, 0, 1));
  CHECK(two.Bound() == 2.0);
  auto kept = two.Take();
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].score == 3.0);
  CHECK(kept[1].score == 2.0);

  TopBSelector wide(10);
  wide.Offer(cand(1, 0, 1));
  wide.Offer(cand(5, 0, 2));
  wide.Offer(cand(3, 0, 3));
  CHECK(wide.Bound() == -kInf);
  kept = wide.Take();
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].score == 5.0);
  CHECK(kept[2].score == 1.0);

  TopBSelector tie(1);
  tie.Offer(cand(1, 7, 1));
  tie.Offer(cand(1, 4, 2));
  kept = tie.Take();
  CHECK(kept[0].cost == 4.0);
}

TEST_CASE("solve: triangle and forced windows") {
  const Instance tri = Instance::Tsp({{0, 0}, {3, 0}, {0, 4}});
  for (std::size_t beam : {1, 2, 5}) {
    const SolveResult r = Solve(tri, nullptr, Options(beam));
    REQUIRE(r.solution);
    CHECK(r.solution->cost == doctest::Approx(12.0).epsilon(1e-12));
  }

  const Instance forced = Instance::Tsptw(
      {{0, 0}, {10, 0}, {0, 10}, {10, 10}},
      {{0, kInf}, {24, 26}, {38, 41}, {14, 15}});
  const SolveResult r = Solve(forced, nullptr, Options(1));
  REQUIRE(r.solution);
  CHECK(r.solution->actions == std::vector<int>{3, 1, 2, 0});
  CHECK(r.solution->feasible);
}

TEST_CASE("solve: infeasible windows and dead graphs report the step") {
  const Instance impossible = Instance::Tsptw(
      {{0, 0}, {10, 0}, {0, 10}}, {{0, kInf}, {0, 10}, {0, 10}});
  const SolveResult r = Solve(impossible, nullptr, Options(100));
  CHECK_FALSE(r.solution);
  CHECK(r.dead_step >= 0);

  const Instance inst = Line4();
  const PolicyTables t = MakePolicyTables(inst, nullptr, PolicyKind::kCost, false);
  const SparseGraph star(4, {{1, 2, 3}, {0}, {0}, {0}});
  const SolveResult d = Solve(inst, t, star, Config(PolicyKind::kCost, 100));
  CHECK_FALSE(d.solution);
  CHECK(d.dead_step == 1);
}

TEST_CASE("backtracking") {
  for (ProblemKind kind : {ProblemKind::kTsp, ProblemKind::kVrp, ProblemKind::kTsptw}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Instance inst = testing::RandomInstance(kind, 9, seed, 200.0);
      const SolveResult r = Solve(inst, nullptr, Options(1));
      if (!r.solution) continue;
      const CheckResult check = CheckSolution(inst, r.solution->actions);
      CHECK(check.ok);
      CHECK(check.cost == doctest::Approx(r.solution->cost).epsilon(1e-12));
      if (kind != ProblemKind::kVrp) CHECK(r.solution->actions.size() == inst.size());
      if (kind == ProblemKind::kVrp) {
        for (const Route& route : r.solution->routes) {
          CHECK(route.front() == 0);
          CHECK(route.back() == 0);
          double load = 0.0;
          for (int v : route) load += inst.demands()[v];
          CHECK(load <= inst.capacity());
        }
      }
    }
  }

  Trace trace;
  trace.Push({{0, 2}});
  trace.Push({{0, 1}, {0, 3}});
  CHECK(trace.Backtrack(1, 0) == std::vector<int>{2, 3, 0});
  CHECK_THROWS_AS(trace.Backtrack(5, 0), InternalError);
  Trace broken;
  broken.Push({{0, 1}});
  broken.Push({{4, 2}});
  CHECK_THROWS_AS(broken.Backtrack(0, 0), InternalError);
}

// Runs the solver loop by hand and checks per-step invariants.
void CheckStepInvariants(const Instance& inst, PolicyKind policy, std::size_t beam_size) {
  const PolicyTables t = MakePolicyTables(inst, nullptr, policy, false);
  const SparseGraph graph = SparseGraph::Complete(inst.size());
  const SolverConfig config = Config(policy, beam_size);
  Expander ex(inst, t, graph, config);
  Beam beam = InitBeam(inst, t, config);
  const ProblemKind kind = inst.kind();
  for (std::size_t step = 0; !ex.IsFinal(beam) && beam.size() > 0; ++step) {
    for (std::size_t s = 0; s < beam.size(); ++s) {
      const std::size_t expected = kind == ProblemKind::kVrp ? step : step + 1;
      CHECK(PopCount(beam.visited(s)) == expected);
      if (policy != PolicyKind::kCost) {
        CHECK(beam.score[s] == doctest::Approx(beam.heat[s] + beam.potential[s]).epsilon(1e-9));
      }
      if (kind == ProblemKind::kVrp) {
        CHECK(beam.resource[s] >= 0.0);
        CHECK(beam.resource[s] <= inst.capacity());
      }
      if (kind == ProblemKind::kTsptw) {
        CHECK(beam.resource[s] >= inst.time_windows()[beam.current[s]].open);
      }
    }
    const Grouping g = GroupByVisited(beam);
    std::vector<Candidate> cands = ex.ExpandAll(beam, g);
    // No surviving pair inside one DP state dominates the other.
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || cands[a].node != cands[b].node) continue;
        if (CompareWords(beam.visited(cands[a].parent), beam.visited(cands[b].parent)) != 0) {
          continue;
        }
        CHECK_FALSE(testing::Dominates(cands[a], cands[b], kind));
      }
    }
    TopBSelector sel(beam_size);
    for (const Candidate& c : cands) sel.Offer(c);
    const auto chosen = sel.Take();
    beam = ex.Materialize(beam, chosen);
  }
}

TEST_CASE("per-step invariants") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CheckStepInvariants(GenerateVrp(8, seed), PolicyKind::kCostHeatPotential, 50);
    CheckStepInvariants(GenerateTsp(9, seed), PolicyKind::kHeatPotential, 50);
    CheckStepInvariants(GenerateTsptw(9, seed, 300), PolicyKind::kCost, 50);
  }
}

TEST_CASE("full beam matches the oracles") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Instance tsp = GenerateTsp(7 + seed % 6, seed);
    const std::size_t n = tsp.size();
    const SolveResult r = Solve(tsp, nullptr, Options(n << n));
    const OracleResult o = n <= 11 ? BruteForce(tsp) : ExactDp(tsp);
    REQUIRE(r.solution);
    CHECK(r.solution->cost == doctest::Approx(*o.optimal_cost).epsilon(1e-12));
  }
}

TEST_CASE("solve is deterministic and feasible on sparse graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = GenerateVrp(20, seed);
    SolveOptions o = Options(64);
    o.sparsify.mode = Sparsification::Mode::kKnn;
    o.sparsify.knn = 4;
    const SolveResult a = Solve(inst, nullptr, o);
    const SolveResult b = Solve(inst, nullptr, o);
    REQUIRE(a.solution);
    CHECK(a.solution->actions == b.solution->actions);
    const SparseGraph graph = MakeGraph(inst, nullptr, o.sparsify, false);
    CHECK(CheckSolution(inst, a.solution->actions, &graph).ok);
    CHECK(a.solution->feasible);
  }
}

TEST_CASE("score-bound prefilter drift is reported") {
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = GenerateTsp(30, seed);
    SolveOptions o = Options(50);
    const double exact = Solve(inst, nullptr, o).solution->cost;
    o.solver.score_bound_prefilter = true;
    const SolveResult fast = Solve(inst, nullptr, o);
    REQUIRE(fast.solution);
    CHECK(fast.solution->feasible);
    differ += fast.solution->cost != exact;
  }
  MESSAGE("prefilter changed the result on " << differ << " of 20 instances");
}

TEST_CASE("supplied heatmaps") {
  const Instance inst = GenerateTsp(8, 3);
  std::mt19937_64 rng(3);
  const Heatmap h = testing::RandomHeatmap(8, true, rng, 0.0);
  SolveOptions o = Options(16, PolicyKind::kHeatPotential);
  const SolveResult r = Solve(inst, &h, o);
  REQUIRE(r.solution);
  CHECK(r.solution->feasible);
  const Heatmap wrong = testing::RandomHeatmap(5, false, rng);
  CHECK_THROWS_AS(Solve(inst, &wrong, o), ValidationError);
  o.solver.beam_size = 0;
  CHECK_THROWS_AS(Solve(inst, &h, o), ValidationError);
}

}  // namespace
}  // namespace dpdp
