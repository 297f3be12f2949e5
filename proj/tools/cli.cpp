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

// Command-line front end: solve, generate, verify and bench.
//
// Exit codes: 0 success, 1 solver or verification mismatch, 2 usage error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dpdp/dpdp.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceDeleter {
  void operator()(dpdp_instance* p) const { dpdp_instance_free(p); }
};
struct HeatmapDeleter {
  void operator()(dpdp_heatmap* p) const { dpdp_heatmap_free(p); }
};
struct SolutionDeleter {
  void operator()(dpdp_solution* p) const { dpdp_solution_free(p); }
};
using InstancePtr = std::unique_ptr<dpdp_instance, InstanceDeleter>;
using HeatmapPtr = std::unique_ptr<dpdp_heatmap, HeatmapDeleter>;
using SolutionPtr = std::unique_ptr<dpdp_solution, SolutionDeleter>;

std::string ErrorText(dpdp_status status) {
  return std::string(dpdp_status_string(status)) + ": " + dpdp_last_error();
}

double Millis(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename F>
void ParallelFor(std::size_t count, int jobs, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Solver flags shared by solve, verify and bench.
struct SolverFlags {
  std::string problem;
  std::string policy = "cost-heat-potential";
  bool invert_cost_heat = false;
  std::size_t beam_size = 1;
  double threshold = 1e-5;
  int knn = 0;
  std::string dominance = "on";
  std::string prefilter = "off";
  std::string heatmap_dir;
  int jobs = 1;
  bool json = false;
  std::string out;
  std::string ref_costs;
};

struct Config {
  dpdp_solver_config c;
  std::string sparsify_label;

  std::string Label() const {
    return std::string(dpdp_policy_name(c.policy)) + " B=" +
           std::to_string(c.beam_size) + " " + sparsify_label +
           " dominance=" + (c.dominance ? "on" : "off");
  }
};

dpdp_problem ParseProblem(const std::string& text) {
  dpdp_problem p;
  if (dpdp_problem_parse(text.c_str(), &p) != DPDP_OK) {
    throw UsageError("unknown problem '" + text + "'");
  }
  return p;
}

dpdp_policy ParsePolicy(const std::string& text) {
  dpdp_policy p;
  if (dpdp_policy_parse(text.c_str(), &p) != DPDP_OK) {
    throw UsageError("unknown policy '" + text + "'");
  }
  return p;
}

bool OnOff(const std::string& text, const char* flag) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw UsageError(std::string(flag) + " expects on or off, got '" + text + "'");
}

Config MakeConfig(const SolverFlags& f, bool knn_set, dpdp_policy policy,
                  std::size_t beam, double threshold, int knn, bool dominance) {
  Config cfg;
  dpdp_solver_config_init(&cfg.c);
  cfg.c.beam_size = beam;
  cfg.c.policy = policy;
  cfg.c.invert_cost_heat = f.invert_cost_heat;
  cfg.c.dominance = dominance;
  cfg.c.score_bound_prefilter = OnOff(f.prefilter, "--score-bound-prefilter");
  if (knn_set) {
    cfg.c.sparsify = DPDP_SPARSIFY_KNN;
    cfg.c.knn = knn;
    cfg.sparsify_label = "knn=" + std::to_string(knn);
  } else {
    if (!(threshold >= 0.0 && threshold < 1.0)) {
      throw UsageError("--threshold must lie in [0, 1)");
    }
    cfg.c.sparsify = DPDP_SPARSIFY_THRESHOLD;
    cfg.c.threshold = threshold;
    cfg.sparsify_label = "threshold=" + Num(threshold);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Instances.

struct InstanceRef {
  std::string id;
  fs::path path;      // empty for generated instances
  InstancePtr value;  // loaded eagerly for generated instances
};

std::vector<InstanceRef> ListInstances(const std::string& where) {
  std::vector<InstanceRef> out;
  const fs::path root(where);
  std::error_code ec;
  if (fs::is_directory(root, ec)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        out.push_back({entry.path().stem().string(), entry.path(), nullptr});
      }
    }
    std::sort(out.begin(), out.end(),
              [](const InstanceRef& a, const InstanceRef& b) { return a.id < b.id; });
    if (out.empty()) throw UsageError("no .json instances in " + where);
  } else if (fs::is_regular_file(root, ec)) {
    out.push_back({root.stem().string(), root, nullptr});
  } else {
    throw UsageError("instance path not found: " + where);
  }
  return out;
}

std::string GeneratedId(const std::string& problem, int n, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04d", i);
  return problem + std::to_string(n) + buf;
}

// Sources for verify and bench: files, or instances generated in memory.
struct SourceFlags {
  std::string instances;
  int n = 0;
  int count = 1;
  std::uint64_t seed = 0;
  double max_window = 100.0;
};

std::vector<InstanceRef> LoadSource(const SourceFlags& s, dpdp_problem problem) {
  std::vector<InstanceRef> refs;
  if (!s.instances.empty()) {
    refs = ListInstances(s.instances);
    for (auto& r : refs) {
      dpdp_instance* raw = nullptr;
      const dpdp_status st = dpdp_instance_read(r.path.string().c_str(), &raw);
      if (st != DPDP_OK) throw std::runtime_error(r.id + ": " + ErrorText(st));
      r.value.reset(raw);
      if (dpdp_instance_problem(raw) != problem) {
        throw UsageError(r.id + ": instance is not a " +
                         std::string(dpdp_problem_name(problem)) + " instance");
      }
    }
    return refs;
  }
  if (s.n <= 0) throw UsageError("either --instances or --n is required");
  for (int i = 0; i < s.count; ++i) {
    dpdp_instance* raw = nullptr;
    const dpdp_status st =
        dpdp_instance_generate(problem, s.n, s.seed + i, s.max_window, &raw);
    if (st != DPDP_OK) throw UsageError(ErrorText(st));
    refs.push_back({GeneratedId(dpdp_problem_name(problem), s.n, i), {}, InstancePtr(raw)});
  }
  return refs;
}

std::map<std::string, double> ReadRefCosts(const std::string& path) {
  std::map<std::string, double> refs;
  if (path.empty()) return refs;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open reference costs " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string id, value;
    if (!(fields >> id >> value) || id[0] == '#') continue;
    try {
      std::size_t used = 0;
      const double cost = std::stod(value, &used);
      if (used == value.size()) refs[id] = cost;
    } catch (const std::exception&) {
      // Header or comment line.
    }
  }
  return refs;
}

// ---------------------------------------------------------------------------
// Solving and reporting.

struct Row {
  std::string id;
  std::string config;
  std::string status;  // ok, infeasible, no-solution, error
  std::string message;
  std::optional<double> cost;
  bool feasible = false;
  std::size_t beam_size = 0;
  std::string policy;
  std::string sparsify;
  bool dominance = true;
  double solve_ms = 0.0;
  double heatmap_ms = 0.0;
  std::optional<double> ref;
  std::optional<double> gap;
  std::vector<int> actions;
  std::vector<std::vector<int>> routes;
};

Row SolveOne(const std::string& id, const dpdp_instance* instance,
             dpdp_problem problem, const Config& cfg,
             const std::string& heatmap_dir) {
  Row row;
  row.id = id;
  row.config = cfg.Label();
  row.beam_size = cfg.c.beam_size;
  row.policy = dpdp_policy_name(cfg.c.policy);
  row.sparsify = cfg.sparsify_label;
  row.dominance = cfg.c.dominance != 0;

  HeatmapPtr heat;
  if (!heatmap_dir.empty()) {
    const fs::path file = fs::path(heatmap_dir) / (id + ".heatmap");
    const auto start = std::chrono::steady_clock::now();
    dpdp_heatmap* raw = nullptr;
    const dpdp_status st =
        dpdp_heatmap_read(file.string().c_str(), dpdp_instance_size(instance), &raw);
    row.heatmap_ms = Millis(std::chrono::steady_clock::now() - start);
    if (st != DPDP_OK) {
      row.status = "error";
      row.message = ErrorText(st);
      return row;
    }
    heat.reset(raw);
  }

  const auto start = std::chrono::steady_clock::now();
  dpdp_solution* raw = nullptr;
  const dpdp_status st = dpdp_solve(instance, heat.get(), &cfg.c, &raw);
  row.solve_ms = Millis(std::chrono::steady_clock::now() - start);
  if (st != DPDP_OK) {
    row.status = "error";
    row.message = ErrorText(st);
    return row;
  }
  SolutionPtr sol(raw);
  if (!dpdp_solution_found(sol.get())) {
    row.status = problem == DPDP_TSPTW ? "infeasible" : "no-solution";
    row.message = "beam emptied at step " + std::to_string(dpdp_solution_dead_step(sol.get()));
    return row;
  }
  row.status = "ok";
  row.cost = dpdp_solution_cost(sol.get());
  row.feasible = dpdp_solution_feasible(sol.get()) != 0;
  if (!row.feasible) {
    row.status = "error";
    row.message = "returned solution failed re-simulation";
  }
  std::size_t count = 0;
  const int* actions = dpdp_solution_actions(sol.get(), &count);
  row.actions.assign(actions, actions + count);
  for (std::size_t r = 0; r < dpdp_solution_num_routes(sol.get()); ++r) {
    std::size_t len = 0;
    const int* nodes = dpdp_solution_route(sol.get(), r, &len);
    row.routes.emplace_back(nodes, nodes + len);
  }
  return row;
}

void AttachGap(Row& row, const std::map<std::string, double>& refs) {
  const auto it = refs.find(row.id);
  if (it == refs.end()) return;
  row.ref = it->second;
  if (row.cost && it->second != 0.0) row.gap = (*row.cost - it->second) / it->second;
}

json OptNum(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const char* kCsvHeader =
    "instance,status,cost,feasible,beam_size,policy,sparsify,dominance,"
    "solve_ms,heatmap_ms,ref_cost,gap,message";

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::string OptField(const std::optional<double>& v) { return v ? Num(*v) : ""; }

void WriteRows(std::ostream& out, const std::vector<Row>& rows, bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const Row& r : rows) {
      arr.push_back({{"instance", r.id},
                     {"status", r.status},
                     {"cost", OptNum(r.cost)},
                     {"feasible", r.feasible},
                     {"beam_size", r.beam_size},
                     {"policy", r.policy},
                     {"sparsify", r.sparsify},
                     {"dominance", r.dominance},
                     {"solve_ms", r.solve_ms},
                     {"heatmap_ms", r.heatmap_ms},
                     {"ref_cost", OptNum(r.ref)},
                     {"gap", OptNum(r.gap)},
                     {"message", r.message}});
    }
    out << arr.dump(2) << "\n";
    return;
  }
  out << kCsvHeader << "\n";
  for (const Row& r : rows) {
    out << CsvField(r.id) << ',' << r.status << ',' << OptField(r.cost) << ','
        << (r.feasible ? "true" : "false") << ',' << r.beam_size << ','
        << r.policy << ',' << r.sparsify << ',' << (r.dominance ? "on" : "off")
        << ',' << Num(r.solve_ms) << ',' << Num(r.heatmap_ms) << ','
        << OptField(r.ref) << ',' << OptField(r.gap) << ','
        << CsvField(r.message) << "\n";
  }
}

struct Aggregate {
  std::size_t instances = 0;
  std::size_t solved = 0;
  std::optional<double> mean_cost;
  std::optional<double> mean_gap;
  double mean_time_ms = 0.0;
  double total_time_ms = 0.0;
};

Aggregate Summarize(const std::vector<const Row*>& rows) {
  Aggregate a;
  a.instances = rows.size();
  double cost_sum = 0.0;
  double gap_sum = 0.0;
  std::size_t gaps = 0;
  for (const Row* r : rows) {
    a.total_time_ms += r->solve_ms + r->heatmap_ms;
    if (r->cost) {
      ++a.solved;
      cost_sum += *r->cost;
    }
    if (r->gap) {
      ++gaps;
      gap_sum += *r->gap;
    }
  }
  if (a.solved > 0) a.mean_cost = cost_sum / a.solved;
  if (gaps > 0) a.mean_gap = gap_sum / gaps;
  if (!rows.empty()) a.mean_time_ms = a.total_time_ms / rows.size();
  return a;
}

json AggregateJson(const Aggregate& a) {
  return {{"instances", a.instances},     {"solved", a.solved},
          {"mean_cost", OptNum(a.mean_cost)}, {"mean_gap", OptNum(a.mean_gap)},
          {"mean_time_ms", a.mean_time_ms}, {"total_time_ms", a.total_time_ms}};
}

void WriteSolutionFile(const fs::path& dir, const Row& row) {
  json doc = {{"instance", row.id},
              {"status", row.status},
              {"cost", OptNum(row.cost)},
              {"feasible", row.feasible},
              {"actions", row.actions},
              {"routes", row.routes}};
  std::ofstream out(dir / (row.id + ".solution.json"));
  out << doc.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write solution for " + row.id);
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Commands.

void AddSolverFlags(CLI::App* cmd, SolverFlags& f, CLI::Option*& threshold_opt,
                    CLI::Option*& knn_opt, bool single_config) {
  cmd->add_option("--problem", f.problem, "tsp, vrp or tsptw")->required();
  cmd->add_flag("--invert-cost-heat", f.invert_cost_heat,
                "use 1 - c/max for the cost heatmap");
  cmd->add_option("--heatmap-dir", f.heatmap_dir,
                  "directory of <instance-id>.heatmap files");
  cmd->add_option("--score-bound-prefilter", f.prefilter, "on or off")
      ->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "instances solved concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--json", f.json, "JSON output instead of CSV");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--ref-costs", f.ref_costs,
                  "file of 'instance cost' lines for gap computation");
  if (single_config) {
    cmd->add_option("--policy", f.policy)->capture_default_str();
    cmd->add_option("--beam-size", f.beam_size)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    threshold_opt = cmd->add_option("--threshold", f.threshold,
                                    "heatmap sparsification threshold")
                        ->capture_default_str();
    knn_opt = cmd->add_option("--knn", f.knn, "k-nearest-neighbour graph")
                  ->check(CLI::PositiveNumber);
    threshold_opt->excludes(knn_opt);
    cmd->add_option("--dominance", f.dominance, "on or off")->capture_default_str();
  }
}

Row ErrorRow(const std::string& id, const Config& cfg, std::string message) {
  Row row;
  row.id = id;
  row.config = cfg.Label();
  row.status = "error";
  row.message = std::move(message);
  row.beam_size = cfg.c.beam_size;
  row.policy = dpdp_policy_name(cfg.c.policy);
  row.sparsify = cfg.sparsify_label;
  row.dominance = cfg.c.dominance != 0;
  return row;
}

std::vector<const Row*> Pointers(const std::vector<Row>& rows) {
  std::vector<const Row*> out;
  for (const Row& r : rows) out.push_back(&r);
  return out;
}

void PrintSummary(const char* label, const Aggregate& a) {
  std::cerr << label << ": instances=" << a.instances << " solved=" << a.solved
            << " mean_cost=" << (a.mean_cost ? Num(*a.mean_cost) : "n/a")
            << " mean_gap=" << (a.mean_gap ? Num(*a.mean_gap) : "n/a")
            << " total_time_ms=" << Num(a.total_time_ms) << "\n";
}

void WriteFile(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int CmdSolve(const SolverFlags& f, const std::string& instances, bool knn_set) {
  const dpdp_problem problem = ParseProblem(f.problem);
  const Config cfg = MakeConfig(f, knn_set, ParsePolicy(f.policy), f.beam_size,
                                f.threshold, f.knn, OnOff(f.dominance, "--dominance"));
  const auto refs = ReadRefCosts(f.ref_costs);
  const std::vector<InstanceRef> files = ListInstances(instances);
  if (!f.out.empty()) EnsureDir(f.out);

  std::vector<Row> rows(files.size());
  ParallelFor(files.size(), f.jobs, [&](std::size_t i) {
    const InstanceRef& file = files[i];
    dpdp_instance* raw = nullptr;
    const dpdp_status st = dpdp_instance_read(file.path.string().c_str(), &raw);
    if (st != DPDP_OK) {
      rows[i] = ErrorRow(file.id, cfg, ErrorText(st));
      return;
    }
    InstancePtr instance(raw);
    if (dpdp_instance_problem(raw) != problem) {
      rows[i] = ErrorRow(file.id, cfg,
                         std::string("instance is ") +
                             dpdp_problem_name(dpdp_instance_problem(raw)));
      return;
    }
    rows[i] = SolveOne(file.id, raw, problem, cfg, f.heatmap_dir);
    AttachGap(rows[i], refs);
  });

  WriteRows(std::cout, rows, f.json);
  const Aggregate agg = Summarize(Pointers(rows));
  PrintSummary("solve", agg);
  if (!f.out.empty()) {
    std::ostringstream report;
    WriteRows(report, rows, f.json);
    WriteFile(fs::path(f.out) / (f.json ? "report.json" : "report.csv"), report.str());
    WriteFile(fs::path(f.out) / "summary.json", AggregateJson(agg).dump(2) + "\n");
    for (const Row& row : rows) {
      if (row.status == "ok" || row.status == "infeasible") {
        WriteSolutionFile(f.out, row);
      }
    }
  }
  const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) {
    return r.status == "ok" || r.status == "infeasible";
  });
  return all_ok ? kExitOk : kExitMismatch;
}

int CmdGenerate(const std::string& problem_text, int n, int count,
                std::uint64_t seed, double max_window, const std::string& out) {
  const dpdp_problem problem = ParseProblem(problem_text);
  EnsureDir(out);
  for (int i = 0; i < count; ++i) {
    dpdp_instance* raw = nullptr;
    dpdp_status st = dpdp_instance_generate(problem, n, seed + i, max_window, &raw);
    if (st != DPDP_OK) throw UsageError(ErrorText(st));
    InstancePtr instance(raw);
    const fs::path path =
        fs::path(out) / (GeneratedId(dpdp_problem_name(problem), n, i) + ".json");
    st = dpdp_instance_write(raw, path.string().c_str());
    if (st != DPDP_OK) throw std::runtime_error(ErrorText(st));
  }
  std::cerr << "generated " << count << " " << dpdp_problem_name(problem)
            << " instances in " << out << "\n";
  return kExitOk;
}

// Largest beam any problem needs to enumerate its full DP state space.
std::size_t FullBeam(dpdp_problem problem, std::size_t n) {
  if (problem == DPDP_TSP && n < 40) return n << n;
  return 1000000;
}

struct VerifyFlags {
  std::string oracle = "auto";
  double tolerance = 1e-9;
};

int CmdVerify(const SolverFlags& f, const SourceFlags& src, const VerifyFlags& v,
              bool beam_set, bool knn_set) {
  const dpdp_problem problem = ParseProblem(f.problem);
  if (v.oracle != "auto" && v.oracle != "brute" && v.oracle != "dp") {
    throw UsageError("--oracle expects auto, brute or dp");
  }
  const dpdp_policy policy = ParsePolicy(f.policy);
  const bool dominance = OnOff(f.dominance, "--dominance");
  const std::vector<InstanceRef> refs = LoadSource(src, problem);

  struct Verdict {
    bool pass = false;
    bool limit = false;
    std::string text;
  };
  std::vector<Verdict> verdicts(refs.size());
  ParallelFor(refs.size(), f.jobs, [&](std::size_t i) {
    const InstanceRef& ref = refs[i];
    const std::size_t n = dpdp_instance_size(ref.value.get());
    const std::size_t beam = beam_set ? f.beam_size : FullBeam(problem, n);
    const Config cfg = MakeConfig(f, knn_set, policy, beam, f.threshold, f.knn, dominance);
    Verdict& out = verdicts[i];

    dpdp_solution* raw = nullptr;
    dpdp_status st = DPDP_ERR_LIMIT;
    if (v.oracle != "dp") st = dpdp_oracle_brute_force(ref.value.get(), &raw);
    if (st == DPDP_ERR_LIMIT && v.oracle != "brute") {
      st = dpdp_oracle_exact_dp(ref.value.get(), &raw);
    }
    if (st != DPDP_OK) {
      out.limit = st == DPDP_ERR_LIMIT;
      out.text = "oracle: " + ErrorText(st);
      return;
    }
    SolutionPtr oracle(raw);
    const Row row = SolveOne(ref.id, ref.value.get(), problem, cfg, f.heatmap_dir);
    const bool oracle_feasible = dpdp_solution_found(oracle.get()) != 0;
    const std::string expected =
        oracle_feasible ? "optimum=" + Num(dpdp_solution_cost(oracle.get()))
                        : std::string("optimum=infeasible");
    if (row.status == "error") {
      out.text = "solver error: " + row.message;
    } else if (!oracle_feasible) {
      out.pass = !row.cost.has_value();
      out.text = (row.cost ? "cost=" + Num(*row.cost) : "no solution") + " " + expected;
    } else if (!row.cost) {
      out.text = "no solution " + expected;
    } else {
      const double diff = std::fabs(*row.cost - dpdp_solution_cost(oracle.get()));
      out.pass = row.feasible && diff <= v.tolerance;
      out.text = "cost=" + Num(*row.cost) + " " + expected;
    }
  });

  std::size_t passed = 0;
  std::vector<std::string> failed;
  bool limit = false;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const Verdict& verdict = verdicts[i];
    std::cout << (verdict.pass ? "PASS " : "FAIL ") << refs[i].id << " "
              << verdict.text << "\n";
    limit = limit || verdict.limit;
    if (verdict.pass) {
      ++passed;
    } else {
      failed.push_back(refs[i].id);
    }
  }
  std::cout << "verify: " << passed << "/" << refs.size() << " passed\n";
  if (!failed.empty()) {
    std::cout << "failed:";
    for (const auto& id : failed) std::cout << " " << id;
    std::cout << "\n";
  }
  if (limit) return kExitUsage;
  return failed.empty() ? kExitOk : kExitMismatch;
}

struct BenchFlags {
  std::vector<std::size_t> beam_sizes{1, 10, 100};
  std::vector<std::string> policies{"cost-heat-potential"};
  std::vector<double> thresholds;
  std::vector<int> knns;
  std::vector<std::string> dominance{"on"};
};

int CmdBench(const SolverFlags& f, const SourceFlags& src, const BenchFlags& b) {
  const dpdp_problem problem = ParseProblem(f.problem);
  std::vector<Config> configs;
  std::vector<std::pair<bool, double>> sparsifiers;  // (knn?, value)
  for (double t : b.thresholds) sparsifiers.push_back({false, t});
  for (int k : b.knns) {
    if (k < 1) throw UsageError("--knn values must be positive");
    sparsifiers.push_back({true, static_cast<double>(k)});
  }
  if (sparsifiers.empty()) sparsifiers.push_back({false, f.threshold});
  for (const auto& p : b.policies) {
    const dpdp_policy policy = ParsePolicy(p);
    for (const auto& [knn, value] : sparsifiers) {
      for (const auto& d : b.dominance) {
        const bool dominance = OnOff(d, "--dominance");
        for (std::size_t beam : b.beam_sizes) {
          if (beam == 0) throw UsageError("--beam-sizes values must be positive");
          configs.push_back(MakeConfig(f, knn, policy, beam, value,
                                       static_cast<int>(value), dominance));
        }
      }
    }
  }
  const auto refs = ReadRefCosts(f.ref_costs);
  const std::vector<InstanceRef> instances = LoadSource(src, problem);
  if (!f.out.empty()) EnsureDir(f.out);

  const std::size_t per = instances.size();
  std::vector<Row> rows(configs.size() * per);
  ParallelFor(rows.size(), f.jobs, [&](std::size_t k) {
    const Config& cfg = configs[k / per];
    const InstanceRef& inst = instances[k % per];
    rows[k] = SolveOne(inst.id, inst.value.get(), problem, cfg, f.heatmap_dir);
    AttachGap(rows[k], refs);
  });

  // Plot-ready table: one line per configuration.
  json table = json::array();
  std::ostringstream csv;
  csv << "config,policy,beam_size,sparsify,dominance,instances,solved,mean_cost,"
         "mean_gap,mean_time_ms\n";
  std::vector<Aggregate> aggs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::vector<const Row*> group;
    for (std::size_t i = 0; i < per; ++i) group.push_back(&rows[c * per + i]);
    const Aggregate a = Summarize(group);
    aggs.push_back(a);
    const Config& cfg = configs[c];
    const std::string dom = cfg.c.dominance ? "on" : "off";
    json entry = {{"config", cfg.Label()},
                  {"policy", dpdp_policy_name(cfg.c.policy)},
                  {"beam_size", cfg.c.beam_size},
                  {"sparsify", cfg.sparsify_label},
                  {"dominance", dom}};
    entry.update(AggregateJson(a));
    table.push_back(entry);
    csv << CsvField(cfg.Label()) << ',' << dpdp_policy_name(cfg.c.policy) << ','
        << cfg.c.beam_size << ',' << cfg.sparsify_label << ',' << dom << ','
        << a.instances << ',' << a.solved << ',' << OptField(a.mean_cost) << ','
        << OptField(a.mean_gap) << ',' << Num(a.mean_time_ms) << "\n";
  }
  const std::string body = f.json ? table.dump(2) + "\n" : csv.str();
  std::cout << body;
  if (!f.out.empty()) {
    std::ostringstream report;
    WriteRows(report, rows, f.json);
    WriteFile(fs::path(f.out) / (f.json ? "bench_rows.json" : "bench_rows.csv"),
              report.str());
    WriteFile(fs::path(f.out) / (f.json ? "bench_table.json" : "bench_table.csv"), body);
  }

  // Mean cost must not increase with B inside a (policy, graph, dominance)
  // group. Only instances solved by every beam size of the group count.
  bool monotone = true;
  const std::size_t beams = b.beam_sizes.size();
  for (std::size_t g = 0; g + beams <= configs.size(); g += beams) {
    std::vector<std::size_t> idx(beams);
    for (std::size_t k = 0; k < beams; ++k) idx[k] = g + k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return configs[x].c.beam_size < configs[y].c.beam_size;
    });
    std::vector<double> means(beams, 0.0);
    std::size_t common = 0;
    for (std::size_t i = 0; i < per; ++i) {
      bool all = true;
      for (std::size_t k : idx) all = all && rows[k * per + i].cost.has_value();
      if (!all) continue;
      ++common;
      for (std::size_t k = 0; k < beams; ++k) means[k] += *rows[idx[k] * per + i].cost;
    }
    if (common == 0 || beams < 2) continue;
    bool ok = true;
    for (std::size_t k = 1; k < beams; ++k) {
      ok = ok && means[k] / common <= means[k - 1] / common + 1e-9;
    }
    monotone = monotone && ok;
    std::cerr << "beam-monotonicity [" << dpdp_policy_name(configs[g].c.policy) << " "
              << configs[g].sparsify_label << " dominance="
              << (configs[g].c.dominance ? "on" : "off") << "]: "
              << (ok ? "PASS" : "FAIL") << "\n";
  }
  const bool errors = std::any_of(rows.begin(), rows.end(),
                                  [](const Row& r) { return r.status == "error"; });
  return monotone && !errors ? kExitOk : kExitMismatch;
}

void AddSourceFlags(CLI::App* cmd, SourceFlags& s) {
  auto* files = cmd->add_option("--instances", s.instances, "instance file or directory");
  auto* n = cmd->add_option("--n", s.n, "generate instances of this size")
                ->check(CLI::PositiveNumber);
  files->excludes(n);
  cmd->add_option("--count", s.count, "generated instance count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", s.seed, "seed of the first generated instance")
      ->capture_default_str();
  cmd->add_option("--max-window", s.max_window, "TSPTW window width")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted dynamic programming solver for TSP, VRP and TSPTW"};
  app.require_subcommand(1);

  SolverFlags solve_flags;
  std::string solve_instances;
  CLI::Option* solve_threshold = nullptr;
  CLI::Option* solve_knn = nullptr;
  CLI::App* solve = app.add_subcommand("solve", "solve instances and write a report");
  AddSolverFlags(solve, solve_flags, solve_threshold, solve_knn, true);
  solve->add_option("--instances", solve_instances, "instance file or directory")
      ->required();
  std::uint64_t unused_seed = 0;
  solve->add_option("--seed", unused_seed, "accepted for symmetry; solving is deterministic");

  std::string gen_problem;
  std::string gen_out;
  int gen_n = 0;
  int gen_count = 1;
  std::uint64_t gen_seed = 0;
  double gen_window = 100.0;
  CLI::App* generate = app.add_subcommand("generate", "write random instances");
  generate->add_option("--problem", gen_problem, "tsp, vrp or tsptw")->required();
  generate->add_option("--n", gen_n, "nodes (customers for vrp)")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--count", gen_count)->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--seed", gen_seed)->capture_default_str();
  generate->add_option("--max-window", gen_window, "TSPTW window width")
      ->capture_default_str();
  generate->add_option("--out", gen_out, "output directory")->required();

  SolverFlags verify_flags;
  SourceFlags verify_src;
  VerifyFlags verify_opts;
  CLI::Option* verify_threshold = nullptr;
  CLI::Option* verify_knn = nullptr;
  CLI::App* verify = app.add_subcommand("verify", "compare solver output with the exact oracles");
  AddSolverFlags(verify, verify_flags, verify_threshold, verify_knn, true);
  AddSourceFlags(verify, verify_src);
  verify->add_option("--oracle", verify_opts.oracle, "auto, brute or dp")
      ->capture_default_str();
  verify->add_option("--tolerance", verify_opts.tolerance)->capture_default_str();

  SolverFlags bench_flags;
  SourceFlags bench_src;
  BenchFlags bench_opts;
  CLI::Option* unused_threshold = nullptr;
  CLI::Option* unused_knn = nullptr;
  CLI::App* bench = app.add_subcommand("bench", "sweep configurations over instances");
  AddSolverFlags(bench, bench_flags, unused_threshold, unused_knn, false);
  AddSourceFlags(bench, bench_src);
  bench->add_option("--beam-sizes", bench_opts.beam_sizes)->delimiter(',')->capture_default_str();
  bench->add_option("--policies", bench_opts.policies)->delimiter(',')->capture_default_str();
  bench->add_option("--thresholds", bench_opts.thresholds)->delimiter(',');
  bench->add_option("--knns", bench_opts.knns)->delimiter(',');
  bench->add_option("--dominance", bench_opts.dominance, "on, off or on,off")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      return CmdSolve(solve_flags, solve_instances, solve_knn->count() > 0);
    }
    if (generate->parsed()) {
      return CmdGenerate(gen_problem, gen_n, gen_count, gen_seed, gen_window, gen_out);
    }
    if (verify->parsed()) {
      return CmdVerify(verify_flags, verify_src, verify_opts,
                       verify->count("--beam-size") > 0, verify_knn->count() > 0);
    }
    if (bench->parsed()) return CmdBench(bench_flags, bench_src, bench_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitUsage;
}
