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

#include "instance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace dpdp {
namespace {

using nlohmann::json;

void CheckSize(std::size_t n) {
  if (n < 2) {
    throw ValidationError("instance needs at least 2 nodes, got " +
                          std::to_string(n));
  }
}

void CheckLength(std::string_view field, std::size_t got, std::size_t n) {
  if (got != n) {
    throw ValidationError("field '" + std::string(field) + "' has " +
                          std::to_string(got) + " entries, expected " +
                          std::to_string(n));
  }
}

void CheckFinite(const std::vector<Point>& coords) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i].x) || !std::isfinite(coords[i].y)) {
      throw ValidationError("coords[" + std::to_string(i) + "] is not finite");
    }
  }
}

// Parses a JSON number or null (= +infinity) for a window end.
double WindowEnd(const json& value, const std::string& field) {
  if (value.is_null()) return kInf;
  if (!value.is_number()) {
    throw ParseError("field '" + field + "' must be a number or null");
  }
  return value.get<double>();
}

json WindowEndJson(double value) {
  if (std::isinf(value) && value > 0) return nullptr;
  return value;
}

const json& Require(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return *it;
}

}  // namespace

std::string_view ToString(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kTsp:
      return "tsp";
    case ProblemKind::kVrp:
      return "vrp";
    case ProblemKind::kTsptw:
      return "tsptw";
  }
  return "?";
}

ProblemKind ParseProblemKind(std::string_view text) {
  if (text == "tsp") return ProblemKind::kTsp;
  if (text == "vrp") return ProblemKind::kVrp;
  if (text == "tsptw") return ProblemKind::kTsptw;
  throw ValidationError("unknown problem '" + std::string(text) +
                        "' (expected tsp, vrp or tsptw)");
}

CostMatrix::CostMatrix(std::span<const Point> coords)
    : n_(coords.size()), values_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = std::hypot(coords[i].x - coords[j].x,
                                  coords[i].y - coords[j].y);
      values_[i * n_ + j] = d;
      values_[j * n_ + i] = d;
    }
  }
}

CostMatrix EuclideanCostMatrix(std::span<const Point> coords) {
  return CostMatrix(coords);
}

Instance::Instance(ProblemKind kind, std::vector<Point> coords,
                   std::vector<double> demands, double capacity,
                   std::vector<TimeWindow> time_windows)
    : kind_(kind),
      coords_(std::move(coords)),
      demands_(std::move(demands)),
      capacity_(capacity),
      time_windows_(std::move(time_windows)),
      costs_(coords_) {}

Instance Instance::Tsp(std::vector<Point> coords) {
  CheckSize(coords.size());
  CheckFinite(coords);
  return Instance(ProblemKind::kTsp, std::move(coords), {}, 0.0, {});
}

Instance Instance::Vrp(std::vector<Point> coords, std::vector<double> demands,
                       double capacity) {
  const std::size_t n = coords.size();
  CheckSize(n);
  CheckFinite(coords);
  CheckLength("demands", demands.size(), n);
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw ValidationError("capacity must be positive and finite");
  }
  if (demands[kDepot] != 0.0) {
    throw ValidationError("demands[0] (depot) must be 0");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(demands[i] > 0.0) || demands[i] > capacity) {
      throw ValidationError("demands[" + std::to_string(i) +
                            "] must lie in (0, capacity]");
    }
  }
  return Instance(ProblemKind::kVrp, std::move(coords), std::move(demands),
                  capacity, {});
}

Instance Instance::Tsptw(std::vector<Point> coords,
                         std::vector<TimeWindow> time_windows) {
  const std::size_t n = coords.size();
  CheckSize(n);
  CheckFinite(coords);
  CheckLength("time_windows", time_windows.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const TimeWindow& w = time_windows[i];
    if (std::isnan(w.open) || std::isnan(w.close) || w.open > w.close) {
      throw ValidationError("time_windows[" + std::to_string(i) +
                            "] has open > close");
    }
  }
  if (time_windows[kDepot].open != 0.0) {
    throw ValidationError("time_windows[0] (depot) must open at 0");
  }
  return Instance(ProblemKind::kTsptw, std::move(coords), {}, 0.0,
                  std::move(time_windows));
}

Instance GenerateTsp(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("n must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> coords(static_cast<std::size_t>(n));
  for (Point& p : coords) {
    p.x = unit(rng);
    p.y = unit(rng);
  }
  return Instance::Tsp(std::move(coords));
}

double VrpCapacityFor(int customers) {
  static constexpr std::array<std::pair<double, double>, 4> kTable = {
      {{10, 20}, {20, 30}, {50, 40}, {100, 50}}};
  const double n = customers;
  if (n <= kTable.front().first) return kTable.front().second;
  if (n >= kTable.back().first) return kTable.back().second;
  for (std::size_t k = 1; k < kTable.size(); ++k) {
    const auto [n1, c1] = kTable[k];
    if (n <= n1) {
      const auto [n0, c0] = kTable[k - 1];
      return std::round(c0 + (c1 - c0) * (n - n0) / (n1 - n0));
    }
  }
  return kTable.back().second;
}

Instance GenerateVrp(int customers, std::uint64_t seed) {
  if (customers < 2) throw ValidationError("n must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> demand(1, 9);
  const std::size_t size = static_cast<std::size_t>(customers) + 1;
  std::vector<Point> coords(size);
  for (Point& p : coords) {
    p.x = unit(rng);
    p.y = unit(rng);
  }
  std::vector<double> demands(size, 0.0);
  for (std::size_t i = 1; i < size; ++i) demands[i] = demand(rng);
  return Instance::Vrp(std::move(coords), std::move(demands),
                       VrpCapacityFor(customers));
}

Instance GenerateTsptw(int n, std::uint64_t seed, double max_window) {
  if (n < 2) throw ValidationError("n must be at least 2");
  if (!(max_window > 0.0)) throw ValidationError("max_window must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> grid(0.0, 100.0);
  std::vector<Point> coords(static_cast<std::size_t>(n));
  for (Point& p : coords) {
    p.x = grid(rng);
    p.y = grid(rng);
  }
  std::vector<int> order(static_cast<std::size_t>(n) - 1);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);

  const CostMatrix costs(coords);
  std::uniform_real_distribution<double> slack(0.0, max_window / 2.0);
  std::vector<TimeWindow> windows(static_cast<std::size_t>(n));
  double arrival = 0.0;
  int previous = kDepot;
  for (int node : order) {
    arrival += costs(previous, node);
    const double before = slack(rng);
    const double after = slack(rng);
    windows[node] = {std::max(0.0, arrival - before), arrival + after};
    previous = node;
  }
  windows[kDepot] = {0.0, kInf};
  return Instance::Tsptw(std::move(coords), std::move(windows));
}

std::string InstanceToJson(const Instance& instance) {
  json out;
  out["problem"] = ToString(instance.kind());
  json coords = json::array();
  for (const Point& p : instance.coords()) coords.push_back({p.x, p.y});
  out["coords"] = std::move(coords);
  if (instance.kind() == ProblemKind::kVrp) {
    out["demands"] = instance.demands();
    out["capacity"] = instance.capacity();
  }
  if (instance.kind() == ProblemKind::kTsptw) {
    json windows = json::array();
    for (const TimeWindow& w : instance.time_windows()) {
      windows.push_back({WindowEndJson(w.open), WindowEndJson(w.close)});
    }
    out["time_windows"] = std::move(windows);
  }
  return out.dump() + "\n";
}

Instance InstanceFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: expected a JSON object");

  try {
    const ProblemKind kind =
        ParseProblemKind(Require(doc, "problem").get<std::string>());
    const json& jcoords = Require(doc, "coords");
    if (!jcoords.is_array()) throw ParseError("field 'coords' must be an array");
    std::vector<Point> coords;
    coords.reserve(jcoords.size());
    for (std::size_t i = 0; i < jcoords.size(); ++i) {
      const json& c = jcoords[i];
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
          !c[1].is_number()) {
        throw ParseError("field 'coords[" + std::to_string(i) +
                         "]' must be [x, y]");
      }
      coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }

    switch (kind) {
      case ProblemKind::kTsp:
        return Instance::Tsp(std::move(coords));
      case ProblemKind::kVrp: {
        const json& jdemands = Require(doc, "demands");
        const json& jcapacity = Require(doc, "capacity");
        if (!jcapacity.is_number()) {
          throw ParseError("field 'capacity' must be a number");
        }
        if (!jdemands.is_array()) {
          throw ParseError("field 'demands' must be an array");
        }
        std::vector<double> demands;
        for (std::size_t i = 0; i < jdemands.size(); ++i) {
          if (!jdemands[i].is_number()) {
            throw ParseError("field 'demands[" + std::to_string(i) +
                             "]' must be a number");
          }
          demands.push_back(jdemands[i].get<double>());
        }
        return Instance::Vrp(std::move(coords), std::move(demands),
                             jcapacity.get<double>());
      }
      case ProblemKind::kTsptw: {
        const json& jwindows = Require(doc, "time_windows");
        if (!jwindows.is_array()) {
          throw ParseError("field 'time_windows' must be an array");
        }
        std::vector<TimeWindow> windows;
        for (std::size_t i = 0; i < jwindows.size(); ++i) {
          const std::string field = "time_windows[" + std::to_string(i) + "]";
          const json& w = jwindows[i];
          if (!w.is_array() || w.size() != 2) {
            throw ParseError("field '" + field + "' must be [l, u]");
          }
          windows.push_back({WindowEnd(w[0], field), WindowEnd(w[1], field)});
        }
        return Instance::Tsptw(std::move(coords), std::move(windows));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  throw ParseError("instance: unreachable problem kind");
}

Instance ReadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return InstanceFromJson(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteInstance(const Instance& instance,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file " + path.string());
  out << InstanceToJson(instance);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dpdp
