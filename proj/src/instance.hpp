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

// Routing problem instances: TSP, capacitated VRP and TSP with time windows.
// Node 0 is always the start node (TSP, TSPTW) or the depot (VRP). Travel
// cost and travel time are both the exact Euclidean distance.

#ifndef DPDP_INSTANCE_HPP_
#define DPDP_INSTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace dpdp {

enum class ProblemKind { kTsp, kVrp, kTsptw };

std::string_view ToString(ProblemKind kind);
// Accepts "tsp", "vrp", "tsptw"; throws ValidationError otherwise.
ProblemKind ParseProblemKind(std::string_view text);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct TimeWindow {
  double open = 0.0;
  double close = kInf;
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

// Dense n x n matrix of pairwise Euclidean distances.
class CostMatrix {
 public:
  explicit CostMatrix(std::span<const Point> coords);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_, n_};
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

class Instance {
 public:
  // Factories validate every invariant and throw ValidationError.
  static Instance Tsp(std::vector<Point> coords);
  static Instance Vrp(std::vector<Point> coords, std::vector<double> demands,
                      double capacity);
  static Instance Tsptw(std::vector<Point> coords,
                        std::vector<TimeWindow> time_windows);

  ProblemKind kind() const { return kind_; }
  // Number of nodes, depot included.
  std::size_t size() const { return coords_.size(); }
  const std::vector<Point>& coords() const { return coords_; }
  // Empty unless kind() == kVrp.
  const std::vector<double>& demands() const { return demands_; }
  double capacity() const { return capacity_; }
  // Empty unless kind() == kTsptw.
  const std::vector<TimeWindow>& time_windows() const { return time_windows_; }
  const CostMatrix& costs() const { return costs_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.kind_ == b.kind_ && a.coords_ == b.coords_ &&
           a.demands_ == b.demands_ && a.capacity_ == b.capacity_ &&
           a.time_windows_ == b.time_windows_;
  }

 private:
  Instance(ProblemKind kind, std::vector<Point> coords,
           std::vector<double> demands, double capacity,
           std::vector<TimeWindow> time_windows);

  ProblemKind kind_;
  std::vector<Point> coords_;
  std::vector<double> demands_;
  double capacity_ = 0.0;
  std::vector<TimeWindow> time_windows_;
  CostMatrix costs_;
};

CostMatrix EuclideanCostMatrix(std::span<const Point> coords);

// Uniform coordinates on the unit square.
Instance GenerateTsp(int n, std::uint64_t seed);

// `customers` customers plus the depot (so size() == customers + 1), unit
// square coordinates, integer demands in {1..9} and the capacity from
// VrpCapacityFor.
Instance GenerateVrp(int customers, std::uint64_t seed);

// 20/30/40/50 for 10/20/50/100 customers, rounded linear interpolation in
// between and clamped outside that range.
double VrpCapacityFor(int customers);

// n nodes on a 100x100 grid. Windows are sampled around the arrival times of
// a random visiting order travelled without waiting, with each endpoint at
// most max_window / 2 away from the arrival time.
Instance GenerateTsptw(int n, std::uint64_t seed, double max_window);

// JSON instance format: {"problem", "coords", "demands", "capacity",
// "time_windows"}; an infinite window end is written as null.
std::string InstanceToJson(const Instance& instance);
Instance InstanceFromJson(std::string_view text);
Instance ReadInstance(const std::filesystem::path& path);
void WriteInstance(const Instance& instance, const std::filesystem::path& path);

}  // namespace dpdp

#endif  // DPDP_INSTANCE_HPP_
