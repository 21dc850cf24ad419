// Copyright 2026 The trajcert Authors.
//
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


// Run configuration: one JSON file naming the system, the trajectories to
// collect, the policies that drive them, the grid, and solver settings.
// Every numeric default lives in Settings.

#ifndef TRAJCERT_CONFIG_HPP_
#define TRAJCERT_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trajcert/certify.hpp"
#include "trajcert/partition.hpp"
#include "trajcert/solver.hpp"
#include "trajcert/systems.hpp"

namespace trajcert {

struct SystemSpec {
  std::string name;  // lotka_volterra | traffic | contractive_linear
  double tau = 0.0;
  std::vector<double> x_max;  // traffic
  std::size_t dim = 1;        // contractive_linear
};

SystemModel make_system(const SystemSpec& spec);
nlohmann::ordered_json system_to_json(const SystemSpec& spec);
SystemSpec system_from_json(const nlohmann::json& j, const std::string& source);

struct PolicySpec {
  std::string id;
  std::vector<double> constant;  // constant policy when gain is empty
  std::vector<double> gain;      // affine: row-major input_dim x state_dim
  std::vector<double> offset;
};

std::shared_ptr<const FeedbackPolicy> make_policy(const PolicySpec& spec, std::size_t state_dim);
nlohmann::ordered_json policy_to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const nlohmann::json& j, const std::string& path);

enum class InputKind { None, Disturbance, Constant, Policy };

struct TrajectorySpec {
  std::string label;
  std::vector<double> x0;
  std::size_t horizon = 0;
  InputKind input = InputKind::None;
  std::vector<double> constant;
  std::string policy;
  std::string file;  // relative to the output directory
  std::optional<double> epsilon;  // overrides the tail estimate
};

struct PartitionSpec {
  double width = 1.0;
  bool aligned = false;
  double anchor = 0.0;
};

GridPartition make_partition(const PartitionSpec& spec, const BoxRegion& domain);

struct Settings {
  double alpha = 2.0;
  double delta_u = 1e-6;
  double gamma = 1e-6;
  std::size_t tail_window = 50;
  double coefficient_cap = 1e3;
  LossKind loss = LossKind::L1;
  std::size_t pattern_cap = 10;
};

struct ValidationSpec {
  std::size_t runs = 1000;
  std::size_t horizon = 0;  // 0: the longest trajectory horizon
};

struct Config {
  std::string source;    // config file path, for messages
  std::string base_dir;  // directory of the config file
  SystemSpec system;
  std::vector<TrajectorySpec> trajectories;
  std::vector<PolicySpec> policies;
  std::optional<LipschitzBounds> lipschitz;
  std::optional<PartitionSpec> partition;
  Settings settings;
  std::optional<SupportPattern> pattern;  // 0-based; 1-based in the file
  ValidationSpec validation;
  std::optional<std::vector<double>> nominal;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  const PolicySpec& policy(const std::string& id) const;
  // output_dir resolved against base_dir.
  std::string output_path() const;
  std::string trajectory_path(std::size_t k) const;
};

// Throws UsageError naming the offending field, e.g.
// "config.json: trajectories[1].x0: expected an array of numbers".
Config parse_config(const nlohmann::json& j, const std::string& source,
                    const std::string& base_dir);
Config load_config(const std::string& path);

std::string join_path(const std::string& dir, const std::string& file);
std::string dirname_of(const std::string& path);

}  // namespace trajcert

#endif  // TRAJCERT_CONFIG_HPP_
