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

// Trajectory files (JSON and CSV) and content hashing.

#ifndef TRAJCERT_TRAJECTORY_IO_HPP_
#define TRAJCERT_TRAJECTORY_IO_HPP_

#include <string>

#include "json.hpp"
#include "trajcert/systems.hpp"

namespace trajcert {

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

void write_trajectory_json(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_json(const std::string& path);

// One row per time step: x1..xn then u1..uv; the final row leaves the input
// columns empty. Numbers use the shortest round-trip form.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

std::string read_file(const std::string& path);
// Writes atomically enough for our purposes: truncate then write.
void write_file(const std::string& path, const std::string& contents);

// Shortest round-trip formatting used by every text output.
std::string format_double(double v);

}  // namespace trajcert

#endif  // TRAJCERT_TRAJECTORY_IO_HPP_
