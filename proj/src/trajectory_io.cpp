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

#include "trajcert/trajectory_io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "trajcert/error.hpp"

namespace trajcert {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw UsageError("write failed for '" + path + "'");
}

json trajectory_to_json(const Trajectory& traj) {
  json j;
  j["dim"] = traj.dim();
  j["horizon"] = traj.horizon();
  json states = json::array();
  for (std::size_t t = 0; t <= traj.horizon(); ++t) {
    auto s = traj.state(t);
    states.push_back(std::vector<double>(s.begin(), s.end()));
  }
  j["states"] = std::move(states);
  if (traj.has_inputs()) {
    json inputs = json::array();
    for (std::size_t t = 0; t < traj.horizon(); ++t) {
      auto u = traj.input(t);
      inputs.push_back(std::vector<double>(u.begin(), u.end()));
    }
    j["inputs"] = std::move(inputs);
    j["input_dim"] = traj.input_dim();
  } else {
    j["inputs"] = nullptr;
  }
  j["policy_id"] = traj.policy_id().empty() ? json(nullptr) : json(traj.policy_id());
  const auto& tail = traj.tail();
  j["tail"] = {{"epsilon", tail.epsilon ? json(*tail.epsilon) : json(nullptr)},
               {"dominating", to_string(tail.dominating)},
               {"upper_dominating", tail.upper_dominating},
               {"lower_dominating", tail.lower_dominating}};
  return j;
}

Trajectory trajectory_from_json(const json& j) {
  try {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const std::size_t horizon = j.at("horizon").get<std::size_t>();
    const auto& st = j.at("states");
    if (st.size() != horizon + 1) {
      throw UsageError("trajectory: states length does not match horizon");
    }
    std::vector<double> flat;
    flat.reserve((horizon + 1) * dim);
    for (const auto& row : st) {
      auto r = row.get<std::vector<double>>();
      if (r.size() != dim) throw UsageError("trajectory: state of wrong dimension");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    std::string policy_id;
    if (j.contains("policy_id") && !j["policy_id"].is_null()) {
      policy_id = j["policy_id"].get<std::string>();
    }
    std::optional<Trajectory> traj;
    if (j.contains("inputs") && !j["inputs"].is_null()) {
      const auto& in = j["inputs"];
      if (in.size() != horizon) {
        throw UsageError("trajectory: inputs length must equal horizon");
      }
      std::size_t v = j.contains("input_dim") ? j["input_dim"].get<std::size_t>()
                      : in.empty()           ? 0
                                             : in.front().size();
      std::vector<double> u;
      for (const auto& row : in) {
        auto r = row.get<std::vector<double>>();
        if (r.size() != v) throw UsageError("trajectory: input of wrong dimension");
        u.insert(u.end(), r.begin(), r.end());
      }
      traj.emplace(dim, std::move(flat), v, std::move(u), policy_id);
    } else {
      traj.emplace(dim, std::move(flat));
    }
    if (j.contains("tail")) {
      const auto& t = j["tail"];
      TailInfo tail;
      if (t.contains("epsilon") && !t["epsilon"].is_null()) {
        tail.epsilon = t["epsilon"].get<double>();
        if (!(*tail.epsilon >= 0.0)) throw UsageError("trajectory: epsilon < 0");
      }
      if (t.contains("dominating")) {
        tail.dominating = dominating_from_string(t["dominating"].get<std::string>());
      }
      tail.upper_dominating = t.value("upper_dominating", false);
      tail.lower_dominating = t.value("lower_dominating", false);
      traj->set_tail(tail);
    }
    return std::move(*traj);
  } catch (const json::exception& e) {
    throw UsageError(std::string("trajectory json: ") + e.what());
  }
}

void write_trajectory_json(const std::string& path, const Trajectory& traj) {
  write_file(path, trajectory_to_json(traj).dump(1) + "\n");
}

Trajectory read_trajectory_json(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("cannot parse '" + path + "': " + e.what());
  }
  return trajectory_from_json(j);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::string out;
  const std::size_t n = traj.dim();
  const std::size_t v = traj.has_inputs() ? traj.input_dim() : 0;
  for (std::size_t j = 0; j < n; ++j) out += (j ? ",x" : "x") + std::to_string(j + 1);
  for (std::size_t j = 0; j < v; ++j) out += ",u" + std::to_string(j + 1);
  out += "\n";
  for (std::size_t t = 0; t <= traj.horizon(); ++t) {
    auto s = traj.state(t);
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ",";
      out += format_double(s[j]);
    }
    for (std::size_t j = 0; j < v; ++j) {
      out += ",";
      if (t < traj.horizon()) out += format_double(traj.input(t)[j]);
    }
    out += "\n";
  }
  write_file(path, out);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty csv '" + path + "'");
  std::size_t n = 0, v = 0;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell[0] == 'x') ++n;
      else if (!cell.empty() && cell[0] == 'u') ++v;
      else throw UsageError("bad csv header in '" + path + "'");
    }
  }
  std::vector<double> states, inputs;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t col = 0;
    std::vector<double> u;
    while (std::getline(ls, cell, ',')) {
      if (col < n) {
        states.push_back(std::strtod(cell.c_str(), nullptr));
      } else if (!cell.empty()) {
        u.push_back(std::strtod(cell.c_str(), nullptr));
      }
      ++col;
    }
    // A trailing empty field is dropped by getline; treat it as missing.
    if (!u.empty()) {
      if (u.size() != v) throw UsageError("csv: partial input row");
      inputs.insert(inputs.end(), u.begin(), u.end());
    }
    ++rows;
  }
  if (rows == 0) throw UsageError("csv has no data rows");
  if (v == 0) return Trajectory(n, std::move(states));
  return Trajectory(n, std::move(states), v, std::move(inputs), "");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

}  // namespace trajcert
