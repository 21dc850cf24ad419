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


#include "trajcert/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trajcert/error.hpp"
#include "trajcert/trajectory_io.hpp"

namespace trajcert {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw UsageError(source_.empty() ? path + ": " + msg : source_ + ": " + path + ": " + msg);
  }

  void only(const json& j, const std::string& path, std::set<std::string> keys) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
      if (!keys.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  double positive(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (!(v > 0.0)) fail(path, "expected a positive number");
    return v;
  }

  std::uint64_t count(const json& j, const std::string& path) const {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      fail(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
  }

  std::string text(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<std::size_t> indices(const json& j, const std::string& path, std::size_t N) const {
    if (!j.is_array()) fail(path, "expected an array of 1-based trajectory indices");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto k = count(j[i], path + "[" + std::to_string(i) + "]");
      if (k < 1 || k > N) fail(path, "index " + std::to_string(k) + " out of range 1.." + std::to_string(N));
      out.push_back(static_cast<std::size_t>(k - 1));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::string source_;
};

}  // namespace

// ------------------------------------------------------------------ systems

SystemModel make_system(const SystemSpec& spec) {
  if (spec.name == "lotka_volterra") return make_lotka_volterra(spec.tau);
  if (spec.name == "traffic") return make_traffic(spec.tau, StateVector(spec.x_max));
  if (spec.name == "contractive_linear") return make_contractive_linear(spec.dim);
  throw UsageError("unknown system '" + spec.name +
                   "' (lotka_volterra, traffic, contractive_linear)");
}

nlohmann::ordered_json system_to_json(const SystemSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  if (spec.name == "contractive_linear") {
    j["dim"] = spec.dim;
  } else {
    j["tau"] = spec.tau;
  }
  if (spec.name == "traffic") j["x_max"] = spec.x_max;
  return j;
}

SystemSpec system_from_json(const json& j, const std::string& source) {
  Reader r(source);
  r.only(j, "system", {"name", "tau", "x_max", "dim"});
  SystemSpec s;
  if (!j.contains("name")) r.fail("system.name", "missing");
  s.name = r.text(j["name"], "system.name");
  if (s.name == "lotka_volterra" || s.name == "traffic") {
    if (!j.contains("tau")) r.fail("system.tau", "missing");
    s.tau = r.positive(j["tau"], "system.tau");
  }
  if (s.name == "traffic") {
    s.x_max = j.contains("x_max") ? r.numbers(j["x_max"], "system.x_max")
                                  : std::vector<double>{10.0, 10.0};
  }
  if (j.contains("dim")) s.dim = static_cast<std::size_t>(r.count(j["dim"], "system.dim"));
  try {
    (void)make_system(s);
  } catch (const UsageError& e) {
    r.fail("system", e.what());
  }
  return s;
}

// ----------------------------------------------------------------- policies

std::shared_ptr<const FeedbackPolicy> make_policy(const PolicySpec& spec, std::size_t state_dim) {
  if (spec.gain.empty()) {
    return std::make_shared<const FeedbackPolicy>(FeedbackPolicy::Constant(spec.id, spec.constant));
  }
  return std::make_shared<const FeedbackPolicy>(
      FeedbackPolicy::Affine(spec.id, state_dim, spec.gain, spec.offset));
}

nlohmann::ordered_json policy_to_json(const PolicySpec& spec) {
  nlohmann::ordered_json j;
  j["id"] = spec.id;
  if (spec.gain.empty()) {
    j["constant"] = spec.constant;
  } else {
    j["gain"] = spec.gain;
    j["offset"] = spec.offset;
  }
  return j;
}

PolicySpec policy_from_json(const json& j, const std::string& path) {
  Reader r("");
  r.only(j, path, {"id", "constant", "gain", "offset"});
  PolicySpec p;
  if (!j.contains("id")) r.fail(path + ".id", "missing");
  p.id = r.text(j["id"], path + ".id");
  const bool constant = j.contains("constant");
  const bool affine = j.contains("gain") || j.contains("offset");
  if (constant == affine) r.fail(path, "give either constant or gain and offset");
  if (constant) {
    p.constant = r.numbers(j["constant"], path + ".constant");
    if (p.constant.empty()) r.fail(path + ".constant", "empty");
  } else {
    if (!j.contains("gain") || !j.contains("offset")) r.fail(path, "affine policy needs gain and offset");
    p.gain = r.numbers(j["gain"], path + ".gain");
    p.offset = r.numbers(j["offset"], path + ".offset");
  }
  return p;
}

GridPartition make_partition(const PartitionSpec& spec, const BoxRegion& domain) {
  return spec.aligned ? build_aligned_partition(domain, spec.width, spec.anchor)
                      : build_partition(domain, spec.width);
}

// ------------------------------------------------------------------- config

const PolicySpec& Config::policy(const std::string& id) const {
  for (const auto& p : policies) {
    if (p.id == id) return p;
  }
  throw UsageError(source + ": unknown policy '" + id + "'");
}

std::string join_path(const std::string& dir, const std::string& file) {
  if (file.empty() || file.front() == '/' || dir.empty()) return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

std::string dirname_of(const std::string& path) {
  const auto pos = path.find_last_of('/');
  if (pos == std::string::npos) return "";
  return pos == 0 ? "/" : path.substr(0, pos);
}

std::string Config::output_path() const { return join_path(base_dir, output_dir); }

std::string Config::trajectory_path(std::size_t k) const {
  return join_path(output_path(), trajectories.at(k).file);
}

Config parse_config(const json& j, const std::string& source, const std::string& base_dir) {
  Reader r(source);
  r.only(j, "", {"system", "trajectories", "policies", "lipschitz", "partition", "settings",
                 "pattern", "validation", "nominal", "seed", "output_dir"});
  Config c;
  c.source = source;
  c.base_dir = base_dir;
  if (!j.contains("system")) r.fail("system", "missing");
  c.system = system_from_json(j["system"], source);
  const SystemModel sys = make_system(c.system);

  if (j.contains("policies")) {
    const json& ps = j["policies"];
    if (!ps.is_array()) r.fail("policies", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string path = "policies[" + std::to_string(i) + "]";
      try {
        c.policies.push_back(policy_from_json(ps[i], path));
      } catch (const UsageError& e) {
        throw UsageError(source + ": " + e.what());
      }
      const auto& p = c.policies.back();
      const std::size_t m = p.gain.empty() ? p.constant.size() : p.offset.size();
      if (m != sys.input_dim) r.fail(path, "input dimension must be " + std::to_string(sys.input_dim));
      if (!p.gain.empty() && p.gain.size() != m * sys.dim) r.fail(path + ".gain", "wrong size");
      for (std::size_t q = 0; q + 1 < c.policies.size(); ++q) {
        if (c.policies[q].id == p.id) r.fail(path + ".id", "duplicate id");
      }
    }
  }

  if (!j.contains("trajectories")) r.fail("trajectories", "missing");
  const json& ts = j["trajectories"];
  if (!ts.is_array() || ts.empty()) r.fail("trajectories", "expected a nonempty array");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const std::string path = "trajectories[" + std::to_string(k) + "]";
    const json& t = ts[k];
    r.only(t, path, {"label", "x0", "horizon", "policy", "constant", "file", "epsilon"});
    TrajectorySpec s;
    s.label = t.contains("label") ? r.text(t["label"], path + ".label") : std::to_string(k + 1);
    if (!t.contains("x0")) r.fail(path + ".x0", "missing");
    s.x0 = r.numbers(t["x0"], path + ".x0");
    if (s.x0.size() != sys.dim) r.fail(path + ".x0", "expected " + std::to_string(sys.dim) + " entries");
    if (!t.contains("horizon")) r.fail(path + ".horizon", "missing");
    s.horizon = static_cast<std::size_t>(r.count(t["horizon"], path + ".horizon"));
    if (t.contains("policy")) {
      s.input = InputKind::Policy;
      s.policy = r.text(t["policy"], path + ".policy");
      bool found = false;
      for (const auto& p : c.policies) found = found || p.id == s.policy;
      if (!found) r.fail(path + ".policy", "unknown policy '" + s.policy + "'");
    } else if (t.contains("constant")) {
      s.input = InputKind::Constant;
      s.constant = r.numbers(t["constant"], path + ".constant");
      if (s.constant.size() != sys.input_dim) r.fail(path + ".constant", "wrong input dimension");
    } else if (sys.input_role == InputRole::Disturbance) {
      s.input = InputKind::Disturbance;
    } else if (sys.input_role == InputRole::Control) {
      r.fail(path, "controlled system needs a policy or a constant input");
    }
    s.file = t.contains("file") ? r.text(t["file"], path + ".file")
                                : "traj" + std::to_string(k + 1) + ".json";
    if (t.contains("epsilon")) {
      s.epsilon = r.number(t["epsilon"], path + ".epsilon");
      if (*s.epsilon < 0.0) r.fail(path + ".epsilon", "must be >= 0");
    }
    c.trajectories.push_back(std::move(s));
  }

  if (j.contains("lipschitz")) {
    const json& l = j["lipschitz"];
    r.only(l, "lipschitz", {"L_x", "L_w", "D_w"});
    LipschitzBounds b;
    for (const char* key : {"L_x", "L_w", "D_w"}) {
      if (!l.contains(key)) r.fail(std::string("lipschitz.") + key, "missing");
    }
    b.L_x = r.number(l["L_x"], "lipschitz.L_x");
    b.L_w = r.number(l["L_w"], "lipschitz.L_w");
    b.D_w = r.number(l["D_w"], "lipschitz.D_w");
    try {
      b.validate();
    } catch (const UsageError& e) {
      r.fail("lipschitz", e.what());
    }
    c.lipschitz = b;
  }

  if (j.contains("partition")) {
    const json& p = j["partition"];
    r.only(p, "partition", {"width", "grid", "anchor"});
    PartitionSpec s;
    if (!p.contains("width")) r.fail("partition.width", "missing");
    s.width = r.positive(p["width"], "partition.width");
    if (p.contains("grid")) {
      const std::string g = r.text(p["grid"], "partition.grid");
      if (g != "uniform" && g != "aligned") r.fail("partition.grid", "expected uniform or aligned");
      s.aligned = g == "aligned";
    }
    if (p.contains("anchor")) s.anchor = r.number(p["anchor"], "partition.anchor");
    c.partition = s;
  }

  if (j.contains("settings")) {
    const json& s = j["settings"];
    r.only(s, "settings", {"alpha", "delta_u", "gamma", "tail_window", "coefficient_cap", "loss",
                           "pattern_cap"});
    Settings& st = c.settings;
    if (s.contains("alpha")) st.alpha = r.number(s["alpha"], "settings.alpha");
    if (!(st.alpha > 1.0)) r.fail("settings.alpha", "must be > 1");
    if (s.contains("delta_u")) st.delta_u = r.positive(s["delta_u"], "settings.delta_u");
    if (s.contains("gamma")) st.gamma = r.positive(s["gamma"], "settings.gamma");
    if (s.contains("tail_window")) {
      st.tail_window = static_cast<std::size_t>(r.count(s["tail_window"], "settings.tail_window"));
    }
    if (s.contains("coefficient_cap")) {
      st.coefficient_cap = r.positive(s["coefficient_cap"], "settings.coefficient_cap");
    }
    if (s.contains("loss")) {
      try {
        st.loss = loss_from_string(r.text(s["loss"], "settings.loss"));
      } catch (const UsageError& e) {
        r.fail("settings.loss", e.what());
      }
    }
    if (s.contains("pattern_cap")) {
      st.pattern_cap = static_cast<std::size_t>(r.count(s["pattern_cap"], "settings.pattern_cap"));
    }
  }

  if (j.contains("pattern")) {
    const json& p = j["pattern"];
    r.only(p, "pattern", {"Kp", "Kq"});
    SupportPattern s;
    const std::size_t N = c.trajectories.size();
    if (p.contains("Kp")) s.Kp = r.indices(p["Kp"], "pattern.Kp", N);
    if (p.contains("Kq")) s.Kq = r.indices(p["Kq"], "pattern.Kq", N);
    c.pattern = s;
  }

  if (j.contains("validation")) {
    const json& v = j["validation"];
    r.only(v, "validation", {"runs", "horizon"});
    if (v.contains("runs")) c.validation.runs = static_cast<std::size_t>(r.count(v["runs"], "validation.runs"));
    if (v.contains("horizon")) {
      c.validation.horizon = static_cast<std::size_t>(r.count(v["horizon"], "validation.horizon"));
    }
  }

  if (j.contains("nominal")) {
    c.nominal = r.numbers(j["nominal"], "nominal");
    if (c.nominal->size() != sys.input_dim) r.fail("nominal", "wrong input dimension");
  }
  if (j.contains("seed")) c.seed = r.count(j["seed"], "seed");
  if (j.contains("output_dir")) c.output_dir = r.text(j["output_dir"], "output_dir");
  return c;
}

Config load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": invalid JSON: " + e.what());
  }
  return parse_config(j, path, dirname_of(path));
}

}  // namespace trajcert
