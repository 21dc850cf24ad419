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


#include "trajcert/certificate_io.hpp"

#include <memory>

#include "trajcert/error.hpp"
#include "trajcert/trajectory_io.hpp"

namespace trajcert {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> out;
  for (auto k : v) out.push_back(k + 1);
  return out;
}

template <typename T>
T field(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key)) throw UsageError(source + ": missing field " + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(source + ": field " + key + ": " + e.what());
  }
}

}  // namespace

ojson certificate_to_json(const CertificateRecord& rec) {
  const std::size_t N = rec.trajectories.size();
  if (rec.p.size() != 2 * N + 1) throw UsageError("coefficient count does not match trajectories");
  ojson j;
  j["format"] = "trajcert-certificate-1";
  j["mode"] = to_string(rec.mode);
  j["alpha"] = rec.alpha;
  j["delta_u"] = rec.delta_u;
  j["gamma"] = rec.gamma;
  ojson co;
  co["a"] = rec.p[0];
  co["b"] = std::vector<double>(rec.p.begin() + 1, rec.p.begin() + 1 + static_cast<long>(N));
  co["c"] = std::vector<double>(rec.p.begin() + 1 + static_cast<long>(N), rec.p.end());
  j["coefficients"] = co;
  j["system"] = system_to_json(rec.system);
  if (rec.lipschitz) {
    j["lipschitz"] = {{"L_x", rec.lipschitz->L_x}, {"L_w", rec.lipschitz->L_w},
                      {"D_w", rec.lipschitz->D_w}};
  }
  ojson trajs = ojson::array();
  for (const auto& t : rec.trajectories) {
    ojson e;
    e["label"] = t.label;
    e["file"] = t.file;
    e["sha256"] = t.sha256;
    if (t.epsilon) e["epsilon"] = *t.epsilon;
    if (!t.policy.empty()) e["policy"] = t.policy;
    trajs.push_back(e);
  }
  j["trajectories"] = trajs;
  if (!rec.policies.empty()) {
    ojson ps = ojson::array();
    for (const auto& p : rec.policies) ps.push_back(policy_to_json(p));
    j["policies"] = ps;
  }
  j["partition"] = {{"breaks", rec.breaks}};
  if (rec.pattern) {
    j["pattern"] = {{"Kp", one_based(rec.pattern->Kp)}, {"Kq", one_based(rec.pattern->Kq)}};
  }
  j["solver"] = {{"loss", to_string(rec.loss)},
                 {"objective", rec.objective},
                 {"cap_active", rec.cap_active}};
  return j;
}

CertificateRecord certificate_from_json(const json& j, const std::string& source) {
  if (!j.is_object() || j.value("format", "") != "trajcert-certificate-1") {
    throw UsageError(source + ": not a trajcert certificate");
  }
  CertificateRecord r;
  const auto mode = field<std::string>(j, "mode", source);
  if (mode != "robust" && mode != "controlled") throw UsageError(source + ": bad mode " + mode);
  r.mode = mode == "robust" ? CertMode::Robust : CertMode::Controlled;
  r.alpha = field<double>(j, "alpha", source);
  r.delta_u = field<double>(j, "delta_u", source);
  r.gamma = field<double>(j, "gamma", source);
  const json co = field<json>(j, "coefficients", source);
  const auto b = field<std::vector<double>>(co, "b", source);
  const auto c = field<std::vector<double>>(co, "c", source);
  if (b.size() != c.size()) throw UsageError(source + ": b and c lengths differ");
  r.p.push_back(field<double>(co, "a", source));
  r.p.insert(r.p.end(), b.begin(), b.end());
  r.p.insert(r.p.end(), c.begin(), c.end());
  r.system = system_from_json(field<json>(j, "system", source), source);
  if (j.contains("lipschitz")) {
    const json l = j["lipschitz"];
    r.lipschitz = LipschitzBounds{field<double>(l, "L_x", source), field<double>(l, "L_w", source),
                                  field<double>(l, "D_w", source)};
  }
  for (const auto& t : field<json>(j, "trajectories", source)) {
    TrajectoryRef ref;
    ref.label = field<std::string>(t, "label", source);
    ref.file = field<std::string>(t, "file", source);
    ref.sha256 = field<std::string>(t, "sha256", source);
    if (t.contains("epsilon")) ref.epsilon = field<double>(t, "epsilon", source);
    if (t.contains("policy")) ref.policy = field<std::string>(t, "policy", source);
    r.trajectories.push_back(ref);
  }
  if (r.trajectories.size() != b.size()) throw UsageError(source + ": one b, c pair per trajectory");
  if (j.contains("policies")) {
    const json& ps = j["policies"];
    for (std::size_t i = 0; i < ps.size(); ++i) {
      r.policies.push_back(policy_from_json(ps[i], source + ": policies[" + std::to_string(i) + "]"));
    }
  }
  r.breaks = field<std::vector<std::vector<double>>>(field<json>(j, "partition", source), "breaks",
                                                     source);
  if (j.contains("pattern")) {
    SupportPattern s;
    for (auto k : field<std::vector<std::size_t>>(j["pattern"], "Kp", source)) s.Kp.push_back(k - 1);
    for (auto k : field<std::vector<std::size_t>>(j["pattern"], "Kq", source)) s.Kq.push_back(k - 1);
    r.pattern = s;
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    r.loss = loss_from_string(field<std::string>(s, "loss", source));
    r.objective = field<double>(s, "objective", source);
    r.cap_active = field<std::vector<std::string>>(s, "cap_active", source);
  }
  return r;
}

ojson controller_to_json(const ControllerSet& cset,
                         const std::optional<std::vector<double>>& nominal) {
  const SupportPattern& s = cset.pattern();
  ojson j;
  j["pattern"] = {{"Kp", one_based(s.Kp)}, {"Kq", one_based(s.Kq)}};
  j["cells"] = cset.partition().num_cells();
  j["empty_cells"] = cset.empty_cells();
  std::optional<InputBox> common;
  bool uniform = true;
  ojson boxes = ojson::array();
  for (std::uint64_t k = 0; k < cset.partition().num_cells(); ++k) {
    const InputBox b = cset.cell_box(k);
    if (!common) {
      common = b;
    } else if (b.lower != common->lower || b.upper != common->upper) {
      uniform = false;
    }
    ojson e;
    e["cell"] = k;
    e["lower"] = b.lower;
    e["upper"] = b.upper;
    if (nominal && !b.empty()) e["selected"] = select_control(cset, k, nominal);
    boxes.push_back(e);
  }
  if (uniform && common) j["uniform_box"] = {{"lower", common->lower}, {"upper", common->upper}};
  if (nominal) j["nominal"] = *nominal;
  j["boxes"] = boxes;
  return j;
}

LoadedCertificate load_certificate(const std::string& path, Exec exec) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": invalid JSON: " + e.what());
  }
  CertificateRecord rec = certificate_from_json(j, path);
  const std::string dir = dirname_of(path);
  SystemModel sys = make_system(rec.system);
  const std::size_t N = rec.trajectories.size();
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  std::vector<std::string> labels;
  for (const auto& ref : rec.trajectories) {
    const std::string file = join_path(dir, ref.file);
    const std::string hash = sha256_file(file);
    if (hash != ref.sha256) {
      throw UsageError(path + ": trajectory file " + file + " does not match its recorded hash");
    }
    Trajectory tr = read_trajectory_json(file);
    if (ref.epsilon) {
      TailInfo tail = tr.tail();
      tail.epsilon = ref.epsilon;
      tr.set_tail(tail);
    }
    trajs.push_back(std::make_shared<const Trajectory>(std::move(tr)));
    labels.push_back(ref.label);
  }
  GridPartition part(sys.state_set, rec.breaks);
  const CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  BasisSet bases;
  ConstraintSystem cs;
  std::optional<ControllerSet> cset;
  std::vector<std::shared_ptr<const FeedbackPolicy>> policies;
  if (rec.mode == CertMode::Robust) {
    if (!rec.lipschitz) throw UsageError(path + ": robust certificate without Lipschitz bounds");
    bases = make_robust_bases(trajs, labels, std::vector<LipschitzBounds>(N, *rec.lipschitz),
                              rec.alpha);
    cs = assemble_rspop(bases, part, covers, rec.delta_u, exec);
  } else {
    if (!rec.pattern) throw UsageError(path + ": controlled certificate without a pattern");
    for (const auto& ref : rec.trajectories) {
      const PolicySpec* spec = nullptr;
      for (const auto& p : rec.policies) {
        if (p.id == ref.policy) spec = &p;
      }
      if (!spec) throw UsageError(path + ": unknown policy '" + ref.policy + "'");
      policies.push_back(make_policy(*spec, sys.dim));
    }
    bases = make_controlled_bases(trajs, labels, policies, rec.alpha);
    CSpopAssembly as =
        assemble_cspop(bases, policies, part, covers, rec.delta_u, *rec.pattern, exec);
    if (!as.compat.ok) throw UsageError(path + ": pattern fails the compatibility check");
    cs = std::move(as.cs);
    if (!sys.input_set) throw UsageError(path + ": system has no input set");
    cset.emplace(*rec.pattern, policies, part, *sys.input_set, exec);
    if (!cset->valid()) throw UsageError(path + ": controller set is empty on some cell");
  }
  VerifyReport rep = verify_rows(cs, rec.p);
  if (!rep.ok) {
    throw UsageError(path + ": certificate rejected: " + std::to_string(rep.violations) +
                     " constraint rows fail (worst by " + format_double(rep.worst_violation) +
                     ")" + (rep.bounds_ok ? "" : ", coefficient bounds fail"));
  }
  CertificateTemplate tpl = make_template(bases, rec.p);
  return LoadedCertificate{std::move(rec), std::move(sys), std::move(part), std::move(tpl),
                           std::move(cs),  rep,            std::move(cset)};
}

}  // namespace trajcert
