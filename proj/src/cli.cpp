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


#include "trajcert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trajcert/certificate_io.hpp"
#include "trajcert/certify.hpp"
#include "trajcert/config.hpp"
#include "trajcert/error.hpp"
#include "trajcert/parallel.hpp"
#include "trajcert/rng.hpp"
#include "trajcert/solver.hpp"
#include "trajcert/trajectory_io.hpp"
#include "trajcert/validate.hpp"

namespace trajcert {

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string lp_dump;
  bool milp = false;
  std::string out;
  std::string certificate;
  std::size_t resolution = 200;
  std::vector<std::size_t> slice{1, 2};
  std::vector<double> at;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> horizon;
};

struct Session {
  Options opt;
  Config cfg;
  std::string out_dir;
  std::ostream& out;
  std::ostream& err;
};

Config require_config(const Options& o) {
  if (o.config.empty()) throw UsageError("--config is required");
  return load_config(o.config);
}

Session open_session(const Options& o, std::ostream& out, std::ostream& err) {
  Session s{o, require_config(o), "", out, err};
  if (o.seed) s.cfg.seed = *o.seed;
  s.out_dir = o.out.empty() ? s.cfg.output_path() : o.out;
  if (!s.out_dir.empty()) std::filesystem::create_directories(s.out_dir);
  return s;
}

std::string out_file(const Session& s, const std::string& name) { return join_path(s.out_dir, name); }

std::string traj_file(const Session& s, std::size_t k) {
  return join_path(s.out_dir, s.cfg.trajectories[k].file);
}

std::string csv_name(const std::string& json_path) {
  const auto dot = json_path.find_last_of('.');
  const auto slash = json_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return json_path + ".csv";
  return json_path.substr(0, dot) + ".csv";
}

std::vector<std::shared_ptr<const Trajectory>> load_trajectories(const Session& s) {
  std::vector<std::shared_ptr<const Trajectory>> out;
  for (std::size_t k = 0; k < s.cfg.trajectories.size(); ++k) {
    const std::string path = traj_file(s, k);
    if (!std::filesystem::exists(path)) {
      throw UsageError("trajectory file " + path + " not found; run `trajcert simulate` first");
    }
    Trajectory tr = read_trajectory_json(path);
    if (const auto& e = s.cfg.trajectories[k].epsilon) {
      TailInfo tail = tr.tail();
      tail.epsilon = *e;
      tr.set_tail(tail);
    }
    out.push_back(std::make_shared<const Trajectory>(std::move(tr)));
  }
  return out;
}

std::vector<std::string> labels_of(const Config& c) {
  std::vector<std::string> out;
  for (const auto& t : c.trajectories) out.push_back(t.label);
  return out;
}

std::size_t validation_horizon(const Session& s,
                               const std::vector<std::shared_ptr<const Trajectory>>& trajs) {
  if (s.opt.horizon) return *s.opt.horizon;
  if (s.cfg.validation.horizon > 0) return s.cfg.validation.horizon;
  std::size_t h = 0;
  for (const auto& t : trajs) h = std::max(h, t->horizon());
  return h;
}

std::size_t validation_runs(const Session& s) {
  return s.opt.runs ? *s.opt.runs : s.cfg.validation.runs;
}

SolverOptions solver_options(const Settings& st) {
  SolverOptions o;
  o.coefficient_cap = st.coefficient_cap;
  o.gamma = st.gamma;
  o.pattern_cap = st.pattern_cap;
  return o;
}

const GridPartition partition_of(const Config& c, const SystemModel& sys) {
  if (!c.partition) throw UsageError(c.source + ": partition: missing");
  return make_partition(*c.partition, sys.state_set);
}

std::string row_label(const ConstraintSystem& cs, std::size_t i) {
  const auto& r = cs.rows[i];
  const char* kind = r.kind == RowKind::Initial ? "initial" : r.kind == RowKind::Unsafe ? "unsafe" : "sign";
  std::string s = "row " + std::to_string(i) + " (" + kind;
  if (r.kind != RowKind::Sign) s += " cell " + std::to_string(r.cell);
  return s + ")";
}

ojson solution_json(const ConstraintSystem& cs, const CertSolution& sol) {
  ojson j;
  j["status"] = to_string(sol.status);
  j["iterations"] = sol.iterations;
  if (sol.status == LpStatus::Optimal) {
    j["objective"] = sol.objective;
    j["coefficients"] = sol.p;
    j["cap_active"] = sol.cap_active;
    j["rows_verified"] = sol.verify.rows_checked;
    j["min_unsafe_value"] = sol.verify.min_unsafe_value;
  } else {
    j["infeasibility"] = sol.infeasibility;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < sol.violated_rows.size() && i < 50; ++i) {
      rows.push_back(row_label(cs, sol.violated_rows[i]));
    }
    j["most_violated_rows"] = rows;
    j["most_violated_count"] = sol.violated_rows.size();
  }
  if (!sol.note.empty()) j["note"] = sol.note;
  return j;
}

void write_report(const Session& s, const std::string& stem, const ojson& j, const std::string& text) {
  write_file(out_file(s, stem + ".json"), j.dump(2) + "\n");
  write_file(out_file(s, stem + ".txt"), text);
}

std::string coeff_text(const std::vector<std::string>& names, const std::vector<double>& p) {
  std::string s;
  for (std::size_t v = 0; v < p.size(); ++v) {
    s += "  " + names[v] + " = " + format_double(p[v]) + "\n";
  }
  return s;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  Session s = open_session(o, out, err);
  const SystemModel sys = make_system(s.cfg.system);
  for (std::size_t k = 0; k < s.cfg.trajectories.size(); ++k) {
    const TrajectorySpec& t = s.cfg.trajectories[k];
    InputSource src = NoInput{};
    switch (t.input) {
      case InputKind::None:
        break;
      case InputKind::Disturbance:
        src = SampledDisturbance{};
        break;
      case InputKind::Constant:
        src = ConstantInput{t.constant};
        break;
      case InputKind::Policy:
        src = PolicyInput{make_policy(s.cfg.policy(t.policy), sys.dim)};
        break;
    }
    Trajectory tr = [&] {
      try {
        return simulate(sys, StateVector(t.x0), src, t.horizon,
                        derive_seed(s.cfg.seed, k, kDataSalt));
      } catch (const StateEscapeError& e) {
        throw UsageError("trajectory " + t.label + ": " + e.what());
      }
    }();
    TailInfo tail = estimate_compact_tail(tr, s.cfg.settings.tail_window);
    if (t.epsilon) tail.epsilon = *t.epsilon;
    tr.set_tail(tail);
    const std::string path = traj_file(s, k);
    write_trajectory_json(path, tr);
    write_trajectory_csv(csv_name(path), tr);
    out << "trajectory " << t.label << ": horizon " << tr.horizon() << ", final state "
        << to_string(tr.state(tr.horizon())) << ", tail epsilon "
        << format_double(*tail.epsilon) << ", tail " << to_string(tail.dominating) << " -> "
        << path << "\n";
  }
  return kExitOk;
}

// -------------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  Session s = open_session(o, out, err);
  const Config& c = s.cfg;
  if (!c.lipschitz) throw UsageError(c.source + ": lipschitz: missing (verify needs Lipschitz bounds)");
  const SystemModel sys = make_system(c.system);
  if (sys.input_role == InputRole::Control) {
    throw UsageError("system " + sys.name + " has a control input; use synthesize");
  }
  const GridPartition part = partition_of(c, sys);
  const auto trajs = load_trajectories(s);
  const std::size_t N = trajs.size();
  BasisSet bases;
  try {
    bases = make_robust_bases(trajs, labels_of(c),
                              std::vector<LipschitzBounds>(N, *c.lipschitz), c.settings.alpha);
  } catch (const RefusalError& e) {
    out << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  }
  const CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  const ConstraintSystem cs = assemble_rspop(bases, part, covers, c.settings.delta_u);
  out << "grid " << part.num_cells() << " cells; rows: " << cs.count(RowKind::Initial)
      << " initial, " << cs.count(RowKind::Unsafe) << " unsafe, " << cs.count(RowKind::Sign)
      << " sign; " << cs.n_vars() << " variables\n";
  const SolverOptions sopt = solver_options(c.settings);
  // The sparsity loss only has meaning for pattern search; one LP uses L1.
  const LossSpec loss{c.settings.loss == LossKind::SparsitySupportSize ? LossKind::L1
                                                                        : c.settings.loss};
  if (!o.lp_dump.empty()) write_file(o.lp_dump, to_lp_format(certificate_program(cs, loss, sopt)));

  ojson report;
  report["command"] = "verify";
  report["rows"] = {{"initial", cs.count(RowKind::Initial)},
                    {"unsafe", cs.count(RowKind::Unsafe)},
                    {"sign", cs.count(RowKind::Sign)}};
  CertSolution sol;
  try {
    sol = solve_rspop(cs, loss, sopt);
  } catch (const NumericalError& e) {
    out << "inconclusive: numerical failure: " << e.what() << "\n";
    report["result"] = "inconclusive";
    report["error"] = e.what();
    write_report(s, "verify_report", report, std::string("inconclusive: ") + e.what() + "\n");
    return kExitInconclusive;
  }
  report["solver"] = solution_json(cs, sol);
  if (sol.status != LpStatus::Optimal) {
    std::ostringstream os;
    os << "inconclusive: the program is " << to_string(sol.status)
       << "; no certificate exists for this data and grid (safety is not disproved)\n";
    if (sol.status == LpStatus::Infeasible) {
      os << "minimal uniform relaxation " << format_double(sol.infeasibility) << "; "
         << sol.violated_rows.size() << " most-violated rows:\n";
      for (std::size_t i = 0; i < sol.violated_rows.size() && i < 10; ++i) {
        os << "  " << row_label(cs, sol.violated_rows[i]) << "\n";
      }
    }
    out << os.str();
    report["result"] = "inconclusive";
    write_report(s, "verify_report", report, os.str());
    return kExitInconclusive;
  }

  CertificateRecord rec;
  rec.mode = CertMode::Robust;
  rec.alpha = c.settings.alpha;
  rec.delta_u = c.settings.delta_u;
  rec.gamma = c.settings.gamma;
  rec.p = sol.p;
  rec.system = c.system;
  rec.lipschitz = c.lipschitz;
  for (std::size_t k = 0; k < N; ++k) {
    rec.trajectories.push_back({c.trajectories[k].label, c.trajectories[k].file,
                                sha256_file(traj_file(s, k)), bases.upper[k]->epsilon(), ""});
  }
  rec.breaks = part.all_breaks();
  rec.loss = loss.kind;
  rec.objective = sol.objective;
  rec.cap_active = sol.cap_active;
  const std::string cert_path = out_file(s, "certificate.json");
  write_file(cert_path, certificate_to_json(rec).dump(2) + "\n");

  const CertificateTemplate tpl = make_template(bases, sol.p);
  const CheckReport mc = monte_carlo_safety(sys, tpl, validation_runs(s),
                                            validation_horizon(s, trajs), c.seed);
  report["certificate"] = cert_path;
  report["monte_carlo"] = ojson::parse(mc.to_json());
  report["result"] = mc.ok() ? "safe" : "validation_failed";

  std::ostringstream os;
  os << "certificate found (" << sol.iterations << " simplex iterations, objective "
     << format_double(sol.objective) << "):\n"
     << coeff_text(cs.var_names, sol.p);
  if (!sol.cap_active.empty()) os << "coefficient cap active on " << sol.cap_active.size() << " variables\n";
  os << "all " << sol.verify.rows_checked << " rows re-verified\n" << mc.to_text();
  os << (mc.ok() ? "result: robustly safe (certificate verified)\n"
                 : "result: certificate found but simulation reports violations\n");
  out << os.str();
  write_report(s, "verify_report", report, os.str());
  return mc.ok() ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------- synthesize

int cmd_synthesize(const Options& o, std::ostream& out, std::ostream& err) {
  Session s = open_session(o, out, err);
  const Config& c = s.cfg;
  const SystemModel sys = make_system(c.system);
  if (sys.input_role != InputRole::Control || !sys.input_set) {
    throw UsageError("system " + sys.name + " has no control input; use verify");
  }
  const GridPartition part = partition_of(c, sys);
  const auto trajs = load_trajectories(s);
  const std::size_t N = trajs.size();
  std::vector<std::shared_ptr<const FeedbackPolicy>> policies;
  for (const auto& t : c.trajectories) {
    if (t.input != InputKind::Policy) {
      throw UsageError(c.source + ": trajectory " + t.label + " has no policy (synthesize needs one per trajectory)");
    }
    policies.push_back(make_policy(c.policy(t.policy), sys.dim));
  }
  for (const auto& p : policies) {
    if (!p->monotone()) throw UsageError("policy " + p->id() + " is not monotone");
  }
  const BasisSet bases = make_controlled_bases(trajs, labels_of(c), policies, c.settings.alpha);
  for (const auto& r : bases.refusals) out << "refused: " << r << "\n";
  const CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  auto problem = std::make_shared<const CspopProblem>(
      prepare_cspop(bases, policies, part, covers, c.settings.delta_u));
  const ConstraintSystem& cs_all = problem->cs;
  out << "grid " << part.num_cells() << " cells; rows: " << cs_all.count(RowKind::Initial)
      << " initial, " << cs_all.count(RowKind::Unsafe) << " unsafe, "
      << cs_all.count(RowKind::Sign) << " sign; " << cs_all.n_vars() << " variables\n";

  const SolverOptions sopt = solver_options(c.settings);
  const LossSpec loss{c.settings.loss};
  const BoxRegion input_set = *sys.input_set;
  const PatternCheck check = [&](const SupportPattern& pat,
                                 const CertSolution&) -> std::optional<std::string> {
    const ControllerSet cset(pat, policies, part, input_set, Exec::Serial);
    if (cset.valid()) return std::nullopt;
    return "controller set empty on " + std::to_string(cset.empty_cells()) + " cells (first " +
           std::to_string(*cset.first_empty()) + ")";
  };
  const PatternAssembler assembler = cached_assembler(problem);
  CspopResult res;
  if (c.pattern) {
    res = solve_pattern(assembler, *c.pattern, loss, sopt, check);
  } else if (o.milp) {
    res = solve_cspop_milp(*problem, loss, sopt, check);
  } else {
    res = solve_cspop(assembler, N, loss, sopt, check);
  }

  ojson report;
  report["command"] = "synthesize";
  report["search"] = c.pattern ? "fixed" : (o.milp ? "branch_and_bound" : "enumeration");
  report["refusals"] = bases.refusals;
  ojson attempts = ojson::array();
  for (const auto& a : res.attempts) {
    attempts.push_back({{"pattern", to_string(a.pattern)}, {"outcome", a.outcome}});
  }
  report["attempts"] = attempts;
  std::ostringstream os;
  for (const auto& a : res.attempts) os << "pattern " << to_string(a.pattern) << ": " << a.outcome << "\n";
  if (!res.pattern) {
    os << "inconclusive: no support pattern yields a certificate (safety is not disproved)\n";
    out << os.str();
    report["result"] = "inconclusive";
    write_report(s, "synthesize_report", report, os.str());
    return kExitInconclusive;
  }
  const SupportPattern pattern = *res.pattern;
  const CSpopAssembly win = assembler(pattern);
  if (!o.lp_dump.empty()) {
    std::vector<double> floors(win.cs.n_vars(), 0.0);
    for (auto k : pattern.Kp) floors[1 + k] = sopt.gamma;
    for (auto k : pattern.Kq) floors[1 + N + k] = sopt.gamma;
    write_file(o.lp_dump, to_lp_format(certificate_program(win.cs, loss, sopt, floors)));
  }
  if (win.compat.disagreements > 0) {
    os << "warning: corner conventions disagree on " << win.compat.disagreements << " cells\n";
  }
  const CertSolution& sol = res.solution;
  report["pattern"] = to_string(pattern);
  report["solver"] = solution_json(win.cs, sol);

  CertificateRecord rec;
  rec.mode = CertMode::Controlled;
  rec.alpha = c.settings.alpha;
  rec.delta_u = c.settings.delta_u;
  rec.gamma = c.settings.gamma;
  rec.p = sol.p;
  rec.system = c.system;
  for (std::size_t k = 0; k < N; ++k) {
    rec.trajectories.push_back({c.trajectories[k].label, c.trajectories[k].file,
                                sha256_file(traj_file(s, k)), std::nullopt,
                                c.trajectories[k].policy});
  }
  for (const auto& t : c.trajectories) {
    const PolicySpec& p = c.policy(t.policy);
    if (std::none_of(rec.policies.begin(), rec.policies.end(),
                     [&](const PolicySpec& q) { return q.id == p.id; })) {
      rec.policies.push_back(p);
    }
  }
  rec.breaks = part.all_breaks();
  rec.pattern = pattern;
  rec.loss = loss.kind;
  rec.objective = sol.objective;
  rec.cap_active = sol.cap_active;
  const std::string cert_path = out_file(s, "certificate.json");
  write_file(cert_path, certificate_to_json(rec).dump(2) + "\n");

  const ControllerSet cset(pattern, policies, part, input_set);
  const std::string ctrl_path = out_file(s, "controller.json");
  const ojson ctrl = controller_to_json(cset, c.nominal);
  write_file(ctrl_path, ctrl.dump(2) + "\n");

  const CertificateTemplate tpl = make_template(bases, sol.p);
  const CheckReport mc = monte_carlo_safety(sys, tpl, cset, c.nominal, validation_runs(s),
                                            validation_horizon(s, trajs), c.seed);
  report["certificate"] = cert_path;
  report["controller"] = ctrl_path;
  report["monte_carlo"] = ojson::parse(mc.to_json());
  report["result"] = mc.ok() ? "safe" : "validation_failed";

  os << "certificate found with pattern " << to_string(pattern) << " (objective "
     << format_double(sol.objective) << "):\n"
     << coeff_text(win.cs.var_names, sol.p);
  os << "all " << sol.verify.rows_checked << " rows re-verified\n";
  if (ctrl.contains("uniform_box")) {
    os << "controller box on every cell: lower " << ctrl["uniform_box"]["lower"].dump()
       << ", upper " << ctrl["uniform_box"]["upper"].dump() << "\n";
  } else {
    os << "controller boxes vary by cell; see " << ctrl_path << "\n";
  }
  os << mc.to_text();
  os << (mc.ok() ? "result: safe controller synthesized\n"
                 : "result: certificate found but simulation reports violations\n");
  out << os.str();
  write_report(s, "synthesize_report", report, os.str());
  return mc.ok() ? kExitOk : kExitValidation;
}

// ------------------------------------------------------------------ validate

std::string certificate_path(const Options& o) {
  if (!o.certificate.empty()) return o.certificate;
  if (o.config.empty()) throw UsageError("give --certificate or --config");
  const Config c = load_config(o.config);
  return join_path(o.out.empty() ? c.output_path() : o.out, "certificate.json");
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string path = certificate_path(o);
  const LoadedCertificate cert = load_certificate(path);
  std::optional<Config> cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  std::uint64_t seed = o.seed ? *o.seed : (cfg ? cfg->seed : 0);
  std::size_t runs = o.runs ? *o.runs : (cfg ? cfg->validation.runs : 1000);
  std::size_t horizon = o.horizon ? *o.horizon : (cfg ? cfg->validation.horizon : 0);
  if (horizon == 0) {
    for (std::size_t k = 0; k < cert.tpl.size(); ++k) {
      const auto& b = cert.tpl.bases.upper[k] ? cert.tpl.bases.upper[k] : cert.tpl.bases.lower[k];
      if (b) horizon = std::max(horizon, b->trajectory().horizon());
    }
  }
  std::optional<std::vector<double>> nominal = cfg ? cfg->nominal : std::nullopt;
  std::vector<CheckReport> reports;
  if (cert.controller) {
    reports.push_back(monte_carlo_safety(cert.system, cert.tpl, *cert.controller, nominal, runs,
                                         horizon, seed));
  } else {
    reports.push_back(monte_carlo_safety(cert.system, cert.tpl, runs, horizon, seed));
  }
  for (std::size_t k = 0; k < cert.tpl.size(); ++k) {
    for (const auto& b : {cert.tpl.bases.upper[k], cert.tpl.bases.lower[k]}) {
      if (!b) continue;
      CheckReport r = check_monotonicity(*b, cert.system.state_set, 2000, seed + k);
      r.name += "/" + b->label();
      reports.push_back(std::move(r));
    }
  }
  bool ok = true;
  ojson j;
  j["command"] = "validate";
  j["certificate"] = path;
  j["rows_verified"] = cert.verify.rows_checked;
  ojson arr = ojson::array();
  std::ostringstream os;
  os << "certificate " << path << ": all " << cert.verify.rows_checked << " rows re-verified\n";
  for (const auto& r : reports) {
    ok = ok && r.ok();
    arr.push_back(ojson::parse(r.to_json()));
    os << r.to_text();
  }
  j["checks"] = arr;
  j["result"] = ok ? "ok" : "violations";
  os << (ok ? "result: no violations found\n" : "result: violations found\n");
  out << os.str();
  const std::string dir = o.out.empty() ? dirname_of(path) : o.out;
  if (!dir.empty()) std::filesystem::create_directories(dir);
  write_file(join_path(dir, "validate_report.json"), j.dump(2) + "\n");
  write_file(join_path(dir, "validate_report.txt"), os.str());
  (void)err;
  return ok ? kExitOk : kExitValidation;
}

// ----------------------------------------------------------------- eval-grid

int cmd_eval_grid(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string path = certificate_path(o);
  const LoadedCertificate cert = load_certificate(path);
  const BoxRegion& X = cert.system.state_set;
  const std::size_t n = X.dim();
  if (o.resolution == 0) throw UsageError("--resolution must be >= 1");
  if (o.slice.size() != 2) throw UsageError("--slice takes two 1-based axes");
  const std::size_t ax = o.slice[0], ay = o.slice[1];
  if (ax < 1 || ay < 1 || ax > n || ay > n || ax == ay) {
    throw UsageError("invalid --slice " + std::to_string(ax) + "," + std::to_string(ay) +
                     " for a " + std::to_string(n) + "-dimensional system");
  }
  std::vector<double> base(n);
  if (o.at.empty()) {
    for (std::size_t j = 0; j < n; ++j) base[j] = 0.5 * (X.lower()[j] + X.upper()[j]);
  } else if (o.at.size() == n) {
    base = o.at;
  } else {
    throw UsageError("--at needs " + std::to_string(n) + " coordinates");
  }
  const std::size_t R = o.resolution;
  auto node = [&](std::size_t axis, std::size_t i) {
    const double lo = X.lower()[axis], hi = X.upper()[axis];
    return lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(R);
  };
  std::vector<double> values(R * R);
  const auto count = static_cast<std::ptrdiff_t>(R * R);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    std::vector<double> x = base;
    x[ax - 1] = node(ax - 1, static_cast<std::size_t>(k) / R);
    x[ay - 1] = node(ay - 1, static_cast<std::size_t>(k) % R);
    values[static_cast<std::size_t>(k)] = eval_certificate(cert.tpl, x);
  }
  std::string csv = "x" + std::to_string(ax) + ",x" + std::to_string(ay) + ",value\n";
  for (std::size_t k = 0; k < R * R; ++k) {
    csv += format_double(node(ax - 1, k / R)) + "," + format_double(node(ay - 1, k % R)) + "," +
           format_double(values[k]) + "\n";
  }
  const std::string dest = o.out.empty() ? join_path(dirname_of(path), "grid.csv") : o.out;
  write_file(dest, csv);
  std::size_t nonpos = 0;
  for (double v : values) nonpos += v <= 0.0;
  out << R * R << " nodes written to " << dest << "; " << nonpos
      << " in the 0-sublevel set\n";
  (void)err;
  return kExitOk;
}

// ---------------------------------------------------------------------- info

int cmd_info(const Options& o, std::ostream& out, std::ostream&) {
  out << "trajcert 1.0.0\n";
  out << "worker threads: " << max_threads() << "\n";
  out << "systems: lotka_volterra (tau in [0, 2.2]), traffic (tau in [0, 0.01]), "
         "contractive_linear\n";
  const Settings d;
  out << "defaults: alpha " << format_double(d.alpha) << ", delta_u " << format_double(d.delta_u)
      << ", gamma " << format_double(d.gamma) << ", tail_window " << d.tail_window
      << ", coefficient_cap " << format_double(d.coefficient_cap) << ", loss "
      << to_string(d.loss) << ", pattern_cap " << d.pattern_cap << "\n";
  if (!o.certificate.empty()) {
    const LoadedCertificate cert = load_certificate(o.certificate);
    out << "certificate " << o.certificate << ": " << to_string(cert.record.mode) << ", "
        << cert.record.trajectories.size() << " trajectories, " << cert.verify.rows_checked
        << " rows re-verified\n"
        << coeff_text(cert.rows.var_names, cert.record.p);
    if (cert.record.pattern) out << "pattern " << to_string(*cert.record.pattern) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safety certificates for monotone systems from trajectory data", "trajcert"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::uint64_t seed = 0;
  std::size_t runs = 0, horizon = 0;
  app.add_option("--config", o.config, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--jobs", o.jobs, "Maximum worker threads")->check(CLI::NonNegativeNumber);
  app.add_option("--lp-dump", o.lp_dump, "Write the solved LP in CPLEX LP format");
  app.add_flag("--milp", o.milp, "Branch and bound instead of pattern enumeration");
  app.add_option("--out", o.out, "Output directory (eval-grid: output file)");
  app.add_option("--certificate", o.certificate, "Certificate file");
  app.add_option("--resolution", o.resolution, "Grid nodes per axis");
  app.add_option("--slice", o.slice, "Two 1-based axes to plot")->expected(2)->delimiter(',');
  app.add_option("--at", o.at, "Fixed coordinates for the other axes")->delimiter(',');
  auto* runs_opt = app.add_option("--runs", runs, "Monte-Carlo runs");
  auto* horizon_opt = app.add_option("--horizon", horizon, "Monte-Carlo horizon");
  auto* sim = app.add_subcommand("simulate", "Collect trajectories");
  auto* ver = app.add_subcommand("verify", "Search a robust certificate");
  auto* syn = app.add_subcommand("synthesize", "Search a control certificate and controller");
  auto* val = app.add_subcommand("validate", "Re-verify and simulate a certificate");
  auto* grid = app.add_subcommand("eval-grid", "Export certificate values on a 2-D grid");
  auto* info = app.add_subcommand("info", "Build and default settings");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*seed_opt) o.seed = seed;
  if (*runs_opt) o.runs = runs;
  if (*horizon_opt) o.horizon = horizon;
  if (o.jobs > 0) set_max_threads(o.jobs);
  try {
    if (*sim) return cmd_simulate(o, out, err);
    if (*ver) return cmd_verify(o, out, err);
    if (*syn) return cmd_synthesize(o, out, err);
    if (*val) return cmd_validate(o, out, err);
    if (*grid) return cmd_eval_grid(o, out, err);
    if (*info) return cmd_info(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RefusalError& e) {
    out << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const NumericalError& e) {
    out << "inconclusive: numerical failure: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"trajcert"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace trajcert
