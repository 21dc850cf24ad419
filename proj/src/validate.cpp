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


#include "trajcert/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "trajcert/error.hpp"
#include "trajcert/rng.hpp"
#include "trajcert/trajectory_io.hpp"

namespace trajcert {

double CheckReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw UsageError("report " + name + " has no metric " + key);
}

void CheckReport::set(const std::string& key, double value) {
  for (auto& [k, v] : metrics) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(key, value);
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << name << ": " << (ok() ? "ok" : "VIOLATED") << "\n";
  os << "  samples " << samples << "\n  violations " << violations << "\n  skipped "
     << skipped << "\n";
  for (const auto& [k, v] : metrics) os << "  " << k << " " << format_double(v) << "\n";
  for (const auto& e : examples) os << "  example: " << e << "\n";
  return os.str();
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["ok"] = ok();
  j["samples"] = samples;
  j["violations"] = violations;
  j["skipped"] = skipped;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metrics) {
    if (std::isfinite(v)) {
      m[k] = v;
    } else {
      m[k] = v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    }
  }
  j["metrics"] = m;
  j["examples"] = examples;
  return j.dump(2) + "\n";
}

namespace {

// Runs body(i) for i in [0, count); exceptions are rethrown in index order.
template <typename Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  auto guarded = [&](std::ptrdiff_t i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt(std::span<const double> x) { return to_string(x); }

struct RunOutcome {
  std::size_t invariance = 0;
  std::size_t initial_positive = 0;
  std::size_t unsafe = 0;
  std::size_t escapes = 0;
  std::size_t empty_boxes = 0;
  std::size_t steps = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> examples;
};

void note(RunOutcome& r, const std::string& s) {
  if (r.examples.size() < kMaxExamples) r.examples.push_back(s);
}

// One closed-loop run. `input` returns the input for state x (empty for
// autonomous systems) or throws RefusalError when no admissible input exists.
template <typename Input>
RunOutcome run_once(const SystemModel& sys, const CertificateTemplate& tpl, std::size_t run,
                    std::size_t horizon, Rng& rng, Input&& input) {
  RunOutcome r;
  std::vector<double> x = sample_region(sys.initial_set, rng);
  auto visit = [&](std::size_t t, bool& was_nonpos, bool first) {
    const double f = certificate_floor(tpl, x);
    r.min_margin = std::min(r.min_margin, -f);
    if (first && f > kRowTolerance) {
      ++r.initial_positive;
      note(r, "run " + std::to_string(run) + ": certificate " + format_double(f) +
                  " > 0 at initial state " + fmt(x));
    } else if (!first && was_nonpos && f > kRowTolerance) {
      ++r.invariance;
      note(r, "run " + std::to_string(run) + " step " + std::to_string(t) +
                  ": certificate turned positive (" + format_double(f) + ") at " + fmt(x));
    }
    was_nonpos = f <= kRowTolerance;
    if (sys.unsafe_set.contains(x)) {
      ++r.unsafe;
      note(r, "run " + std::to_string(run) + " step " + std::to_string(t) +
                  ": unsafe state " + fmt(x));
    }
  };
  bool was_nonpos = true;
  visit(0, was_nonpos, true);
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<double> v;
    try {
      v = input(x, rng);
    } catch (const RefusalError& e) {
      ++r.empty_boxes;
      note(r, "run " + std::to_string(run) + " step " + std::to_string(t) + ": " + e.what());
      break;
    }
    try {
      x = step(sys, x, v);
    } catch (const StateEscapeError& e) {
      ++r.escapes;
      note(r, "run " + std::to_string(run) + " step " + std::to_string(t) + ": " + e.what());
      break;
    }
    ++r.steps;
    visit(t, was_nonpos, false);
  }
  return r;
}

template <typename Input>
CheckReport monte_carlo(const std::string& name, const SystemModel& sys,
                        const CertificateTemplate& tpl, std::size_t n_runs,
                        std::size_t horizon, std::uint64_t seed, Exec exec, Input&& input) {
  if (tpl.size() == 0) throw UsageError("empty certificate");
  std::vector<RunOutcome> runs(n_runs);
  for_each_index(n_runs, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    runs[i] = run_once(sys, tpl, i, horizon, rng, input);
  });
  CheckReport rep;
  rep.name = name;
  rep.samples = n_runs;
  RunOutcome total;
  for (const auto& r : runs) {
    total.invariance += r.invariance;
    total.initial_positive += r.initial_positive;
    total.unsafe += r.unsafe;
    total.escapes += r.escapes;
    total.empty_boxes += r.empty_boxes;
    total.steps += r.steps;
    total.min_margin = std::min(total.min_margin, r.min_margin);
    for (const auto& e : r.examples) {
      if (rep.examples.size() < kMaxExamples) rep.examples.push_back(e);
    }
  }
  rep.violations = total.invariance + total.initial_positive + total.unsafe + total.escapes +
                   total.empty_boxes;
  rep.set("invariance_violations", static_cast<double>(total.invariance));
  rep.set("initial_positive", static_cast<double>(total.initial_positive));
  rep.set("unsafe_hits", static_cast<double>(total.unsafe));
  rep.set("escapes", static_cast<double>(total.escapes));
  rep.set("empty_controller_cells", static_cast<double>(total.empty_boxes));
  rep.set("min_margin", total.min_margin);
  rep.set("fragile_margin", total.min_margin < 1e-8 ? 1.0 : 0.0);
  rep.set("steps", static_cast<double>(total.steps));
  rep.set("horizon", static_cast<double>(horizon));
  return rep;
}

}  // namespace

CheckReport monte_carlo_safety(const SystemModel& sys, const CertificateTemplate& tpl,
                               std::size_t n_runs, std::size_t horizon, std::uint64_t seed,
                               Exec exec) {
  if (sys.input_role == InputRole::Control) {
    throw UsageError("controlled system needs a controller set");
  }
  return monte_carlo("monte_carlo_safety", sys, tpl, n_runs, horizon, seed, exec,
                     [&sys](std::span<const double>, Rng& rng) {
                       if (sys.input_role == InputRole::Disturbance) {
                         return sample_disturbance(*sys.input_set, rng);
                       }
                       return std::vector<double>{};
                     });
}

CheckReport monte_carlo_safety(const SystemModel& sys, const CertificateTemplate& tpl,
                               const ControllerSet& cset,
                               const std::optional<std::vector<double>>& nominal,
                               std::size_t n_runs, std::size_t horizon, std::uint64_t seed,
                               Exec exec) {
  if (sys.input_role != InputRole::Control) throw UsageError("system has no control input");
  return monte_carlo("monte_carlo_safety", sys, tpl, n_runs, horizon, seed, exec,
                     [&cset, &nominal](std::span<const double> x, Rng&) {
                       return select_control(cset, cset.partition().locate_linear(x), nominal);
                     });
}

// ------------------------------------------------------------ dissipation

namespace {

struct SampleOutcome {
  bool skipped = false;
  bool violation = false;
  bool beyond = false;
  bool beyond_violation = false;
  std::string example;
};

CheckReport merge(const std::string& name, const std::vector<SampleOutcome>& out) {
  CheckReport rep;
  rep.name = name;
  rep.samples = out.size();
  std::size_t beyond = 0, beyond_bad = 0;
  for (const auto& o : out) {
    if (o.skipped) ++rep.skipped;
    if (o.violation) ++rep.violations;
    if (o.beyond) ++beyond;
    if (o.beyond_violation) ++beyond_bad;
    if (!o.example.empty() && rep.examples.size() < kMaxExamples) rep.examples.push_back(o.example);
  }
  rep.set("beyond_horizon", static_cast<double>(beyond));
  rep.set("beyond_horizon_violations", static_cast<double>(beyond_bad));
  return rep;
}

// Admissible input for a dissipation sample, or nothing when the closure of
// pi(x) misses the input set.
std::optional<std::vector<double>> admissible_input(const DominanceBasis& basis,
                                                    const SystemModel& sys,
                                                    std::span<const double> x, Rng& rng) {
  if (is_robust(basis.kind())) {
    if (sys.input_role == InputRole::Control) {
      throw UsageError("robust basis on a controlled system");
    }
    if (sys.input_role == InputRole::Disturbance) return sample_disturbance(*sys.input_set, rng);
    return std::vector<double>{};
  }
  if (sys.input_role != InputRole::Control || !sys.input_set) {
    throw UsageError("controlled basis needs a system with a control input set");
  }
  const auto pi = (*basis.policy())(x);
  const auto& U = *sys.input_set;
  std::vector<double> u(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) {
    double lo = U.lower()[j], hi = U.upper()[j];
    if (is_upper(basis.kind())) {
      hi = std::min(hi, pi[j]);
    } else {
      lo = std::max(lo, pi[j]);
    }
    if (lo > hi) return std::nullopt;
    u[j] = rng.uniform(lo, hi);
  }
  return u;
}

}  // namespace

CheckReport check_dissipation(const DominanceBasis& basis, const SystemModel& sys,
                              std::size_t n_samples, std::uint64_t seed, Exec exec) {
  if (basis.truncated() && is_robust(basis.kind())) {
    throw UsageError("truncated robust bases have no dissipation property to check");
  }
  if (basis.trajectory().dim() != sys.dim) throw UsageError("basis/system dimension mismatch");
  std::vector<SampleOutcome> out(n_samples);
  for_each_index(n_samples, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    SampleOutcome& o = out[i];
    const auto x = sample_box(sys.state_set, rng);
    const auto v = admissible_input(basis, sys, x, rng);
    if (!v) {
      o.skipped = true;
      return;
    }
    std::vector<double> y;
    try {
      y = step(sys, x, *v);
    } catch (const StateEscapeError&) {
      o.skipped = true;
      return;
    }
    const DominanceTime t = basis.time(x);
    const double before = dominance_value(t, basis.alpha());
    const double after = basis.value(y);
    const bool bad = after > before;
    const bool at_end = !basis.truncated() && t.kind == DominanceTime::Case::Finite &&
                        t.t == basis.last_index();
    if (at_end) {
      o.beyond = true;
      o.beyond_violation = bad;
    } else if (bad) {
      o.violation = true;
      o.example = "x " + fmt(x) + " value " + format_double(before) + " -> " +
                  format_double(after);
    }
  });
  CheckReport rep = merge(std::string("dissipation/") + to_string(basis.kind()) +
                              (basis.truncated() ? "/truncated" : "/full"),
                          out);
  return rep;
}

// ---------------------------------------------------------- monotonicity

namespace {

bool in_range(double v, double alpha) {
  return v == 0.0 || (v > 0.0 && v <= 1.0) || v == alpha;
}

}  // namespace

CheckReport check_monotonicity(const DominanceBasis& basis, const BoxRegion& domain,
                               std::size_t n_pairs, std::uint64_t seed, Exec exec) {
  const std::size_t n = domain.dim();
  if (basis.trajectory().dim() != n) throw UsageError("basis/domain dimension mismatch");
  const Trajectory& tr = basis.trajectory();
  std::vector<SampleOutcome> out(n_pairs);
  for_each_index(n_pairs, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    std::vector<double> x(n), y(n);
    const bool near = rng.uniform() < 0.5;
    const std::size_t t = rng.below(tr.horizon() + 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = domain.lower()[j], hi = domain.upper()[j];
      if (near) {
        const double r = 0.05 * (hi - lo);
        x[j] = std::clamp(tr.state(t)[j] + rng.uniform(-r, r), lo, hi);
      } else {
        x[j] = rng.uniform(lo, hi);
      }
      const double pick = rng.uniform();
      y[j] = pick < 0.25 ? x[j] : std::min(hi, x[j] + rng.uniform() * (near ? 0.1 * (hi - lo) : hi - x[j]));
    }
    const double vx = basis.value(x), vy = basis.value(y);
    SampleOutcome& o = out[i];
    const bool ordered_ok = is_upper(basis.kind()) ? vx <= vy : vx >= vy;
    if (!ordered_ok || !in_range(vx, basis.alpha()) || !in_range(vy, basis.alpha())) {
      o.violation = true;
      o.example = "x " + fmt(x) + " -> " + format_double(vx) + ", y " + fmt(y) + " -> " +
                  format_double(vy);
    }
  });
  CheckReport rep = merge(std::string("monotonicity/") + to_string(basis.kind()) +
                              (basis.truncated() ? "/truncated" : "/full"),
                          out);
  rep.metrics.clear();
  return rep;
}

// ------------------------------------------------------ trajectory comparison

CheckReport check_trajectory_comparison(const SystemModel& sys, const LipschitzBounds& lips,
                                        std::size_t n_pairs, std::size_t horizon,
                                        std::uint64_t seed, Exec exec) {
  lips.validate();
  if (sys.input_role != InputRole::Disturbance) throw UsageError("system has no disturbance");
  if (horizon == 0) throw UsageError("horizon must be >= 1");
  const InflationSchedule infl = lambda_schedule(lips, horizon);
  struct PairOutcome {
    bool skipped = false;
    std::size_t exceed = 0;
    double ratio_t1 = 0.0;
    std::string example;
  };
  std::vector<PairOutcome> out(n_pairs);
  for_each_index(n_pairs, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    const StateVector x0(sample_region(sys.initial_set, rng));
    PairOutcome& o = out[i];
    std::optional<Trajectory> a, b;
    try {
      a.emplace(simulate(sys, x0, SampledDisturbance{}, horizon,
                         derive_seed(seed, 2 * i, kValidationSalt ^ 0xa)));
      b.emplace(simulate(sys, x0, SampledDisturbance{}, horizon,
                         derive_seed(seed, 2 * i + 1, kValidationSalt ^ 0xa)));
    } catch (const StateEscapeError&) {
      o.skipped = true;
      return;
    }
    for (std::size_t t = 1; t <= horizon; ++t) {
      double d = 0.0;
      for (std::size_t j = 0; j < sys.dim; ++j) {
        d = std::max(d, std::abs(a->state(t)[j] - b->state(t)[j]));
      }
      const double lam = infl.before(t);
      // Relative slack absorbs rounding in the two simulations.
      if (d > lam * (1.0 + 1e-12)) {
        ++o.exceed;
        if (o.example.empty()) {
          o.example = "pair " + std::to_string(i) + " step " + std::to_string(t) + ": gap " +
                      format_double(d) + " > " + format_double(lam);
        }
      }
      if (t == 1 && lam > 0.0) o.ratio_t1 = d / lam;
    }
  });
  CheckReport rep;
  rep.name = "trajectory_comparison";
  rep.samples = n_pairs;
  double ratio = 0.0;
  for (const auto& o : out) {
    if (o.skipped) ++rep.skipped;
    rep.violations += o.exceed;
    ratio = std::max(ratio, o.ratio_t1);
    if (!o.example.empty() && rep.examples.size() < kMaxExamples) rep.examples.push_back(o.example);
  }
  rep.set("max_ratio_t1", ratio);
  rep.set("lambda_0", infl.at(0));
  rep.set("horizon", static_cast<double>(horizon));
  return rep;
}

// --------------------------------------------------------------- sandwich

double tail_radius(const Trajectory& traj, std::size_t T) {
  if (T > traj.horizon()) throw UsageError("truncation index beyond the trajectory");
  const auto end = traj.state(T);
  double eps = 0.0;
  for (std::size_t t = T; t <= traj.horizon(); ++t) {
    for (std::size_t j = 0; j < traj.dim(); ++j) {
      eps = std::max(eps, std::abs(traj.state(t)[j] - end[j]));
    }
  }
  return eps;
}

CheckReport check_truncation_sandwich(const Trajectory& traj, const LipschitzBounds& lips,
                                      double eps_T, double alpha, std::size_t truncate_at,
                                      std::size_t n_points, std::uint64_t seed, Exec exec) {
  if (truncate_at > traj.horizon()) throw UsageError("truncation index beyond the trajectory");
  auto full = std::make_shared<const Trajectory>(traj);
  auto prefix = std::make_shared<const Trajectory>(traj.prefix(truncate_at));
  auto spec = [&](BasisKind k, bool truncated) {
    BasisSpec s;
    s.kind = k;
    s.truncated = truncated;
    s.alpha = alpha;
    s.lip = lips;
    if (truncated) s.epsilon = eps_T;
    s.label = "sandwich";
    return s;
  };
  const DominanceBasis P(full, spec(BasisKind::RobustUpper, false));
  const DominanceBasis Q(full, spec(BasisKind::RobustLower, false));
  const DominanceBasis PT(prefix, spec(BasisKind::RobustUpper, true));
  const DominanceBasis QT(prefix, spec(BasisKind::RobustLower, true));
  const std::size_t n = traj.dim();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t <= traj.horizon(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = std::min(lo[j], traj.state(t)[j]);
      hi[j] = std::max(hi[j], traj.state(t)[j]);
    }
  }
  const double corr = 1.0 / (static_cast<double>(truncate_at) + 1.0);
  const double spread = 2.0 * eps_T + 1e-3;
  enum { kPLow, kPUp, kQLow, kQUp, kQPlus, kCount };
  std::vector<std::array<bool, kCount>> flags(n_points);
  std::vector<std::string> ex(n_points);
  for_each_index(n_points, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    std::vector<double> x(n), xp(n);
    const double mode = rng.uniform();
    const std::size_t t = rng.below(traj.horizon() + 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (mode < 0.3) {
        const double pad = 0.1 * (hi[j] - lo[j]) + spread;
        x[j] = rng.uniform(lo[j] - pad, hi[j] + pad);
      } else if (mode < 0.4) {
        x[j] = traj.state(t)[j];
      } else {
        x[j] = traj.state(t)[j] + rng.uniform(-spread, spread);
      }
      xp[j] = x[j] + eps_T;
    }
    const double p = P.value(x), q = Q.value(x);
    auto& f = flags[i];
    f[kPLow] = PT.value(x) - corr > p;
    f[kPUp] = p > PT.compare_value(x);  // P^T at x + eps
    f[kQLow] = QT.value(x) - corr > q;
    f[kQUp] = q > QT.compare_value(x);  // Q^T at x - eps
    f[kQPlus] = q > QT.value(xp);
    if (f[kPLow] || f[kPUp] || f[kQLow] || f[kQUp]) ex[i] = "x " + fmt(x);
  });
  CheckReport rep;
  rep.name = "truncation_sandwich";
  rep.samples = n_points;
  std::array<std::size_t, kCount> counts{};
  for (std::size_t i = 0; i < n_points; ++i) {
    for (int k = 0; k < kCount; ++k) counts[k] += flags[i][k];
    if (!ex[i].empty() && rep.examples.size() < kMaxExamples) rep.examples.push_back(ex[i]);
  }
  rep.violations = counts[kPLow] + counts[kPUp] + counts[kQLow] + counts[kQUp];
  rep.set("p_lower_failures", static_cast<double>(counts[kPLow]));
  rep.set("p_upper_failures", static_cast<double>(counts[kPUp]));
  rep.set("q_lower_failures", static_cast<double>(counts[kQLow]));
  rep.set("q_upper_failures", static_cast<double>(counts[kQUp]));
  rep.set("q_plus_eps_failures", static_cast<double>(counts[kQPlus]));
  rep.set("epsilon", eps_T);
  rep.set("truncate_at", static_cast<double>(truncate_at));
  return rep;
}

// ---------------------------------------------------------- sublevel sets

CheckReport check_sublevel_invariance(const DominanceBasis& basis, const SystemModel& sys,
                                      double level, std::size_t n_starts, std::size_t steps,
                                      std::uint64_t seed, Exec exec) {
  if (basis.truncated()) throw UsageError("sublevel invariance is checked on full bases");
  if (!(level > 0.0)) throw UsageError("level must be > 0");
  const Trajectory& tr = basis.trajectory();
  const std::size_t last = basis.last_index();
  // 1/(t+1) <= level  <=>  t >= 1/level - 1.
  std::size_t t_min = 0;
  while (1.0 / (static_cast<double>(t_min) + 1.0) > level) ++t_min;
  if (t_min > last) throw UsageError("sublevel set is empty on the stored data");
  const bool upper = is_upper(basis.kind());
  struct PathOutcome {
    bool skipped = false;
    bool violation = false;
    bool stopped = false;
    std::size_t steps = 0;
    std::string example;
  };
  std::vector<PathOutcome> out(n_starts);
  const BoxRegion& X = sys.state_set;
  for_each_index(n_starts, exec, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, kValidationSalt));
    PathOutcome& o = out[i];
    const std::size_t t0 = t_min + rng.below(last - t_min + 1);
    std::vector<double> x(sys.dim);
    for (std::size_t j = 0; j < sys.dim; ++j) {
      const double lo = X.lower()[j], hi = X.upper()[j];
      const double off = rng.uniform(0.0, 0.05 * (hi - lo));
      x[j] = std::clamp(upper ? tr.state(t0)[j] - off : tr.state(t0)[j] + off, lo, hi);
    }
    if (basis.value(x) > level) {
      o.skipped = true;
      return;
    }
    for (std::size_t k = 0; k < steps; ++k) {
      const DominanceTime t = basis.time(x);
      if (t.kind == DominanceTime::Case::Finite && t.t == last) {
        o.stopped = true;
        return;
      }
      std::vector<double> v;
      if (is_robust(basis.kind())) {
        if (sys.input_role == InputRole::Disturbance) v = sample_disturbance(*sys.input_set, rng);
      } else {
        v = (*basis.policy())(x);
      }
      try {
        x = step(sys, x, v);
      } catch (const StateEscapeError&) {
        o.skipped = true;
        return;
      }
      ++o.steps;
      const double val = basis.value(x);
      if (val > level) {
        o.violation = true;
        o.example = "start " + std::to_string(i) + " step " + std::to_string(k + 1) +
                    ": value " + format_double(val) + " > " + format_double(level);
        return;
      }
    }
  });
  CheckReport rep;
  rep.name = std::string("sublevel_invariance/") + to_string(basis.kind());
  rep.samples = n_starts;
  std::size_t stopped = 0, total_steps = 0;
  for (const auto& o : out) {
    if (o.skipped) ++rep.skipped;
    if (o.violation) ++rep.violations;
    if (o.stopped) ++stopped;
    total_steps += o.steps;
    if (!o.example.empty() && rep.examples.size() < kMaxExamples) rep.examples.push_back(o.example);
  }
  rep.set("level", level);
  rep.set("stopped_at_last_index", static_cast<double>(stopped));
  rep.set("steps", static_cast<double>(total_steps));
  return rep;
}

}  // namespace trajcert
