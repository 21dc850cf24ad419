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

#include "trajcert/certify.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "trajcert/error.hpp"

namespace trajcert {

const char* to_string(CertMode m) {
  return m == CertMode::Robust ? "robust" : "controlled";
}

std::string to_string(const SupportPattern& s) {
  auto list = [](const std::vector<std::size_t>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(v[i] + 1);
    }
    return out + "}";
  };
  return "Kp=" + list(s.Kp) + " Kq=" + list(s.Kq);
}

// ------------------------------------------------------------------- bases

BasisSet make_robust_bases(const std::vector<std::shared_ptr<const Trajectory>>& trajs,
                           const std::vector<std::string>& labels,
                           const std::vector<LipschitzBounds>& lips, double alpha) {
  if (trajs.empty()) throw UsageError("need at least one trajectory");
  if (labels.size() != trajs.size() || lips.size() != trajs.size()) {
    throw UsageError("labels/Lipschitz bounds must match the trajectory count");
  }
  BasisSet set;
  set.mode = CertMode::Robust;
  set.labels = labels;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    if (!trajs[k]->tail().epsilon) {
      throw RefusalError("trajectory " + labels[k] +
                         " has no tail bound epsilon; robust bases need one");
    }
    BasisSpec up{BasisKind::RobustUpper, true, alpha, lips[k], std::nullopt, nullptr,
                 labels[k]};
    BasisSpec lo = up;
    lo.kind = BasisKind::RobustLower;
    set.upper.push_back(std::make_shared<DominanceBasis>(trajs[k], up));
    set.lower.push_back(std::make_shared<DominanceBasis>(trajs[k], lo));
  }
  return set;
}

BasisSet make_controlled_bases(
    const std::vector<std::shared_ptr<const Trajectory>>& trajs,
    const std::vector<std::string>& labels,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    double alpha) {
  if (trajs.empty()) throw UsageError("need at least one trajectory");
  if (labels.size() != trajs.size() || policies.size() != trajs.size()) {
    throw UsageError("labels/policies must match the trajectory count");
  }
  BasisSet set;
  set.mode = CertMode::Controlled;
  set.labels = labels;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    for (BasisKind kind : {BasisKind::ControlledUpper, BasisKind::ControlledLower}) {
      BasisSpec spec{kind, true, alpha, std::nullopt, std::nullopt, policies[k],
                     labels[k]};
      BasisPtr ptr;
      try {
        ptr = std::make_shared<DominanceBasis>(trajs[k], spec);
      } catch (const RefusalError& e) {
        set.refusals.push_back(e.what());
      }
      (kind == BasisKind::ControlledUpper ? set.upper : set.lower).push_back(ptr);
    }
  }
  return set;
}

// --------------------------------------------------------------- templates

std::vector<double> CertificateTemplate::coefficients() const {
  std::vector<double> p{a};
  p.insert(p.end(), b.begin(), b.end());
  p.insert(p.end(), c.begin(), c.end());
  return p;
}

void CertificateTemplate::set_coefficients(std::span<const double> p) {
  const std::size_t N = bases.size();
  if (p.size() != 2 * N + 1) throw UsageError("coefficient vector length");
  a = p[0];
  b.assign(p.begin() + 1, p.begin() + 1 + N);
  c.assign(p.begin() + 1 + N, p.end());
}

CertificateTemplate make_template(BasisSet bases, std::span<const double> p) {
  CertificateTemplate tpl;
  tpl.mode = bases.mode;
  tpl.bases = std::move(bases);
  tpl.set_coefficients(p);
  for (std::size_t k = 0; k < tpl.size(); ++k) {
    if (!(tpl.b[k] >= 0.0) || !(tpl.c[k] >= 0.0)) {
      throw UsageError("basis weights must be nonnegative");
    }
    if ((tpl.b[k] != 0.0 && !tpl.bases.upper[k]) ||
        (tpl.c[k] != 0.0 && !tpl.bases.lower[k])) {
      throw RefusalError("nonzero weight on refused basis of trajectory " +
                         tpl.bases.labels[k]);
    }
  }
  return tpl;
}

double eval_inclusion(const CertificateTemplate& tpl, std::span<const double> x_up,
                      std::span<const double> y_low) {
  double v = tpl.a;
  for (std::size_t k = 0; k < tpl.size(); ++k) {
    if (tpl.b[k] != 0.0) v += tpl.b[k] * tpl.bases.upper[k]->value(x_up);
    if (tpl.c[k] != 0.0) v += tpl.c[k] * tpl.bases.lower[k]->value(y_low);
  }
  return v;
}

double eval_certificate(const CertificateTemplate& tpl, std::span<const double> x) {
  return eval_inclusion(tpl, x, x);
}

double certificate_floor(const CertificateTemplate& tpl, std::span<const double> x) {
  double v = eval_certificate(tpl, x);
  if (tpl.mode != CertMode::Robust) return v;
  for (std::size_t k = 0; k < tpl.size(); ++k) {
    const double corr =
        1.0 / (static_cast<double>(tpl.bases.upper[k]->trajectory().horizon()) + 1.0);
    v -= (tpl.b[k] + tpl.c[k]) * corr;
  }
  return v;
}

// -------------------------------------------------------------- assembly

std::size_t ConstraintSystem::count(RowKind k) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [k](const auto& r) { return r.kind == k; }));
}

namespace {

ConstraintSystem empty_system(const BasisSet& bases, double delta_u) {
  ConstraintSystem cs;
  cs.mode = bases.mode;
  cs.N = bases.size();
  cs.delta_u = delta_u;
  cs.var_names.push_back("a");
  for (std::size_t k = 0; k < cs.N; ++k) cs.var_names.push_back("b" + std::to_string(k + 1));
  for (std::size_t k = 0; k < cs.N; ++k) cs.var_names.push_back("c" + std::to_string(k + 1));
  const double inf = std::numeric_limits<double>::infinity();
  cs.var_lower.assign(cs.n_vars(), -inf);
  cs.var_upper.assign(cs.n_vars(), inf);
  for (std::size_t k = 0; k < cs.N; ++k) {
    const BasisPtr& any = bases.upper[k] ? bases.upper[k] : bases.lower[k];
    const Trajectory* tr = any ? &any->trajectory() : nullptr;
    cs.horizons.push_back(tr ? tr->horizon() : 0);
    cs.epsilons.push_back(bases.mode == CertMode::Robust && bases.upper[k]
                              ? bases.upper[k]->epsilon()
                              : 0.0);
  }
  return cs;
}

// Fills rows[offset + i] for cells[i]. Robust rows cancel the truncation shift
// exactly on initial cells; controlled rows have neither shift nor correction.
void fill_rows(const BasisSet& bases, const GridPartition& part,
               const std::vector<std::uint64_t>& cells, RowKind kind,
               double delta_u, std::vector<ConstraintRow>& rows, std::size_t offset,
               Exec exec) {
  const std::size_t N = bases.size();
  const std::size_t n = part.dim();
  const bool robust = bases.mode == CertMode::Robust;
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
  auto body = [&](std::ptrdiff_t i, std::vector<double>& lo, std::vector<double>& hi) {
    part.cell_corners(cells[i], lo, hi);
    ConstraintRow row;
    row.kind = kind;
    row.cell = cells[i];
    row.coef.assign(2 * N + 1, 0.0);
    row.coef[0] = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
      const BasisPtr& up = bases.upper[k];
      const BasisPtr& low = bases.lower[k];
      if (kind == RowKind::Initial) {
        // Upper bases at hi + eps, lower bases at lo - eps; for robust bases
        // the internal shift cancels, so compare hi and lo directly.
        if (up) row.coef[1 + k] = robust ? up->compare_value(hi) : up->value(hi);
        if (low) row.coef[1 + N + k] = robust ? low->compare_value(lo) : low->value(lo);
      } else {
        const BasisPtr& any = up ? up : low;
        const double corr =
            robust && any
                ? 1.0 / (static_cast<double>(any->trajectory().horizon()) + 1.0)
                : 0.0;
        if (up) row.coef[1 + k] = up->value(lo) - corr;
        if (low) row.coef[1 + N + k] = low->value(hi) - corr;
      }
    }
    row.sense = kind == RowKind::Initial ? Sense::Le : Sense::Ge;
    row.rhs = kind == RowKind::Initial ? 0.0 : delta_u;
    rows[offset + i] = std::move(row);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<double> lo(n), hi(n);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t i = 0; i < count; ++i) body(i, lo, hi);
    }
  } else {
    std::vector<double> lo(n), hi(n);
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i, lo, hi);
  }
}

void add_sign_rows(ConstraintSystem& cs) {
  for (std::size_t v = 1; v < cs.n_vars(); ++v) {
    ConstraintRow row;
    row.coef.assign(cs.n_vars(), 0.0);
    row.coef[v] = 1.0;
    row.sense = Sense::Ge;
    row.rhs = 0.0;
    row.kind = RowKind::Sign;
    cs.rows.push_back(std::move(row));
  }
}

ConstraintSystem assemble_common(const BasisSet& bases, const GridPartition& part,
                                 const CoverSets& covers, double delta_u, Exec exec) {
  if (bases.size() == 0) throw UsageError("no bases");
  if (!(delta_u > 0.0)) throw UsageError("delta_u must be > 0");
  ConstraintSystem cs = empty_system(bases, delta_u);
  cs.rows.resize(covers.initial.size() + covers.unsafe.size());
  fill_rows(bases, part, covers.initial, RowKind::Initial, delta_u, cs.rows, 0, exec);
  fill_rows(bases, part, covers.unsafe, RowKind::Unsafe, delta_u, cs.rows,
            covers.initial.size(), exec);
  add_sign_rows(cs);
  return cs;
}

}  // namespace

ConstraintSystem assemble_rspop(const BasisSet& bases, const GridPartition& part,
                                const CoverSets& covers, double delta_u, Exec exec) {
  if (bases.mode != CertMode::Robust) throw UsageError("R-SpOP needs robust bases");
  for (std::size_t k = 0; k < bases.size(); ++k) {
    if (!bases.upper[k] || !bases.lower[k]) {
      throw RefusalError("trajectory " + bases.labels[k] + " lacks a robust basis");
    }
  }
  return assemble_common(bases, part, covers, delta_u, exec);
}

ConstraintSystem assemble_rspop(
    const std::vector<std::shared_ptr<const Trajectory>>& trajs,
    const LipschitzBounds& lips, const GridPartition& part,
    const CoverSets& covers, double alpha, double delta_u) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < trajs.size(); ++k) labels.push_back(std::to_string(k + 1));
  auto bases = make_robust_bases(trajs, labels,
                                 std::vector<LipschitzBounds>(trajs.size(), lips), alpha);
  return assemble_rspop(bases, part, covers, delta_u);
}

// ----------------------------------------------------------- compatibility

namespace {

void eval_policy(const std::shared_ptr<const FeedbackPolicy>& p,
                 std::span<const double> x, std::vector<double>& out) {
  out.resize(p->input_dim());
  p->eval(x, out);
}

// Componentwise max over `ids` of policy(x), or nothing if ids is empty.
bool extreme(const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
             const std::vector<std::size_t>& ids, std::span<const double> x,
             bool take_max, std::vector<double>& acc, std::vector<double>& tmp) {
  if (ids.empty()) return false;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    eval_policy(policies.at(ids[i]), x, tmp);
    if (i == 0) {
      acc = tmp;
    } else {
      for (std::size_t j = 0; j < acc.size(); ++j) {
        acc[j] = take_max ? std::max(acc[j], tmp[j]) : std::min(acc[j], tmp[j]);
      }
    }
  }
  return true;
}

void check_policies(const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
                    const SupportPattern& pattern) {
  for (auto k : pattern.Kp) {
    if (k >= policies.size() || !policies[k]) throw UsageError("pattern index out of range");
  }
  for (auto k : pattern.Kq) {
    if (k >= policies.size() || !policies[k]) throw UsageError("pattern index out of range");
  }
}

}  // namespace

CompatibilityReport check_compatibility(
    const SupportPattern& pattern,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, Exec exec) {
  check_policies(policies, pattern);
  CompatibilityReport rep;
  rep.cells_checked = part.num_cells();
  if (pattern.Kp.empty() || pattern.Kq.empty()) return rep;
  const std::size_t n = part.dim();
  const auto cells = static_cast<std::ptrdiff_t>(part.num_cells());
  // 1 = compatibility fails, 2 = corner conventions disagree.
  std::vector<unsigned char> flags(static_cast<std::size_t>(cells), 0);
  auto body = [&](std::ptrdiff_t k, std::vector<double>& lo, std::vector<double>& hi,
                  std::vector<double>& qmax_lo, std::vector<double>& pmin_hi,
                  std::vector<double>& qmax_hi, std::vector<double>& pmin_lo,
                  std::vector<double>& tmp) {
    part.cell_corners(static_cast<std::uint64_t>(k), lo, hi);
    extreme(policies, pattern.Kq, lo, true, qmax_lo, tmp);
    extreme(policies, pattern.Kp, hi, false, pmin_hi, tmp);
    extreme(policies, pattern.Kq, hi, true, qmax_hi, tmp);
    extreme(policies, pattern.Kp, lo, false, pmin_lo, tmp);
    const bool compat = partial_leq(qmax_lo, pmin_hi);
    const bool box = partial_leq(qmax_hi, pmin_lo);
    unsigned char f = 0;
    if (!compat) f |= 1;
    if (compat != box) f |= 2;
    flags[static_cast<std::size_t>(k)] = f;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<double> lo(n), hi(n), a, b, c, d, tmp;
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < cells; ++k) body(k, lo, hi, a, b, c, d, tmp);
    }
  } else {
    std::vector<double> lo(n), hi(n), a, b, c, d, tmp;
    for (std::ptrdiff_t k = 0; k < cells; ++k) body(k, lo, hi, a, b, c, d, tmp);
  }
  constexpr std::size_t kKeep = 16;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k] & 1) {
      ++rep.failing;
      if (rep.failing_cells.size() < kKeep) rep.failing_cells.push_back(k);
    }
    if (flags[k] & 2) {
      ++rep.disagreements;
      if (rep.disagreement_cells.size() < kKeep) rep.disagreement_cells.push_back(k);
    }
  }
  rep.ok = rep.failing == 0;
  return rep;
}

std::vector<std::vector<bool>> pairwise_compatibility(
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, Exec exec) {
  const std::size_t N = policies.size();
  const std::size_t n = part.dim();
  const auto cells = static_cast<std::ptrdiff_t>(part.num_cells());
  // ok[p * N + q]; AND-reduced across threads, so order cannot matter.
  std::vector<unsigned char> ok(N * N, 1);
  auto run = [&](std::ptrdiff_t begin, std::ptrdiff_t end,
                 std::vector<unsigned char>& local) {
    std::vector<double> lo(n), hi(n);
    std::vector<std::vector<double>> at_lo(N), at_hi(N);
    for (std::ptrdiff_t k = begin; k < end; ++k) {
      part.cell_corners(static_cast<std::uint64_t>(k), lo, hi);
      for (std::size_t i = 0; i < N; ++i) {
        eval_policy(policies[i], lo, at_lo[i]);
        eval_policy(policies[i], hi, at_hi[i]);
      }
      for (std::size_t p = 0; p < N; ++p) {
        for (std::size_t q = 0; q < N; ++q) {
          if (local[p * N + q] && !partial_leq(at_lo[q], at_hi[p])) local[p * N + q] = 0;
        }
      }
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      const std::ptrdiff_t nt = omp_get_num_threads();
      const std::ptrdiff_t id = omp_get_thread_num();
      std::vector<unsigned char> local(N * N, 1);
      run(cells * id / nt, cells * (id + 1) / nt, local);
#pragma omp critical
      for (std::size_t i = 0; i < ok.size(); ++i) ok[i] &= local[i];
    }
  } else {
    run(0, cells, ok);
  }
  std::vector<std::vector<bool>> out(N, std::vector<bool>(N));
  for (std::size_t p = 0; p < N; ++p) {
    for (std::size_t q = 0; q < N; ++q) out[p][q] = ok[p * N + q] != 0;
  }
  return out;
}

CSpopAssembly assemble_cspop(
    const BasisSet& bases,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, const CoverSets& covers, double delta_u,
    const SupportPattern& pattern, Exec exec) {
  if (bases.mode != CertMode::Controlled) throw UsageError("C-SpOP needs controlled bases");
  if (policies.size() != bases.size()) throw UsageError("one policy per trajectory");
  for (auto k : pattern.Kp) {
    if (k >= bases.size()) throw UsageError("pattern index out of range");
    if (!bases.upper[k]) {
      throw RefusalError("trajectory " + bases.labels[k] +
                         ": controlled upper basis refused (tail is not upper dominating)");
    }
  }
  for (auto k : pattern.Kq) {
    if (k >= bases.size()) throw UsageError("pattern index out of range");
    if (!bases.lower[k]) {
      throw RefusalError("trajectory " + bases.labels[k] +
                         ": controlled lower basis refused (tail is not lower dominating)");
    }
  }
  CSpopAssembly out;
  out.compat = check_compatibility(pattern, policies, part, exec);
  out.cs = assemble_common(bases, part, covers, delta_u, exec);
  const std::size_t N = bases.size();
  for (std::size_t k = 0; k < N; ++k) {
    const bool in_p = std::find(pattern.Kp.begin(), pattern.Kp.end(), k) != pattern.Kp.end();
    const bool in_q = std::find(pattern.Kq.begin(), pattern.Kq.end(), k) != pattern.Kq.end();
    if (!in_p) out.cs.var_lower[1 + k] = out.cs.var_upper[1 + k] = 0.0;
    if (!in_q) out.cs.var_lower[1 + N + k] = out.cs.var_upper[1 + N + k] = 0.0;
  }
  return out;
}

// ------------------------------------------------------------ controller set

bool InputBox::empty() const {
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (lower[j] > upper[j]) return true;
  }
  return false;
}

ControllerSet::ControllerSet(SupportPattern pattern,
                             std::vector<std::shared_ptr<const FeedbackPolicy>> policies,
                             GridPartition part, BoxRegion input_set, Exec exec)
    : pattern_(std::move(pattern)),
      policies_(std::move(policies)),
      part_(std::move(part)),
      input_set_(std::move(input_set)) {
  check_policies(policies_, pattern_);
  for (auto k : pattern_.Kp) {
    if (policies_[k]->input_dim() != input_set_.dim()) throw UsageError("policy input dim");
  }
  for (auto k : pattern_.Kq) {
    if (policies_[k]->input_dim() != input_set_.dim()) throw UsageError("policy input dim");
  }
  const auto cells = static_cast<std::ptrdiff_t>(part_.num_cells());
  std::uint64_t empties = 0;
  std::uint64_t first = UINT64_MAX;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(+ : empties) reduction(min : first)
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      if (cell_box(static_cast<std::uint64_t>(k)).empty()) {
        ++empties;
        first = std::min<std::uint64_t>(first, static_cast<std::uint64_t>(k));
      }
    }
  } else {
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      if (cell_box(static_cast<std::uint64_t>(k)).empty()) {
        ++empties;
        first = std::min<std::uint64_t>(first, static_cast<std::uint64_t>(k));
      }
    }
  }
  empty_cells_ = empties;
  if (empties) first_empty_ = first;
}

InputBox ControllerSet::cell_box(std::uint64_t cell) const {
  const std::size_t n = part_.dim();
  std::vector<double> lo(n), hi(n), acc, tmp;
  part_.cell_corners(cell, lo, hi);
  InputBox box{input_set_.lower().values(), input_set_.upper().values()};
  if (extreme(policies_, pattern_.Kq, hi, true, acc, tmp)) {
    for (std::size_t j = 0; j < acc.size(); ++j) box.lower[j] = std::max(box.lower[j], acc[j]);
  }
  if (extreme(policies_, pattern_.Kp, lo, false, acc, tmp)) {
    for (std::size_t j = 0; j < acc.size(); ++j) box.upper[j] = std::min(box.upper[j], acc[j]);
  }
  return box;
}

ControllerSet controller_set(
    const SupportPattern& pattern,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, const BoxRegion& input_set) {
  return ControllerSet(pattern, policies, part, input_set);
}

std::vector<double> select_control(const ControllerSet& cset, std::uint64_t cell,
                                   const std::optional<std::vector<double>>& nominal) {
  InputBox box = cset.cell_box(cell);
  if (box.empty()) {
    throw RefusalError("controller set is empty on cell " + std::to_string(cell));
  }
  std::vector<double> u(box.lower.size());
  if (nominal) {
    if (nominal->size() != u.size()) throw UsageError("nominal input dimension");
    for (std::size_t j = 0; j < u.size(); ++j) {
      u[j] = std::clamp((*nominal)[j], box.lower[j], box.upper[j]);
    }
  } else {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = 0.5 * (box.lower[j] + box.upper[j]);
  }
  return u;
}

double dominance_margin_diagnostic(const std::vector<std::shared_ptr<const Trajectory>>& trajs,
                       std::span<const double> x, double alpha) {
  if (trajs.empty()) throw UsageError("dominance_margin_diagnostic needs trajectories");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& tr : trajs) {
    const double P = dominance_value(controlled_upper_time(*tr, x), alpha);
    const double Q = dominance_value(controlled_lower_time(*tr, x), alpha);
    best = std::min(best, std::max(P, Q));
  }
  return best - 1.0;
}

VerifyReport verify_rows(const ConstraintSystem& cs, std::span<const double> p) {
  if (p.size() != cs.n_vars()) throw UsageError("coefficient vector length");
  VerifyReport rep;
  for (std::size_t i = 0; i < cs.rows.size(); ++i) {
    const auto& row = cs.rows[i];
    double v = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) v += row.coef[j] * p[j];
    const double viol = row.sense == Sense::Le ? v - row.rhs : row.rhs - v;
    if (row.kind == RowKind::Unsafe) rep.min_unsafe_value = std::min(rep.min_unsafe_value, v);
    ++rep.rows_checked;
    if (viol > kRowTolerance || !std::isfinite(v)) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = i;
      rep.worst_violation = std::max(rep.worst_violation, viol);
    }
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < cs.var_lower[j] - kRowTolerance || p[j] > cs.var_upper[j] + kRowTolerance) {
      rep.bounds_ok = false;
    }
  }
  rep.ok = rep.violations == 0 && rep.bounds_ok;
  return rep;
}

}  // namespace trajcert
