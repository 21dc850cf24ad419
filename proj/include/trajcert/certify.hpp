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

// Barrier certificates built as nonnegative combinations of dominance bases,
// the linear constraint systems that certify them cell by cell, and the safe
// controller sets they induce.
//
// Variables are ordered p = (a, b_1..b_N, c_1..c_N); b_k weighs the upper
// basis of trajectory k and c_k its lower basis.

#ifndef TRAJCERT_CERTIFY_HPP_
#define TRAJCERT_CERTIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajcert/dominance.hpp"
#include "trajcert/parallel.hpp"
#include "trajcert/partition.hpp"
#include "trajcert/systems.hpp"

namespace trajcert {

inline constexpr double kDefaultDeltaU = 1e-6;
inline constexpr double kDefaultGamma = 1e-6;
inline constexpr double kRowTolerance = 1e-9;

enum class CertMode { Robust, Controlled };
const char* to_string(CertMode m);

using BasisPtr = std::shared_ptr<const DominanceBasis>;

// Truncated bases for N trajectories. A null entry means the basis was refused
// (tail assumption unmet); its coefficient must then stay zero.
struct BasisSet {
  CertMode mode = CertMode::Robust;
  std::vector<BasisPtr> upper;
  std::vector<BasisPtr> lower;
  std::vector<std::string> labels;
  std::vector<std::string> refusals;
  std::size_t size() const { return upper.size(); }
};

// Truncated robust bases. Every trajectory must carry a tail epsilon.
BasisSet make_robust_bases(const std::vector<std::shared_ptr<const Trajectory>>& trajs,
                           const std::vector<std::string>& labels,
                           const std::vector<LipschitzBounds>& lips, double alpha);
// Truncated controlled bases; refusals are recorded rather than thrown.
BasisSet make_controlled_bases(
    const std::vector<std::shared_ptr<const Trajectory>>& trajs,
    const std::vector<std::string>& labels,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    double alpha);

struct CertificateTemplate {
  CertMode mode = CertMode::Robust;
  double a = 0.0;
  std::vector<double> b;
  std::vector<double> c;
  BasisSet bases;

  std::size_t size() const { return b.size(); }
  std::vector<double> coefficients() const;
  void set_coefficients(std::span<const double> p);
};

CertificateTemplate make_template(BasisSet bases, std::span<const double> p);

// a + sum_k b_k P_k(x) + c_k Q_k(x), skipping zero weights.
double eval_certificate(const CertificateTemplate& tpl, std::span<const double> x);
// Upper bases at x_up, lower bases at y_low.
double eval_inclusion(const CertificateTemplate& tpl, std::span<const double> x_up,
                      std::span<const double> y_low);
// A value the exact (untruncated) certificate cannot fall below: for robust
// templates each active basis is lowered by 1/(T_k+1); controlled templates
// return eval_certificate. Invariance checks compare this against zero.
double certificate_floor(const CertificateTemplate& tpl, std::span<const double> x);

struct SupportPattern {
  std::vector<std::size_t> Kp;  // 0-based trajectory indices
  std::vector<std::size_t> Kq;
  std::size_t size() const { return Kp.size() + Kq.size(); }
  friend bool operator==(const SupportPattern&, const SupportPattern&) = default;
};

std::string to_string(const SupportPattern& s);

enum class Sense { Le, Ge };
enum class RowKind { Initial, Unsafe, Sign };

struct ConstraintRow {
  std::vector<double> coef;
  Sense sense = Sense::Le;
  double rhs = 0.0;
  RowKind kind = RowKind::Initial;
  std::uint64_t cell = 0;
};

struct ConstraintSystem {
  CertMode mode = CertMode::Robust;
  std::size_t N = 0;
  std::vector<std::string> var_names;
  std::vector<ConstraintRow> rows;
  // Per-variable bounds; pins for out-of-pattern variables live here.
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  double delta_u = kDefaultDeltaU;
  std::vector<std::size_t> horizons;
  std::vector<double> epsilons;

  std::size_t n_vars() const { return 2 * N + 1; }
  std::size_t count(RowKind k) const;
};

// R-SpOP: one <= 0 row per initial cell (upper bases at the upper corner
// shifted by +eps_k, lower bases at the lower corner shifted by -eps_k), one
// >= delta_u row per unsafe cell with the -(b_k + c_k)/(T_k + 1) correction,
// and 2N sign rows. Rows follow cover order, initial first.
ConstraintSystem assemble_rspop(const BasisSet& bases, const GridPartition& part,
                                const CoverSets& covers, double delta_u,
                                Exec exec = Exec::Parallel);
ConstraintSystem assemble_rspop(
    const std::vector<std::shared_ptr<const Trajectory>>& trajs,
    const LipschitzBounds& lips, const GridPartition& part,
    const CoverSets& covers, double alpha, double delta_u);

struct CompatibilityReport {
  bool ok = true;
  std::uint64_t cells_checked = 0;
  std::uint64_t failing = 0;
  std::vector<std::uint64_t> failing_cells;  // first few, ascending
  // Cells where the controller-box corner convention and the compatibility
  // convention disagree on emptiness.
  std::uint64_t disagreements = 0;
  std::vector<std::uint64_t> disagreement_cells;
};

// max_{q in Kq} pi_q(lower corner) <= min_{p in Kp} pi_p(upper corner) on every
// cell of the grid.
CompatibilityReport check_compatibility(
    const SupportPattern& pattern,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, Exec exec = Exec::Parallel);

// compat[p][q]: policy q at lower corners never exceeds policy p at upper
// corners. A pattern is compatible iff all its (p, q) pairs are.
std::vector<std::vector<bool>> pairwise_compatibility(
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, Exec exec = Exec::Parallel);

struct CSpopAssembly {
  ConstraintSystem cs;
  CompatibilityReport compat;
};

// C-SpOP rows for one pattern: controlled truncated bases, no shifts and no
// horizon correction; variables outside the pattern pinned to zero. Throws
// RefusalError if the pattern uses a refused basis.
CSpopAssembly assemble_cspop(
    const BasisSet& bases,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, const CoverSets& covers, double delta_u,
    const SupportPattern& pattern, Exec exec = Exec::Parallel);

struct InputBox {
  std::vector<double> lower;
  std::vector<double> upper;
  bool empty() const;
};

// Per-cell safe input boxes: lower bound max over Kq of pi_q(upper corner),
// upper bound min over Kp of pi_p(lower corner), intersected with the input
// set. Boxes are computed on demand; construction scans every cell once to
// count empty ones.
class ControllerSet {
 public:
  ControllerSet(SupportPattern pattern,
                std::vector<std::shared_ptr<const FeedbackPolicy>> policies,
                GridPartition part, BoxRegion input_set, Exec exec = Exec::Parallel);

  const SupportPattern& pattern() const { return pattern_; }
  const GridPartition& partition() const { return part_; }
  const BoxRegion& input_set() const { return input_set_; }
  InputBox cell_box(std::uint64_t cell) const;
  std::uint64_t empty_cells() const { return empty_cells_; }
  std::optional<std::uint64_t> first_empty() const { return first_empty_; }
  bool valid() const { return empty_cells_ == 0; }

 private:
  SupportPattern pattern_;
  std::vector<std::shared_ptr<const FeedbackPolicy>> policies_;
  GridPartition part_;
  BoxRegion input_set_;
  std::uint64_t empty_cells_ = 0;
  std::optional<std::uint64_t> first_empty_;
};

ControllerSet controller_set(
    const SupportPattern& pattern,
    const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
    const GridPartition& part, const BoxRegion& input_set);

// Closest box point to the nominal input in the infinity norm (componentwise
// clamp), or the box center without a nominal.
std::vector<double> select_control(const ControllerSet& cset, std::uint64_t cell,
                                   const std::optional<std::vector<double>>& nominal);

// DIAGNOSTIC ONLY, not a certificate: min over the given disturbance-free
// trajectories of max{P(x), Q(x)} - 1, using full bases on stored data.
double dominance_margin_diagnostic(const std::vector<std::shared_ptr<const Trajectory>>& trajs,
                       std::span<const double> x, double alpha);

struct VerifyReport {
  bool ok = true;
  std::size_t rows_checked = 0;
  std::size_t violations = 0;
  std::optional<std::size_t> first_violation;
  double worst_violation = 0.0;
  // min over unsafe rows of (row value); compare against delta_u.
  double min_unsafe_value = std::numeric_limits<double>::infinity();
  bool bounds_ok = true;
};

// Checks every row and bound at p within kRowTolerance.
VerifyReport verify_rows(const ConstraintSystem& cs, std::span<const double> p);

}  // namespace trajcert

#endif  // TRAJCERT_CERTIFY_HPP_
