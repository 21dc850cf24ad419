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


// Simulation-based falsification of certificates and of the dominance
// properties the certificates rely on. Every check is deterministic per seed;
// sample i always draws from its own stream, so serial and parallel runs give
// identical reports.

#ifndef TRAJCERT_VALIDATE_HPP_
#define TRAJCERT_VALIDATE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajcert/certify.hpp"
#include "trajcert/dominance.hpp"
#include "trajcert/parallel.hpp"
#include "trajcert/systems.hpp"

namespace trajcert {

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  // Named counters and measurements, in insertion order.
  std::vector<std::pair<std::string, double>> metrics;
  // First few violations, in sample order.
  std::vector<std::string> examples;

  bool ok() const { return violations == 0; }
  double metric(const std::string& key) const;  // throws if absent
  void set(const std::string& key, double value);
  std::string to_text() const;
  std::string to_json() const;
};

inline constexpr std::size_t kMaxExamples = 5;

// Robust certificate: initial states are drawn from the initial set,
// disturbances from the input set. Constraint rows are only verified to
// kRowTolerance, so the certified set is {floor <= kRowTolerance}; a step
// violates invariance when the floor leaves that set. Metrics:
// invariance_violations, initial_positive, unsafe_hits, escapes, min_margin
// (least -floor seen), steps.
CheckReport monte_carlo_safety(const SystemModel& sys, const CertificateTemplate& tpl,
                               std::size_t n_runs, std::size_t horizon,
                               std::uint64_t seed, Exec exec = Exec::Parallel);

// Controlled certificate driven by select_control on the controller set.
CheckReport monte_carlo_safety(const SystemModel& sys, const CertificateTemplate& tpl,
                               const ControllerSet& cset,
                               const std::optional<std::vector<double>>& nominal,
                               std::size_t n_runs, std::size_t horizon,
                               std::uint64_t seed, Exec exec = Exec::Parallel);

// value(f(x, v)) <= value(x) for x uniform in the state set and v admissible:
// disturbances from the input set for robust kinds; for controlled upper
// kinds v uniform in [lower(U), pi(x)], for controlled lower kinds in
// [pi(x), upper(U)]. For full kinds, samples whose dominance time is the last
// stored index have no observed successor; they are counted under
// beyond_horizon and excluded from the violation count. Truncated robust
// kinds carry no dissipation statement and are rejected.
CheckReport check_dissipation(const DominanceBasis& basis, const SystemModel& sys,
                              std::size_t n_samples, std::uint64_t seed,
                              Exec exec = Exec::Parallel);

// Ordered pairs x <= y drawn from the domain: upper kinds need
// value(x) <= value(y), lower kinds value(x) >= value(y). Also checks the value
// range {0} u (0, 1] u {alpha}.
CheckReport check_monotonicity(const DominanceBasis& basis, const BoxRegion& domain,
                               std::size_t n_pairs, std::uint64_t seed,
                               Exec exec = Exec::Parallel);

// Pairs of trajectories from a shared initial state under independent
// disturbances: |x_a(t) - x_b(t)| <= lambda_{t-1} componentwise at every step.
// Metric max_ratio_t1 is the largest |x_a(1) - x_b(1)|_inf / lambda_0.
CheckReport check_trajectory_comparison(const SystemModel& sys, const LipschitzBounds& lips,
                                        std::size_t n_pairs, std::size_t horizon,
                                        std::uint64_t seed, Exec exec = Exec::Parallel);

// Tail radius of a trajectory after index T: max_{t >= T} |x(t) - x(T)|_inf.
double tail_radius(const Trajectory& traj, std::size_t T);

// Two-sided bound between the full dominance functions of a long trajectory
// and the truncated ones built from its prefix of length truncate_at with
// tail radius eps_T:
//   P^T(x) - 1/(T+1) <= P(x) <= P^T(x + eps),
//   Q^T(x) - 1/(T+1) <= Q(x) <= Q^T(x - eps).
// Metric q_plus_eps_failures counts points where Q(x) <= Q^T(x + eps) fails
// (a reversed shift; a nonzero count shows the sampling reaches the tail).
CheckReport check_truncation_sandwich(const Trajectory& traj, const LipschitzBounds& lips,
                                      double eps_T, double alpha, std::size_t truncate_at,
                                      std::size_t n_points, std::uint64_t seed,
                                      Exec exec = Exec::Parallel);

// Starts inside the c-sublevel set of a full basis and follows the closed
// loop (robust: sampled disturbances; controlled: u = pi(x)) for `steps`
// steps, checking the value never exceeds c. A path is no longer followed
// once its dominance time reaches the last stored index.
CheckReport check_sublevel_invariance(const DominanceBasis& basis, const SystemModel& sys,
                                      double level, std::size_t n_starts, std::size_t steps,
                                      std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace trajcert

#endif  // TRAJCERT_VALIDATE_HPP_
