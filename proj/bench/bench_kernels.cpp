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


// Serial and parallel timings of the data-parallel kernels on the
// Lotka-Volterra example.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "trajcert/certify.hpp"
#include "trajcert/rng.hpp"
#include "trajcert/solver.hpp"
#include "trajcert/validate.hpp"

namespace trajcert {
namespace {

BasisSet example_bases(const SystemModel& sys) {
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  const std::vector<StateVector> starts{StateVector{1.46, 0.84, 0.67, 1.59, 0.78},
                                        StateVector{8.65, 9.74, 8.83, 9.17, 9.61}};
  for (std::size_t k = 0; k < starts.size(); ++k) {
    Trajectory t = simulate(sys, starts[k], NoInput{}, 400, k);
    t.set_tail(estimate_compact_tail(t, 50));
    trajs.push_back(std::make_shared<const Trajectory>(std::move(t)));
  }
  const LipschitzBounds lips{1.2, 1.0, 0.0};
  return make_robust_bases(trajs, {"1", "2"}, {lips, lips}, 2.0);
}

std::vector<double> random_points(std::size_t n, std::size_t dim) {
  Rng rng(1);
  std::vector<double> v(n * dim);
  for (double& x : v) x = rng.uniform(0.1, 10.0);
  return v;
}

struct Fixture {
  SystemModel sys = make_lotka_volterra(0.2);
  BasisSet bases = example_bases(sys);
  GridPartition part = build_aligned_partition(sys.state_set, 0.5);
  CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  CertificateTemplate tpl = make_template(
      bases, solve_rspop(assemble_rspop(bases, part, covers, 1e-6), LossSpec{LossKind::L1}).p);
  std::vector<double> points = random_points(100000, 5);
};

const Fixture& fixture() {
  static const Fixture fx;
  return fx;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(0) ? Exec::Parallel : Exec::Serial;
}

void BM_AssembleRspop(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_rspop(f.bases, f.part, f.covers, 1e-6, exec_of(state)));
  }
}
BENCHMARK(BM_AssembleRspop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_safety(f.sys, f.tpl, 200, 400, 7, exec_of(state)));
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvaluateBatch(benchmark::State& state) {
  const Fixture& f = fixture();
  std::vector<double> out(f.points.size() / 5);
  for (auto _ : state) {
    f.bases.upper[0]->evaluate_batch(f.points, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EvaluateBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trajcert

BENCHMARK_MAIN();
