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


// Certificate files. A certificate names its trajectory files with content
// hashes and carries everything needed to rebuild the constraint rows;
// loading rebuilds and re-verifies every row before accepting.

#ifndef TRAJCERT_CERTIFICATE_IO_HPP_
#define TRAJCERT_CERTIFICATE_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trajcert/certify.hpp"
#include "trajcert/config.hpp"
#include "trajcert/solver.hpp"

namespace trajcert {

struct TrajectoryRef {
  std::string label;
  std::string file;  // relative to the certificate's directory
  std::string sha256;
  std::optional<double> epsilon;  // robust
  std::string policy;             // controlled
};

struct CertificateRecord {
  CertMode mode = CertMode::Robust;
  double alpha = 2.0;
  double delta_u = 1e-6;
  double gamma = 1e-6;
  std::vector<double> p;  // (a, b_1..b_N, c_1..c_N)
  SystemSpec system;
  std::optional<LipschitzBounds> lipschitz;
  std::vector<TrajectoryRef> trajectories;
  std::vector<PolicySpec> policies;
  std::vector<std::vector<double>> breaks;
  std::optional<SupportPattern> pattern;
  LossKind loss = LossKind::L1;
  double objective = 0.0;
  std::vector<std::string> cap_active;
};

nlohmann::ordered_json certificate_to_json(const CertificateRecord& rec);
CertificateRecord certificate_from_json(const nlohmann::json& j, const std::string& source);

// Per-cell boxes; when a nominal input is given, also the selected input.
nlohmann::ordered_json controller_to_json(const ControllerSet& cset,
                                          const std::optional<std::vector<double>>& nominal);

struct LoadedCertificate {
  CertificateRecord record;
  SystemModel system;
  GridPartition partition;
  CertificateTemplate tpl;
  ConstraintSystem rows;
  VerifyReport verify;
  std::optional<ControllerSet> controller;
};

// Reads, checks trajectory hashes, rebuilds rows and re-verifies them.
// Throws UsageError when the certificate is rejected.
LoadedCertificate load_certificate(const std::string& path, Exec exec = Exec::Parallel);

}  // namespace trajcert

#endif  // TRAJCERT_CERTIFICATE_IO_HPP_
