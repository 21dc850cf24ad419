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

#ifndef TRAJCERT_ERROR_HPP_
#define TRAJCERT_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajcert {

// Caller passed something malformed: dimension mismatch, bad config, etc.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// A simulated state left the declared state set.
class StateEscapeError : public std::runtime_error {
 public:
  StateEscapeError(const std::string& what, std::vector<double> state,
                   std::int64_t step)
      : std::runtime_error(what), state_(std::move(state)), step_(step) {}

  const std::vector<double>& state() const { return state_; }
  std::int64_t step() const { return step_; }

 private:
  std::vector<double> state_;
  std::int64_t step_;
};

// An operation declined to proceed because a soundness precondition on the
// data (tail assumption, missing tail bound) does not hold.
class RefusalError : public std::runtime_error {
 public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

// The simplex hit its iteration cap or a singular basis it could not repair.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace trajcert

#endif  // TRAJCERT_ERROR_HPP_
