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

#ifndef TRAJCERT_RNG_HPP_
#define TRAJCERT_RNG_HPP_

#include <cstdint>
#include <random>

namespace trajcert {

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream seed for (base seed, stream index, salt). Every
// Monte-Carlo run and every trajectory gets its own stream, so results do not
// depend on thread scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t salt = 0);

// Salts separating data generation from validation.
inline constexpr std::uint64_t kDataSalt = 0x5eedda7aULL;
inline constexpr std::uint64_t kValidationSalt = 0x7a11da7eULL;

// mt19937_64 with a portable [0,1) draw (53 high bits), so sequences do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi);
  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace trajcert

#endif  // TRAJCERT_RNG_HPP_
