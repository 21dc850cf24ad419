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

#ifndef TRAJCERT_PARALLEL_HPP_
#define TRAJCERT_PARALLEL_HPP_

namespace trajcert {

// Every data-parallel kernel takes an Exec. Serial is the reference
// implementation; Parallel must produce bit-identical results because work
// items are independent and merged in index order.
enum class Exec { Serial, Parallel };

// Caps OpenMP worker threads; n <= 0 leaves the runtime default.
void set_max_threads(int n);
int max_threads();

}  // namespace trajcert

#endif  // TRAJCERT_PARALLEL_HPP_
