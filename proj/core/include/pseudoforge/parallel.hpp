// Copyright 2026 The pseudoforge Authors
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

#ifndef PSEUDOFORGE_PARALLEL_HPP_
#define PSEUDOFORGE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace pseudoforge {

// Logical core count, never less than 1.
int default_worker_count();

// Runs body(i) for i in [0, n) across up to `workers` threads. Indices are
// distributed in contiguous chunks; results must be written to index-addressed
// slots so the outcome is independent of the worker count. The first exception
// thrown by any body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_PARALLEL_HPP_
