// Copyright 2026 The ESBQ Authors. All Rights Reserved.
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

#ifndef ESBQ_PARALLEL_H_
#define ESBQ_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace esbq {

// Worker count: ESBQ_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited exactly once; results must be written to per-index slots so the
// outcome does not depend on scheduling. Exceptions from any chunk are
// rethrown (the one from the lowest chunk wins).
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace esbq

#endif  // ESBQ_PARALLEL_H_
