// Copyright 2026 The risklens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKLENS_CONCURRENCY_H_
#define RISKLENS_CONCURRENCY_H_

#include <cstddef>
#include <functional>

namespace risklens {

// Runs fn(0..n-1) on at most max_concurrency threads. Callers write results
// into per-index slots, so output order never depends on completion order.
// If any call throws, the remaining unstarted indices are skipped and the
// exception from the lowest failing index is rethrown after all workers join.
void ParallelFor(size_t n, size_t max_concurrency,
                 const std::function<void(size_t)>& fn);

}  // namespace risklens

#endif  // RISKLENS_CONCURRENCY_H_
