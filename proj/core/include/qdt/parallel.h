// Copyright 2026 The qdt Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace qdt {

/// Worker count from QDT_THREADS (integer >= 1), else the hardware concurrency.
/// Throws std::invalid_argument if QDT_THREADS is set but malformed.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled exactly once; the first exception thrown is rethrown after all
/// workers join. Callers must make body(i) independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = worker_count());

}  // namespace qdt
