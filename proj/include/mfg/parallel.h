// Copyright 2026 The MFG-OMD Authors
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

#ifndef MFG_PARALLEL_H_
#define MFG_PARALLEL_H_

#include <functional>

namespace mfg {

// Worker cap: MFG_THREADS if set and positive, else hardware concurrency.
int MaxThreads();

// Runs fn(0..count-1), possibly on several threads. Each index must write
// only its own outputs. The first exception thrown is rethrown here.
void ParallelFor(int count, const std::function<void(int)>& fn);

}  // namespace mfg

#endif  // MFG_PARALLEL_H_
