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

#ifndef MFG_ERRORS_H_
#define MFG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mfg {

enum class ErrorCode {
  kDimension,           // array shapes disagree with the game
  kParameter,           // invalid builder / solver parameter
  kDomain,              // input outside a function's domain
  kNumeric,             // non-finite values produced during a solve
  kNumericConsistency,  // two routes to the same quantity disagree
  kStructure,           // noise tree / layout mismatch
  kConfig,              // malformed experiment configuration
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type for the library; the C API maps `code()` onto
// status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace mfg

#endif  // MFG_ERRORS_H_
