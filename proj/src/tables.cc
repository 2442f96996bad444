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

#include "mfg/tables.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/errors.h"

namespace mfg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kNumericConsistency: return "numeric-consistency";
    case ErrorCode::kStructure: return "structure";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

StateActionTable::StateActionTable(int num_populations, int num_slots,
                                   int num_states, int num_actions,
                                   double fill)
    : shape_{num_populations, num_slots, num_states, num_actions} {
  if (num_populations < 0 || num_slots < 0 || num_states < 0 ||
      num_actions < 0) {
    Fail(ErrorCode::kDimension, "negative table dimension");
  }
  data_.assign(static_cast<std::size_t>(num_populations) * num_slots *
                   num_states * num_actions,
               fill);
}

StateTable::StateTable(int num_populations, int num_slots, int num_states,
                       double fill)
    : num_populations_(num_populations),
      num_slots_(num_slots),
      num_states_(num_states) {
  if (num_populations < 0 || num_slots < 0 || num_states < 0) {
    Fail(ErrorCode::kDimension, "negative table dimension");
  }
  data_.assign(
      static_cast<std::size_t>(num_populations) * num_slots * num_states,
      fill);
}

Policy Policy::Uniform(int num_populations, int num_slots, int num_states,
                       int num_actions) {
  if (num_actions <= 0) Fail(ErrorCode::kDimension, "no actions");
  return Policy(num_populations, num_slots, num_states, num_actions,
                1.0 / num_actions);
}

void Policy::AssignPopulation(int dst_pop, const Policy& src, int src_pop) {
  if (src.num_slots() != num_slots() || src.num_states() != num_states() ||
      src.num_actions() != num_actions()) {
    Fail(ErrorCode::kDimension, "AssignPopulation: shape mismatch");
  }
  const std::size_t block = static_cast<std::size_t>(num_slots()) *
                            num_states() * num_actions();
  std::copy_n(src.data_.begin() + src_pop * block, block,
              data_.begin() + dst_pop * block);
}

void Policy::Validate(double tol) const {
  for (int i = 0; i < num_populations(); ++i) {
    for (int s = 0; s < num_slots(); ++s) {
      for (int x = 0; x < num_states(); ++x) {
        double sum = 0.0;
        for (double p : Row(i, s, x)) {
          if (!(p >= 0.0)) {
            std::ostringstream msg;
            msg << "policy entry negative or NaN at (" << i << "," << s << ","
                << x << ")";
            Fail(ErrorCode::kDomain, msg.str());
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
          std::ostringstream msg;
          msg << "policy row (" << i << "," << s << "," << x << ") sums to "
              << sum;
          Fail(ErrorCode::kDomain, msg.str());
        }
      }
    }
  }
}

double DistributionFlow::MaxMassError() const {
  double worst = 0.0;
  for (int i = 0; i < num_populations(); ++i) {
    for (int s = 0; s < num_slots(); ++s) {
      double sum = 0.0;
      for (double m : Slice(i, s)) sum += m;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

QFunction::QFunction(int num_slots, int num_states, int num_actions)
    : num_slots_(num_slots),
      num_states_(num_states),
      num_actions_(num_actions),
      q_(static_cast<std::size_t>(num_slots) * num_states * num_actions, 0.0),
      v_(static_cast<std::size_t>(num_slots) * num_states, 0.0) {}

}  // namespace mfg
