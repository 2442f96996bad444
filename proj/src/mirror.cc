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

#include "mfg/mirror.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mfg/dynamics.h"
#include "mfg/errors.h"

namespace mfg {

double EntropyRegularizer::Value(std::span<const double> p) const {
  double total = 0.0;
  for (double v : p) {
    if (v > 0.0) total += v * std::log(v);
  }
  return total;
}

double EntropyRegularizer::Conjugate(std::span<const double> y) const {
  const double top = *std::max_element(y.begin(), y.end());
  double sum = 0.0;
  for (double v : y) sum += std::exp(v - top);
  return top + std::log(sum);
}

void EntropyRegularizer::Gradient(std::span<const double> q,
                                  std::span<double> out) const {
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!(q[a] > 0.0)) {
      Fail(ErrorCode::kDomain, "entropy gradient undefined on the boundary");
    }
    out[a] = std::log(q[a]) + 1.0;
  }
}

void EntropyRegularizer::Gamma(std::span<const double> y,
                               std::span<double> out) const {
  const double top = *std::max_element(y.begin(), y.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    out[a] = std::exp(y[a] - top);
    sum += out[a];
  }
  // Entries stay strictly positive even when exp underflows.
  constexpr double kTiny = std::numeric_limits<double>::min();
  for (double& v : out) v = std::max(v / sum, kTiny);
}

std::shared_ptr<const Regularizer> MakeEntropyRegularizer() {
  return std::make_shared<EntropyRegularizer>();
}

double Bregman(const Regularizer& reg, std::span<const double> p,
               std::span<const double> q) {
  if (p.size() != q.size()) {
    Fail(ErrorCode::kDimension, "bregman: size mismatch");
  }
  for (double v : q) {
    if (!(v > 0.0)) {
      Fail(ErrorCode::kDomain, "bregman: q must be in the simplex interior");
    }
  }
  std::vector<double> grad(q.size());
  reg.Gradient(q, grad);
  double inner = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) inner += grad[a] * (p[a] - q[a]);
  return reg.Value(p) - reg.Value(q) - inner;
}

double SimilarityToReference(const GameSpec& spec, const Regularizer& reg,
                             const DualVariable& y, const Policy& reference) {
  CheckPolicyShape(spec, reference);
  if (y.shape() != reference.shape()) {
    Fail(ErrorCode::kDimension, "similarity: dual variable shape mismatch");
  }
  const DistributionFlow weights = ForwardFlow(spec, reference);
  std::vector<double> mapped(spec.num_actions);
  double total = 0.0;
  for (int i = 0; i < spec.num_populations; ++i) {
    for (int n = 0; n <= spec.horizon; ++n) {
      for (int x = 0; x < spec.num_states; ++x) {
        const double w = weights(i, n, x);
        if (w == 0.0) continue;
        reg.Gamma(y.Row(i, n, x), mapped);
        total += w * Bregman(reg, reference.Row(i, n, x), mapped);
      }
    }
  }
  return total;
}

}  // namespace mfg
