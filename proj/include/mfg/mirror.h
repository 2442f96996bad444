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

#ifndef MFG_MIRROR_H_
#define MFG_MIRROR_H_

#include <memory>
#include <span>
#include <string>

#include "mfg/game.h"
#include "mfg/tables.h"

namespace mfg {

// A strongly convex, steep regularizer h on the action simplex together with
// its conjugate h* and mirror map Gamma = grad h*.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual std::string name() const = 0;
  virtual double Value(std::span<const double> p) const = 0;
  virtual double Conjugate(std::span<const double> y) const = 0;
  // grad h(q); q must lie in the open simplex.
  virtual void Gradient(std::span<const double> q,
                        std::span<double> out) const = 0;
  // Gamma(y), always in the open simplex.
  virtual void Gamma(std::span<const double> y,
                     std::span<double> out) const = 0;
  virtual double strong_convexity_modulus() const = 0;
};

// Negentropy h(p) = sum_a p(a) log p(a); Gamma is the softmax.
class EntropyRegularizer : public Regularizer {
 public:
  std::string name() const override { return "entropy"; }
  double Value(std::span<const double> p) const override;
  double Conjugate(std::span<const double> y) const override;
  void Gradient(std::span<const double> q,
                std::span<double> out) const override;
  void Gamma(std::span<const double> y, std::span<double> out) const override;
  double strong_convexity_modulus() const override { return 1.0; }
};

std::shared_ptr<const Regularizer> MakeEntropyRegularizer();

// D_h(p, q) = h(p) - h(q) - <grad h(q), p - q>. Throws kDomain when q is on
// the simplex boundary.
double Bregman(const Regularizer& reg, std::span<const double> p,
               std::span<const double> q);

// Flow-weighted Bregman divergence between a reference policy and Gamma(y):
//   sum_i sum_n sum_x mu^{ref}_n(x) D_h(ref_n(.|x), Gamma(y_n(x, .))).
// The weights are the forward flow of `reference`.
double SimilarityToReference(const GameSpec& spec, const Regularizer& reg,
                             const DualVariable& y, const Policy& reference);

}  // namespace mfg

#endif  // MFG_MIRROR_H_
