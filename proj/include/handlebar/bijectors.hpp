// Copyright 2026 The Handlebar Authors.
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

#include <memory>
#include <string>
#include <vector>

#include "handlebar/autodiff.hpp"
#include "handlebar/support.hpp"

namespace handlebar {

// Differentiable, strictly monotone scalar bijection with a closed-form
// log-det-Jacobian. All value-level entry points accept tape Values and
// propagate derivatives.
class Bijector {
 public:
  virtual ~Bijector() = default;

  virtual Value forward(const Value& x) const = 0;
  virtual Value inverse(const Value& y) const = 0;
  // log |d forward / dx| at x.
  virtual Value forward_log_det_jacobian(const Value& x) const = 0;

  // Endpoint maps used for support bookkeeping: like forward/inverse but
  // defined on closed interval endpoints including +/-inf, with no domain
  // checks (e.g. sigmoid maps -inf to 0).
  virtual double forward_ext(double x) const = 0;
  virtual double inverse_ext(double y) const = 0;

  virtual std::string name() const = 0;
};

using BijectorPtr = std::shared_ptr<const Bijector>;

BijectorPtr sigmoid_bijector();
BijectorPtr exp_bijector();
// y = a * x + b with a != 0.
BijectorPtr affine_bijector(double a, double b);
BijectorPtr identity_bijector();
BijectorPtr invert(BijectorPtr inner);
// Composition in right-to-left order: chain({f, g}).forward(x) = f(g(x)).
BijectorPtr chain(std::vector<BijectorPtr> parts);

// Bijector mapping the real line onto the given support (unconstrained ->
// constrained): unit-interval -> Sigmoid, positive-reals -> Exp, real-line ->
// identity. Discrete and non-canonical supports raise Unsupported.
BijectorPtr constraining_transform(const Support& support);

}  // namespace handlebar
