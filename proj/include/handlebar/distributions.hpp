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

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "handlebar/autodiff.hpp"
#include "handlebar/bijectors.hpp"
#include "handlebar/rng.hpp"
#include "handlebar/support.hpp"

namespace handlebar {

struct DistributionSpec;

// Parameters are stored as autodiff Values so densities differentiate with
// respect to them (e.g. a Binomial whose probability is a latent draw).
// Parameter constraints are checked on the primals at construction.

struct BetaDist {
  Value alpha;  // > 0
  Value beta;   // > 0
};

struct BinomialDist {
  std::int64_t trials = 0;  // n >= 0
  Value prob;               // in [0, 1]
};

struct NormalDist {
  Value mu;
  Value sigma;  // > 0
};

struct HalfCauchyDist {
  Value scale;  // > 0
};

struct TransformedDist {
  std::shared_ptr<const DistributionSpec> base;  // continuous
  BijectorPtr bijector;
};

struct DistributionSpec {
  std::variant<BetaDist, BinomialDist, NormalDist, HalfCauchyDist,
               TransformedDist>
      dist;
};

// Validating constructors.
DistributionSpec Beta(Value alpha, Value beta);
DistributionSpec Binomial(std::int64_t trials, Value prob);
DistributionSpec Normal(Value mu, Value sigma);
DistributionSpec HalfCauchy(Value scale);
DistributionSpec Transformed(DistributionSpec base, BijectorPtr bijector);

// Family tag, used in serialized traces: "beta", "binomial", "normal",
// "half_cauchy", "transformed".
std::string family_name(const DistributionSpec& d);

// Support descriptor. For Transformed the image of the base support is
// classified back onto a canonical support where possible (e.g. a logit
// pushforward of Beta has real-line support).
Support support_of(const DistributionSpec& d);

// Natural-log density (or mass) at `value`. Continuous families return -inf
// outside their support; integer families raise OutOfSupport for non-integer
// values and return -inf for integers outside [0, n]. Differentiable in both
// value and parameters.
Value log_prob(const DistributionSpec& d, const Value& value);

// Draw from the distribution. Only Normal is reparameterized (mu + sigma * eps
// as Value arithmetic), so pathwise gradients flow through its parameters; the
// other families return constants.
Value sample(const DistributionSpec& d, SiteRng& rng);

}  // namespace handlebar
