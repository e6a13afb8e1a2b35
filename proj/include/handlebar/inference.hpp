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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "handlebar/handlers.hpp"

namespace handlebar {

struct MHConfig {
  std::size_t steps = 50000;
  std::size_t burn_in = 5000;
  double step_size = 0.5;  // proposal stddev per coordinate
  std::uint64_t seed = 0;
};

struct ADVIConfig {
  std::size_t steps = 3000;
  double learning_rate = 0.05;
  std::size_t mc_samples = 1;  // per-step ELBO samples
  std::uint64_t seed = 0;
};

struct PosteriorSamples {
  std::vector<std::string> latent_names;  // site order
  std::unordered_map<std::string, std::vector<double>> draws;  // constrained
  double acceptance_rate = 0.0;
  std::vector<std::string> warnings;
};

struct AdviResult {
  GuideParams params;
  std::vector<double> elbo_history;  // one entry per completed step
  // Set when the ELBO or its gradient became NaN/Inf; the history covers the
  // steps before the failure.
  std::optional<std::size_t> nonfinite_step;
};

// Symmetric random-walk Metropolis-Hastings in unconstrained space over the
// model's continuous latents: state u, proposal u' = u + step_size * eps with
// eps standard normal, acceptance min(1, exp(L(u') - L(u))) for L the
// unconstrained log joint. The chain starts at u = 0 and draws its proposal
// and acceptance noise from a stream independent of model-site draws.
// Post-burn-in states are returned mapped to constrained space.
PosteriorSamples mh_run(const Model& model, const ValueMap& observations,
                        const MHConfig& cfg);

// Reparameterized ELBO estimate E_q[log p - log q], averaged over mc_samples
// draws. Guide parameters in `params` may live on a tape; the result then
// carries pathwise gradients. Latents absent from `params` are initialized to
// (0, 0) in place.
Value elbo_estimate(const Model& model, const ValueMap& observations,
                    GuideParams& params, std::uint64_t seed,
                    std::size_t mc_samples = 1);

// ADVI: maximizes the ELBO with Adam (beta1 = 0.9, beta2 = 0.999,
// eps = 1e-8). Deterministic given cfg.seed.
AdviResult advi_fit(const Model& model, const ValueMap& observations,
                    const ADVIConfig& cfg);

}  // namespace handlebar
