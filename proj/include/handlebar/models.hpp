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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "handlebar/effects.hpp"

namespace handlebar {

// z ~ Beta(1, 1); x ~ Binomial(n, z); returns x.
Model beta_binomial(std::int64_t n);

// theta ~ Normal(prior_mu, prior_sigma); y ~ Normal(theta, like_sigma);
// returns y.
Model normal_normal(double prior_mu, double prior_sigma, double like_sigma);

using HyperMap = std::map<std::string, double>;

struct ModelEntry {
  std::string name;
  std::vector<std::string> latent_names;
  std::vector<std::string> observed_names;
  // Hyperparameters in declaration order with their defaults.
  std::vector<std::pair<std::string, double>> hyper_defaults;
  // Builds the computation; unknown hyper names or invalid values raise
  // InvalidParams.
  std::function<Model(const HyperMap&)> builder;
};

const std::vector<ModelEntry>& model_registry();
const ModelEntry& registry_lookup(const std::string& name);

}  // namespace handlebar
