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

#include "handlebar/models.hpp"

#include <cmath>

namespace handlebar {

Model beta_binomial(std::int64_t n) {
  if (n < 1) throw InvalidParams("beta_binomial requires n >= 1");
  return [n](ExecutionContext& ctx) -> Value {
    const Value z = sample(ctx, "z", Beta(1.0, 1.0));
    return sample(ctx, "x", Binomial(n, z));
  };
}

Model normal_normal(double prior_mu, double prior_sigma, double like_sigma) {
  if (!(prior_sigma > 0.0) || !(like_sigma > 0.0)) {
    throw InvalidParams("normal_normal requires positive sigmas");
  }
  return [prior_mu, prior_sigma, like_sigma](ExecutionContext& ctx) -> Value {
    const Value theta = sample(ctx, "theta", Normal(prior_mu, prior_sigma));
    return sample(ctx, "y", Normal(theta, like_sigma));
  };
}

namespace {

double hyper_value(const HyperMap& hypers, const ModelEntry& entry,
                   const std::string& name) {
  const auto it = hypers.find(name);
  if (it != hypers.end()) return it->second;
  for (const auto& [key, value] : entry.hyper_defaults) {
    if (key == name) return value;
  }
  throw InvalidParams("model '" + entry.name + "' has no hyperparameter '" + name + "'");
}

void reject_unknown_hypers(const HyperMap& hypers, const ModelEntry& entry) {
  for (const auto& [name, value] : hypers) {
    bool known = false;
    for (const auto& [key, def] : entry.hyper_defaults) {
      known = known || key == name;
    }
    if (!known) {
      throw InvalidParams("model '" + entry.name + "' has no hyperparameter '" +
                          name + "'");
    }
  }
}

std::vector<ModelEntry> build_registry() {
  std::vector<ModelEntry> entries;

  ModelEntry bb;
  bb.name = "beta_binomial";
  bb.latent_names = {"z"};
  bb.observed_names = {"x"};
  bb.hyper_defaults = {{"n", 10.0}};
  bb.builder = [entry = bb](const HyperMap& hypers) -> Model {
    reject_unknown_hypers(hypers, entry);
    const double n = hyper_value(hypers, entry, "n");
    if (n != std::floor(n)) {
      throw InvalidParams("beta_binomial hyperparameter n must be an integer");
    }
    return beta_binomial(static_cast<std::int64_t>(n));
  };
  entries.push_back(std::move(bb));

  ModelEntry nn;
  nn.name = "normal_normal";
  nn.latent_names = {"theta"};
  nn.observed_names = {"y"};
  nn.hyper_defaults = {{"prior_mu", 0.0}, {"prior_sigma", 1.0}, {"like_sigma", 1.0}};
  nn.builder = [entry = nn](const HyperMap& hypers) -> Model {
    reject_unknown_hypers(hypers, entry);
    return normal_normal(hyper_value(hypers, entry, "prior_mu"),
                         hyper_value(hypers, entry, "prior_sigma"),
                         hyper_value(hypers, entry, "like_sigma"));
  };
  entries.push_back(std::move(nn));

  return entries;
}

}  // namespace

const std::vector<ModelEntry>& model_registry() {
  static const std::vector<ModelEntry> registry = build_registry();
  return registry;
}

const ModelEntry& registry_lookup(const std::string& name) {
  for (const auto& entry : model_registry()) {
    if (entry.name == name) return entry;
  }
  std::string available;
  for (const auto& entry : model_registry()) {
    if (!available.empty()) available += ", ";
    available += entry.name;
  }
  throw NotFound("no model named '" + name + "'; available models: " + available);
}

}  // namespace handlebar
