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

#include "handlebar/inference.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "handlebar/bijectors.hpp"
#include "handlebar/rng.hpp"

namespace handlebar {

namespace {

constexpr std::uint64_t kDiscoverySalt = 0x6d68646973636f76ull;
constexpr std::uint64_t kProposalSalt = 0x6d6870726f706f73ull;
constexpr std::uint64_t kEvalSalt = 0x6d68206576616c20ull;
constexpr std::uint64_t kJointPassSalt = 0x656c626f206a6e74ull;

struct LatentLayout {
  std::vector<std::string> names;      // execution order
  std::vector<BijectorPtr> bijectors;  // unconstrained -> constrained
};

// One forward run under trace/condition to learn the model's latent sites and
// their constraining transforms.
LatentLayout discover_latents(const Model& model, const ValueMap& observations,
                              std::uint64_t seed) {
  ExecutionContext ctx(seed);
  auto tracer = make_trace();
  auto condition = make_condition(observations);
  with_handler(ctx, *tracer, [&] {
    with_handler(ctx, *condition, [&] { model(ctx); });
  });
  LatentLayout layout;
  for (const auto& record : tracer->trace().records()) {
    if (record.observed) continue;
    const Support support = support_of(record.dist);
    if (support.discrete()) {
      throw Unsupported("latent site '" + record.name +
                        "' is discrete; only continuous latents are supported");
    }
    layout.names.push_back(record.name);
    layout.bijectors.push_back(
        support.kind == Support::Kind::kTransformed
            ? identity_bijector()
            : constraining_transform(support));
  }
  return layout;
}

}  // namespace

PosteriorSamples mh_run(const Model& model, const ValueMap& observations,
                        const MHConfig& cfg) {
  if (cfg.steps <= cfg.burn_in) {
    throw InvalidParams("MH requires steps > burn_in");
  }
  if (!(cfg.step_size > 0.0)) {
    throw InvalidParams("MH requires step_size > 0");
  }

  const LatentLayout layout =
      discover_latents(model, observations, derive_seed(cfg.seed, kDiscoverySalt));
  const std::size_t dim = layout.names.size();
  const std::uint64_t eval_seed = derive_seed(cfg.seed, kEvalSalt);

  const auto log_density = [&](const std::vector<double>& u) {
    ValueMap latents;
    for (std::size_t i = 0; i < dim; ++i) latents[layout.names[i]] = Value(u[i]);
    return log_joint_unconstrained(model, latents, observations, eval_seed).primal;
  };

  PosteriorSamples out;
  out.latent_names = layout.names;
  for (const auto& name : layout.names) {
    out.draws[name].reserve(cfg.steps - cfg.burn_in);
  }

  std::vector<double> u(dim, 0.0);
  double current = log_density(u);
  SiteRng proposal_rng(derive_seed(cfg.seed, kProposalSalt), 0);
  std::size_t accepts = 0;

  std::vector<double> proposed(dim);
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    for (std::size_t i = 0; i < dim; ++i) {
      proposed[i] = u[i] + cfg.step_size * proposal_rng.normal();
    }
    const double candidate = dim == 0 ? current : log_density(proposed);
    // The acceptance uniform is drawn unconditionally to keep the noise
    // stream aligned across models with shifted log densities.
    const double log_u = std::log(proposal_rng.uniform());
    if (log_u < candidate - current) {
      u = proposed;
      current = candidate;
      ++accepts;
    }
    if (step >= cfg.burn_in) {
      for (std::size_t i = 0; i < dim; ++i) {
        out.draws[layout.names[i]].push_back(
            layout.bijectors[i]->forward_ext(u[i]));
      }
    }
  }

  out.acceptance_rate = static_cast<double>(accepts) / static_cast<double>(cfg.steps);
  if (out.acceptance_rate < 0.001) {
    out.warnings.push_back(
        "AllRejected: acceptance rate below 0.001; step_size is likely too large");
  }
  return out;
}

namespace {

// One reparameterized ELBO sample: a guide-pass run yields the unconstrained
// draws u and log q(u); a second, fully pinned pass yields log p(u, x).
Value elbo_sample(const Model& model, const ValueMap& observations,
                  GuideParams& params, std::uint64_t seed) {
  ExecutionContext ctx(seed);
  auto tracer = make_trace();
  auto guide = make_mean_field_guide(params);
  auto unconstrain = make_unconstrain();
  auto condition = make_condition(observations);
  with_handler(ctx, *tracer, [&] {
    with_handler(ctx, *guide, [&] {
      with_handler(ctx, *unconstrain, [&] {
        with_handler(ctx, *condition, [&] { model(ctx); });
      });
    });
  });

  ValueMap latents;
  Value log_q(0.0);
  for (const auto& record : tracer->trace().records()) {
    if (record.observed) continue;
    latents[record.name] = record.value;
    log_q = log_q + record.log_prob;
  }
  const Value log_p = log_joint_unconstrained(model, latents, observations,
                                              derive_seed(seed, kJointPassSalt));
  return log_p - log_q;
}

}  // namespace

Value elbo_estimate(const Model& model, const ValueMap& observations,
                    GuideParams& params, std::uint64_t seed,
                    std::size_t mc_samples) {
  if (mc_samples < 1) throw InvalidParams("ELBO requires mc_samples >= 1");
  Value total(0.0);
  for (std::size_t k = 0; k < mc_samples; ++k) {
    total = total + elbo_sample(model, observations, params, derive_seed(seed, k));
  }
  return total / Value(static_cast<double>(mc_samples));
}

AdviResult advi_fit(const Model& model, const ValueMap& observations,
                    const ADVIConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) {
    throw InvalidParams("ADVI requires learning_rate > 0");
  }
  if (cfg.mc_samples < 1) throw InvalidParams("ADVI requires mc_samples >= 1");

  AdviResult result;
  if (cfg.steps == 0) return result;

  // Discovery pass populates the parameter set so every step can put the full
  // set on the tape.
  {
    GuideParams probe;
    elbo_estimate(model, observations, probe, derive_seed(cfg.seed, kDiscoverySalt),
                  1);
    for (const auto& name : probe.names()) result.params.get_or_init(name);
  }

  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;
  const std::size_t dim = result.params.size();
  std::vector<double> m(2 * dim, 0.0);
  std::vector<double> v(2 * dim, 0.0);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    Tape tape;
    GuideParams live;
    std::vector<Value> leaves;
    leaves.reserve(2 * dim);
    for (const auto& name : result.params.names()) {
      const GuideParam& frozen = result.params.at(name);
      GuideParam& p = live.get_or_init(name);
      p.mu = tape.leaf(frozen.mu.primal);
      p.log_sigma = tape.leaf(frozen.log_sigma.primal);
      leaves.push_back(p.mu);
      leaves.push_back(p.log_sigma);
    }

    const Value elbo = elbo_estimate(model, observations, live,
                                     derive_seed(cfg.seed, step), cfg.mc_samples);
    bool finite = std::isfinite(elbo.primal);
    std::vector<double> grads(leaves.size(), 0.0);
    if (finite) {
      tape.backward(elbo);
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        grads[i] = tape.adjoint(leaves[i]);
        if (!std::isfinite(grads[i])) finite = false;
      }
    }
    if (!finite) {
      result.nonfinite_step = step;
      return result;
    }

    result.elbo_history.push_back(elbo.primal);

    const double t = static_cast<double>(step + 1);
    const double m_corr = 1.0 - std::pow(kBeta1, t);
    const double v_corr = 1.0 - std::pow(kBeta2, t);
    for (std::size_t i = 0; i < dim; ++i) {
      GuideParam& p = result.params.at(result.params.names()[i]);
      double* scalars[2] = {&p.mu.primal, &p.log_sigma.primal};
      for (int k = 0; k < 2; ++k) {
        const std::size_t j = 2 * i + k;
        m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * grads[j];
        v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * grads[j] * grads[j];
        const double m_hat = m[j] / m_corr;
        const double v_hat = v[j] / v_corr;
        // Gradient ascent on the ELBO.
        *scalars[k] += cfg.learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEps);
      }
    }
  }
  return result;
}

}  // namespace handlebar
