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

#include "handlebar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <thread>
#include <utility>

#include <CLI11.hpp>

#include "handlebar/inference.hpp"
#include "handlebar/models.hpp"
#include "handlebar/rng.hpp"
#include "handlebar/serialize.hpp"

namespace handlebar {

namespace {

// Internal marker for problems with the request itself (exit code 2).
struct UsageFailure {
  std::string detail;
};

double parse_number(const std::string& text) {
  if (text.empty()) throw UsageFailure{"empty numeric value"};
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw UsageFailure{"malformed number '" + text + "'"};
  }
  if (!std::isfinite(v)) {
    throw UsageFailure{"value assignments must be finite, got '" + text + "'"};
  }
  return v;
}

std::map<std::string, double> parse_assignments(
    const std::vector<std::string>& items, const std::string& what) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageFailure{"malformed " + what + " assignment '" + item +
                         "'; expected name=value"};
    }
    const std::string key = item.substr(0, eq);
    if (!out.emplace(key, parse_number(item.substr(eq + 1))).second) {
      throw UsageFailure{"duplicate " + what + " assignment for '" + key + "'"};
    }
  }
  return out;
}

ValueMap to_value_map(const std::map<std::string, double>& values) {
  ValueMap out;
  for (const auto& [name, v] : values) out[name] = Value(v);
  return out;
}

// Strips the CLI-boundary "_u" suffix from unconstrained latent names.
ValueMap strip_unconstrained_suffix(const std::map<std::string, double>& values) {
  ValueMap out;
  for (const auto& [name, v] : values) {
    if (name.size() < 3 || name.substr(name.size() - 2) != "_u") {
      throw UsageFailure{"unconstrained latent '" + name +
                         "' must use the '_u' name suffix"};
    }
    out[name.substr(0, name.size() - 2)] = Value(v);
  }
  return out;
}

OutputFormat to_format(const std::string& name) {
  return name == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
}

struct CommandOptions {
  std::string model;
  std::vector<std::string> hyper;
  std::vector<std::string> latent;
  std::vector<std::string> observe;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool unconstrained = false;
  std::size_t steps = 0;
  std::size_t burn_in = 5000;
  double step_size = 0.5;
  double learning_rate = 0.05;
  std::size_t mc_samples = 1;
  std::size_t chains = 1;
};

void add_common_options(CLI::App* cmd, CommandOptions* opts, bool needs_model) {
  if (needs_model) {
    cmd->add_option("--model", opts->model, "Registry model name")->required();
    cmd->add_option("--hyper", opts->hyper,
                    "Model hyperparameter assignment name=value (repeatable)");
  }
  cmd->add_option("--seed", opts->seed, "PRNG seed")
      ->envname("HANDLEBAR_SEED")
      ->capture_default_str();
  cmd->add_option("--format", opts->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

Model build_model(const CommandOptions& opts) {
  const ModelEntry& entry = registry_lookup(opts.model);
  return entry.builder(parse_assignments(opts.hyper, "hyperparameter"));
}

Trace run_forward_trace(const Model& model, const ValueMap& observations,
                        std::uint64_t seed) {
  ExecutionContext ctx(seed);
  auto tracer = make_trace();
  auto condition = make_condition(observations);
  with_handler(ctx, *tracer, [&] {
    with_handler(ctx, *condition, [&] { model(ctx); });
  });
  return tracer->trace();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"handlebar: effect-handler probabilistic programming runtime"};
  app.require_subcommand(1);

  CommandOptions sample_opts;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "Run the model forward once and print site values");
  add_common_options(sample_cmd, &sample_opts, true);
  sample_cmd->add_option("--observe", sample_opts.observe,
                         "Observation assignment name=value (repeatable)");

  CommandOptions trace_opts;
  CLI::App* trace_cmd =
      app.add_subcommand("trace", "Run the model forward once and print the trace");
  add_common_options(trace_cmd, &trace_opts, true);
  trace_cmd->add_option("--observe", trace_opts.observe,
                        "Observation assignment name=value (repeatable)");

  CommandOptions logprob_opts;
  CLI::App* logprob_cmd = app.add_subcommand(
      "logprob", "Evaluate the log joint density at pinned values");
  add_common_options(logprob_cmd, &logprob_opts, true);
  logprob_cmd->add_option("--latent", logprob_opts.latent,
                          "Latent assignment name=value (repeatable)");
  logprob_cmd->add_option("--observe", logprob_opts.observe,
                          "Observation assignment name=value (repeatable)");
  logprob_cmd->add_flag("--unconstrained", logprob_opts.unconstrained,
                        "Latents are unconstrained-space values named with a _u suffix");

  CommandOptions mh_opts;
  mh_opts.steps = 50000;
  CLI::App* mh_cmd =
      app.add_subcommand("mh", "Random-walk Metropolis-Hastings posterior sampling");
  add_common_options(mh_cmd, &mh_opts, true);
  mh_cmd->add_option("--observe", mh_opts.observe,
                     "Observation assignment name=value (repeatable)");
  mh_cmd->add_option("--steps", mh_opts.steps, "Total MH steps")
      ->capture_default_str();
  mh_cmd->add_option("--burn-in", mh_opts.burn_in, "Discarded initial steps")
      ->capture_default_str();
  mh_cmd->add_option("--step-size", mh_opts.step_size, "Proposal stddev")
      ->capture_default_str();
  mh_cmd->add_option("--chains", mh_opts.chains, "Independent parallel chains")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CommandOptions advi_opts;
  advi_opts.steps = 3000;
  CLI::App* advi_cmd = app.add_subcommand("advi", "Mean-field ADVI fit");
  add_common_options(advi_cmd, &advi_opts, true);
  advi_cmd->add_option("--observe", advi_opts.observe,
                       "Observation assignment name=value (repeatable)");
  advi_cmd->add_option("--steps", advi_opts.steps, "Optimizer steps")
      ->capture_default_str();
  advi_cmd->add_option("--learning-rate", advi_opts.learning_rate, "Adam step size")
      ->capture_default_str();
  advi_cmd->add_option("--mc-samples", advi_opts.mc_samples,
                       "ELBO samples per step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CommandOptions list_opts;
  CLI::App* list_cmd = app.add_subcommand("list-models", "List registry models");
  add_common_options(list_cmd, &list_opts, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return 2;
  }

  // Build phase: problems constructing the request are usage errors (exit 2).
  std::function<int()> action;
  try {
    if (sample_cmd->parsed() || trace_cmd->parsed()) {
      const bool full_trace = trace_cmd->parsed();
      const CommandOptions& opts = full_trace ? trace_opts : sample_opts;
      Model model = build_model(opts);
      ValueMap observations = to_value_map(parse_assignments(opts.observe, "observation"));
      const OutputFormat format = to_format(opts.format);
      const std::uint64_t seed = opts.seed;
      action = [&out, model = std::move(model), observations = std::move(observations),
                format, seed, full_trace] {
        const Trace trace = run_forward_trace(model, observations, seed);
        if (full_trace) {
          write_trace(out, trace, format);
        } else {
          write_value_rows(out, trace, format);
        }
        return 0;
      };
    } else if (logprob_cmd->parsed()) {
      Model model = build_model(logprob_opts);
      const auto raw_latents = parse_assignments(logprob_opts.latent, "latent");
      ValueMap latents = logprob_opts.unconstrained
                             ? strip_unconstrained_suffix(raw_latents)
                             : to_value_map(raw_latents);
      ValueMap observations =
          to_value_map(parse_assignments(logprob_opts.observe, "observation"));
      const OutputFormat format = to_format(logprob_opts.format);
      const std::uint64_t seed = logprob_opts.seed;
      const bool unconstrained = logprob_opts.unconstrained;
      action = [&out, model = std::move(model), latents = std::move(latents),
                observations = std::move(observations), format, seed, unconstrained] {
        const Value lp = unconstrained
                             ? log_joint_unconstrained(model, latents, observations, seed)
                             : log_joint(model, latents, observations, seed);
        write_scalar(out, "log_prob", lp.primal, format);
        return 0;
      };
    } else if (mh_cmd->parsed()) {
      Model model = build_model(mh_opts);
      ValueMap observations =
          to_value_map(parse_assignments(mh_opts.observe, "observation"));
      const CommandOptions opts = mh_opts;
      action = [&out, model = std::move(model), observations = std::move(observations),
                opts] {
        std::vector<PosteriorSamples> chains(opts.chains);
        std::vector<std::exception_ptr> failures(opts.chains);
        const auto run_chain = [&](std::size_t c) {
          try {
            MHConfig cfg;
            cfg.steps = opts.steps;
            cfg.burn_in = opts.burn_in;
            cfg.step_size = opts.step_size;
            cfg.seed = opts.chains == 1 ? opts.seed : derive_seed(opts.seed, c);
            chains[c] = mh_run(model, observations, cfg);
          } catch (...) {
            failures[c] = std::current_exception();
          }
        };
        if (opts.chains == 1) {
          run_chain(0);
        } else {
          std::vector<std::thread> workers;
          workers.reserve(opts.chains);
          for (std::size_t c = 0; c < opts.chains; ++c) {
            workers.emplace_back(run_chain, c);
          }
          for (auto& w : workers) w.join();
        }
        for (const auto& failure : failures) {
          if (failure) std::rethrow_exception(failure);
        }
        write_posterior(out, chains, opts.burn_in, to_format(opts.format));
        return 0;
      };
    } else if (advi_cmd->parsed()) {
      Model model = build_model(advi_opts);
      ValueMap observations =
          to_value_map(parse_assignments(advi_opts.observe, "observation"));
      const CommandOptions opts = advi_opts;
      action = [&out, &err, model = std::move(model),
                observations = std::move(observations), opts] {
        ADVIConfig cfg;
        cfg.steps = opts.steps;
        cfg.learning_rate = opts.learning_rate;
        cfg.mc_samples = opts.mc_samples;
        cfg.seed = opts.seed;
        const AdviResult result = advi_fit(model, observations, cfg);
        write_advi(out, result, to_format(opts.format));
        if (result.nonfinite_step.has_value()) {
          write_error(err, "NonFinite",
                      "ELBO or gradient became non-finite at step " +
                          std::to_string(*result.nonfinite_step));
          return 1;
        }
        return 0;
      };
    } else {
      const OutputFormat format = to_format(list_opts.format);
      action = [&out, format] {
        write_model_list(out, format);
        return 0;
      };
    }
  } catch (const UsageFailure& e) {
    write_error(err, "usage", e.detail);
    return 2;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return 2;
  }

  // Run phase: execution failures are runtime errors (exit 1).
  try {
    return action();
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return 1;
  }
}

}  // namespace handlebar
