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

// Python bindings over the registry models: density evaluation, gradients,
// forward runs, and the two inference drivers. All entry points take a model
// name plus plain dicts of doubles; library errors surface as HandlebarError
// with the message prefixed by the stable error kind.

#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "handlebar/handlers.hpp"
#include "handlebar/inference.hpp"
#include "handlebar/models.hpp"

namespace py = pybind11;
namespace hb = handlebar;

namespace {

using DoubleMap = std::map<std::string, double>;

hb::Model build_model(const std::string& name, const DoubleMap& hypers) {
  return hb::registry_lookup(name).builder(hypers);
}

hb::ValueMap to_values(const DoubleMap& values) {
  hb::ValueMap out;
  for (const auto& [name, v] : values) out[name] = hb::Value(v);
  return out;
}

hb::Trace forward_trace(const std::string& model, const DoubleMap& observed,
                        const DoubleMap& hypers, std::uint64_t seed) {
  const hb::Model m = build_model(model, hypers);
  hb::ExecutionContext ctx(seed);
  auto tracer = hb::make_trace();
  auto condition = hb::make_condition(to_values(observed));
  hb::with_handler(ctx, *tracer, [&] {
    hb::with_handler(ctx, *condition, [&] { m(ctx); });
  });
  return tracer->trace();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Effect-handler probabilistic programming runtime";

  static py::gil_safe_call_once_and_store<py::object> error_storage;
  error_storage.call_once_and_store_result(
      [&]() -> py::object { return py::exception<hb::Error>(m, "HandlebarError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hb::Error& e) {
      py::set_error(error_storage.get_stored(),
                    (e.kind() + ": " + e.what()).c_str());
    }
  });

  m.def(
      "list_models",
      [] {
        py::list out;
        for (const hb::ModelEntry& entry : hb::model_registry()) {
          py::dict d;
          d["name"] = entry.name;
          d["latents"] = entry.latent_names;
          d["observed"] = entry.observed_names;
          py::dict hypers;
          for (const auto& [name, def] : entry.hyper_defaults) {
            hypers[py::str(name)] = def;
          }
          d["hypers"] = hypers;
          out.append(d);
        }
        return out;
      },
      "Registry entries with latent/observed site names and hyper defaults.");

  m.def(
      "log_joint",
      [](const std::string& model, const DoubleMap& latents,
         const DoubleMap& observed, const DoubleMap& hypers, std::uint64_t seed) {
        return hb::log_joint(build_model(model, hypers), to_values(latents),
                             to_values(observed), seed)
            .primal;
      },
      py::arg("model"), py::arg("latents"), py::arg("observed"),
      py::arg("hypers") = DoubleMap{}, py::arg("seed") = 0,
      "Log joint density with every site pinned in constrained space.");

  m.def(
      "log_joint_unconstrained",
      [](const std::string& model, const DoubleMap& latents,
         const DoubleMap& observed, const DoubleMap& hypers, std::uint64_t seed) {
        return hb::log_joint_unconstrained(build_model(model, hypers),
                                           to_values(latents), to_values(observed),
                                           seed)
            .primal;
      },
      py::arg("model"), py::arg("latents"), py::arg("observed"),
      py::arg("hypers") = DoubleMap{}, py::arg("seed") = 0,
      "Jacobian-corrected log joint with latents given in unconstrained space.");

  m.def(
      "grad_log_joint_unconstrained",
      [](const std::string& model, const DoubleMap& latents,
         const DoubleMap& observed, const DoubleMap& hypers, std::uint64_t seed) {
        const hb::Model built = build_model(model, hypers);
        hb::Tape tape;
        hb::ValueMap leaves;
        for (const auto& [name, v] : latents) leaves[name] = tape.leaf(v);
        const hb::Value lp = hb::log_joint_unconstrained(
            built, leaves, to_values(observed), seed);
        tape.backward(lp);
        py::dict grads;
        for (const auto& [name, leaf] : leaves) {
          grads[py::str(name)] = tape.adjoint(leaf);
        }
        return py::make_tuple(lp.primal, grads);
      },
      py::arg("model"), py::arg("latents"), py::arg("observed"),
      py::arg("hypers") = DoubleMap{}, py::arg("seed") = 0,
      "Pair of (unconstrained log joint, dict of d log p / d latent).");

  m.def(
      "trace",
      [](const std::string& model, const DoubleMap& observed,
         const DoubleMap& hypers, std::uint64_t seed) {
        const hb::Trace trace = forward_trace(model, observed, hypers, seed);
        py::list sites;
        for (const hb::TraceRecord& r : trace.records()) {
          py::dict d;
          d["name"] = r.name;
          d["value"] = r.value.primal;
          d["log_prob"] = r.log_prob.primal;
          d["observed"] = r.observed;
          d["family"] = hb::family_name(r.dist);
          sites.append(d);
        }
        py::dict out;
        out["sites"] = sites;
        out["total_log_prob"] = trace.total_log_prob().primal;
        return out;
      },
      py::arg("model"), py::arg("observed") = DoubleMap{},
      py::arg("hypers") = DoubleMap{}, py::arg("seed") = 0,
      "One forward execution recorded site by site.");

  m.def(
      "sample",
      [](const std::string& model, const DoubleMap& observed,
         const DoubleMap& hypers, std::uint64_t seed) {
        const hb::Trace trace = forward_trace(model, observed, hypers, seed);
        py::dict out;
        for (const hb::TraceRecord& r : trace.records()) {
          out[py::str(r.name)] = r.value.primal;
        }
        return out;
      },
      py::arg("model"), py::arg("observed") = DoubleMap{},
      py::arg("hypers") = DoubleMap{}, py::arg("seed") = 0,
      "Site values of one forward execution.");

  m.def(
      "mh",
      [](const std::string& model, const DoubleMap& observed,
         const DoubleMap& hypers, std::size_t steps, std::size_t burn_in,
         double step_size, std::uint64_t seed) {
        hb::MHConfig cfg;
        cfg.steps = steps;
        cfg.burn_in = burn_in;
        cfg.step_size = step_size;
        cfg.seed = seed;
        const hb::PosteriorSamples posterior =
            hb::mh_run(build_model(model, hypers), to_values(observed), cfg);
        py::dict draws;
        for (const std::string& name : posterior.latent_names) {
          draws[py::str(name)] = posterior.draws.at(name);
        }
        py::dict out;
        out["latent_names"] = posterior.latent_names;
        out["draws"] = draws;
        out["acceptance_rate"] = posterior.acceptance_rate;
        out["warnings"] = posterior.warnings;
        return out;
      },
      py::arg("model"), py::arg("observed"), py::arg("hypers") = DoubleMap{},
      py::arg("steps") = 50000, py::arg("burn_in") = 5000,
      py::arg("step_size") = 0.5, py::arg("seed") = 0,
      "Random-walk Metropolis-Hastings; draws are in constrained space.");

  m.def(
      "advi",
      [](const std::string& model, const DoubleMap& observed,
         const DoubleMap& hypers, std::size_t steps, double learning_rate,
         std::size_t mc_samples, std::uint64_t seed) {
        hb::ADVIConfig cfg;
        cfg.steps = steps;
        cfg.learning_rate = learning_rate;
        cfg.mc_samples = mc_samples;
        cfg.seed = seed;
        const hb::AdviResult result =
            hb::advi_fit(build_model(model, hypers), to_values(observed), cfg);
        py::dict params;
        for (const std::string& name : result.params.names()) {
          const hb::GuideParam& p = result.params.at(name);
          py::dict entry;
          entry["mu"] = p.mu.primal;
          entry["log_sigma"] = p.log_sigma.primal;
          params[py::str(name)] = entry;
        }
        py::dict out;
        out["params"] = params;
        out["elbo"] = result.elbo_history;
        out["nonfinite_step"] = result.nonfinite_step.has_value()
                                    ? py::cast(*result.nonfinite_step)
                                    : py::none().cast<py::object>();
        return out;
      },
      py::arg("model"), py::arg("observed"), py::arg("hypers") = DoubleMap{},
      py::arg("steps") = 3000, py::arg("learning_rate") = 0.05,
      py::arg("mc_samples") = 1, py::arg("seed") = 0,
      "Mean-field ADVI fit in unconstrained space.");
}
