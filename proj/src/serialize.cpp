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

#include "handlebar/serialize.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "handlebar/models.hpp"

namespace handlebar {

using json = nlohmann::ordered_json;

namespace {

// Non-finite doubles have no JSON number form; encode them as strings.
json json_number(double v) {
  if (std::isnan(v)) return json("nan");
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

void dump_line(std::ostream& out, const json& j) { out << j.dump() << "\n"; }

}  // namespace

std::string format_csv_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

void write_trace(std::ostream& out, const Trace& trace, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json sites = json::array();
    for (const auto& r : trace.records()) {
      sites.push_back({{"name", r.name},
                       {"value", json_number(r.value.primal)},
                       {"log_prob", json_number(r.log_prob.primal)},
                       {"observed", r.observed},
                       {"family", family_name(r.dist)}});
    }
    dump_line(out, json{{"sites", sites},
                        {"total_log_prob", json_number(trace.total_log_prob().primal)}});
    return;
  }
  out << "name,value,log_prob,observed,family\n";
  for (const auto& r : trace.records()) {
    out << r.name << "," << format_csv_number(r.value.primal) << ","
        << format_csv_number(r.log_prob.primal) << ","
        << (r.observed ? "true" : "false") << "," << family_name(r.dist) << "\n";
  }
}

void write_value_rows(std::ostream& out, const Trace& trace, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json values = json::object();
    for (const auto& r : trace.records()) values[r.name] = json_number(r.value.primal);
    dump_line(out, values);
    return;
  }
  out << "name,value\n";
  for (const auto& r : trace.records()) {
    out << r.name << "," << format_csv_number(r.value.primal) << "\n";
  }
}

void write_scalar(std::ostream& out, const std::string& key, double v,
                  OutputFormat format) {
  if (format == OutputFormat::kJson) {
    dump_line(out, json{{key, json_number(v)}});
    return;
  }
  out << format_csv_number(v) << "\n";
}

void write_posterior(std::ostream& out,
                     const std::vector<PosteriorSamples>& chains,
                     std::size_t burn_in, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    const auto chain_json = [](const PosteriorSamples& p) {
      json j = json::object();
      for (const auto& name : p.latent_names) {
        json column = json::array();
        for (double v : p.draws.at(name)) column.push_back(json_number(v));
        j[name] = column;
      }
      j["acceptance_rate"] = json_number(p.acceptance_rate);
      if (!p.warnings.empty()) j["warnings"] = p.warnings;
      return j;
    };
    if (chains.size() == 1) {
      dump_line(out, chain_json(chains[0]));
      return;
    }
    json all = json::array();
    for (const auto& chain : chains) all.push_back(chain_json(chain));
    dump_line(out, json{{"chains", all}});
    return;
  }

  out << "chain,step";
  for (const auto& name : chains[0].latent_names) out << "," << name;
  out << "\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& chain = chains[c];
    const std::size_t rows =
        chain.latent_names.empty()
            ? 0
            : chain.draws.at(chain.latent_names[0]).size();
    for (std::size_t i = 0; i < rows; ++i) {
      out << c << "," << burn_in + i;
      for (const auto& name : chain.latent_names) {
        out << "," << format_csv_number(chain.draws.at(name)[i]);
      }
      out << "\n";
    }
  }
}

void write_advi(std::ostream& out, const AdviResult& result, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json params = json::object();
    for (const auto& name : result.params.names()) {
      const GuideParam& p = result.params.at(name);
      params[name] = {{"mu", json_number(p.mu.primal)},
                      {"log_sigma", json_number(p.log_sigma.primal)}};
    }
    json history = json::array();
    for (std::size_t i = 0; i < result.elbo_history.size(); ++i) {
      history.push_back({{"step", i}, {"elbo", json_number(result.elbo_history[i])}});
    }
    json j{{"params", params}, {"elbo", history}};
    if (result.nonfinite_step.has_value()) {
      j["nonfinite_step"] = *result.nonfinite_step;
    }
    dump_line(out, j);
    return;
  }
  out << "step,elbo\n";
  for (std::size_t i = 0; i < result.elbo_history.size(); ++i) {
    out << i << "," << format_csv_number(result.elbo_history[i]) << "\n";
  }
  out << "\nname,mu,log_sigma\n";
  for (const auto& name : result.params.names()) {
    const GuideParam& p = result.params.at(name);
    out << name << "," << format_csv_number(p.mu.primal) << ","
        << format_csv_number(p.log_sigma.primal) << "\n";
  }
}

void write_model_list(std::ostream& out, OutputFormat format) {
  const auto joined = [](const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) {
      if (!s.empty()) s += ";";
      s += n;
    }
    return s;
  };
  if (format == OutputFormat::kJson) {
    json models = json::array();
    for (const auto& entry : model_registry()) {
      json hypers = json::object();
      for (const auto& [name, def] : entry.hyper_defaults) hypers[name] = def;
      models.push_back({{"name", entry.name},
                        {"latents", entry.latent_names},
                        {"observed", entry.observed_names},
                        {"hypers", hypers}});
    }
    dump_line(out, models);
    return;
  }
  out << "name,latents,observed,hypers\n";
  for (const auto& entry : model_registry()) {
    std::string hypers;
    for (const auto& [name, def] : entry.hyper_defaults) {
      if (!hypers.empty()) hypers += ";";
      hypers += name + "=" + format_csv_number(def);
    }
    out << entry.name << "," << joined(entry.latent_names) << ","
        << joined(entry.observed_names) << "," << hypers << "\n";
  }
}

void write_error(std::ostream& err, const std::string& kind,
                 const std::string& detail) {
  dump_line(err, json{{"error", kind}, {"detail", detail}});
}

}  // namespace handlebar
