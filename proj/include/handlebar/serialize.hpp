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

#include <ostream>
#include <string>
#include <vector>

#include "handlebar/handlers.hpp"
#include "handlebar/inference.hpp"

namespace handlebar {

enum class OutputFormat { kCsv, kJson };

// CSV cells carry 6 decimal places; JSON numbers serialize at full (shortest
// round-trip) precision.
std::string format_csv_number(double v);

void write_trace(std::ostream& out, const Trace& trace, OutputFormat format);
void write_value_rows(std::ostream& out, const Trace& trace, OutputFormat format);
void write_scalar(std::ostream& out, const std::string& key, double v,
                  OutputFormat format);
void write_posterior(std::ostream& out,
                     const std::vector<PosteriorSamples>& chains,
                     std::size_t burn_in, OutputFormat format);
void write_advi(std::ostream& out, const AdviResult& result, OutputFormat format);
void write_model_list(std::ostream& out, OutputFormat format);
void write_error(std::ostream& err, const std::string& kind,
                 const std::string& detail);

}  // namespace handlebar
