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

#include "handlebar/handlers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "handlebar/bijectors.hpp"

namespace handlebar {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void Trace::insert(TraceRecord record) {
  if (!index_.emplace(record.name, records_.size()).second) {
    throw DuplicateName(record.name);
  }
  records_.push_back(std::move(record));
}

bool Trace::contains(const std::string& name) const {
  return index_.count(name) > 0;
}

const TraceRecord& Trace::at(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) {
    throw UnknownName("trace has no record named '" + name + "'");
  }
  return records_[it->second];
}

Value Trace::total_log_prob() const {
  Value total(0.0);
  for (const auto& r : records_) total = total + r.log_prob;
  return total;
}

PinHandler::PinHandler(ValueMap values, bool mark_observed)
    : values_(std::move(values)), mark_observed_(mark_observed) {}

SiteResult PinHandler::intercept(const SampleSite& site, Forwarder& fwd) {
  const auto it = values_.find(site.name);
  if (it == values_.end()) return fwd.forward(site);
  seen_.insert(site.name);
  SampleSite pinned = site;
  pinned.pinned_value = it->second;
  pinned.observed = mark_observed_ || site.observed;
  return fwd.forward(std::move(pinned));
}

void PinHandler::on_enter(ExecutionContext&) { seen_.clear(); }

void PinHandler::on_finish(ExecutionContext&) {
  std::vector<std::string> unused;
  for (const auto& [name, value] : values_) {
    if (seen_.count(name) == 0) unused.push_back(name);
  }
  if (unused.empty()) return;
  if (mark_observed_) throw UnusedCondition(std::move(unused));
  throw UnusedSubstitution(std::move(unused));
}

std::unique_ptr<PinHandler> make_condition(ValueMap values) {
  return std::make_unique<PinHandler>(std::move(values), true);
}

std::unique_ptr<PinHandler> make_substitute(ValueMap values) {
  return std::make_unique<PinHandler>(std::move(values), false);
}

SiteResult TraceHandler::intercept(const SampleSite& site, Forwarder& fwd) {
  SiteResult result = fwd.forward(site);
  trace_.insert(TraceRecord{result.site.name, result.value,
                            log_prob(result.site.dist, result.value),
                            result.site.observed, result.site.dist});
  return result;
}

void TraceHandler::on_enter(ExecutionContext&) { trace_ = Trace(); }

std::unique_ptr<TraceHandler> make_trace() {
  return std::make_unique<TraceHandler>();
}

SiteResult LogJointAccumulator::intercept(const SampleSite& site,
                                          Forwarder& fwd) {
  if (!site.pinned_value.has_value()) throw MissingValue(site.name);
  SiteResult result = fwd.forward(site);
  const Value lp = log_prob(result.site.dist, result.value);
  if (lp.primal == -kInf) {
    minus_inf_ = true;
    throw detail::LogJointAbort{};
  }
  total_ = total_ + lp;
  return result;
}

void LogJointAccumulator::on_enter(ExecutionContext&) {
  total_ = Value(0.0);
  minus_inf_ = false;
}

SiteResult UnconstrainHandler::intercept(const SampleSite& site,
                                         Forwarder& fwd) {
  if (site.observed) return fwd.forward(site);
  const Support support = support_of(site.dist);
  if (support.kind != Support::Kind::kUnitInterval &&
      support.kind != Support::Kind::kPositiveReals) {
    return fwd.forward(site);
  }
  const BijectorPtr b = constraining_transform(support);
  SampleSite transformed;
  transformed.name = site.name;
  transformed.dist = Transformed(site.dist, invert(b));
  transformed.observed = site.observed;
  if (site.pinned_value.has_value()) {
    transformed.pinned_value = b->inverse(*site.pinned_value);
  }
  SiteResult outer = fwd.forward(std::move(transformed));
  const Value constrained = b->forward(outer.value);
  SampleSite realized = site;
  realized.pinned_value = constrained;
  return SiteResult{constrained, std::move(realized)};
}

std::unique_ptr<UnconstrainHandler> make_unconstrain() {
  return std::make_unique<UnconstrainHandler>();
}

SiteResult NoncenterHandler::intercept(const SampleSite& site, Forwarder& fwd) {
  if (site.observed || !std::holds_alternative<NormalDist>(site.dist.dist)) {
    return fwd.forward(site);
  }
  const auto& normal = std::get<NormalDist>(site.dist.dist);
  SampleSite std_site;
  std_site.name = site.name + "_std";
  std_site.dist = Normal(0.0, 1.0);
  if (site.pinned_value.has_value()) {
    std_site.pinned_value = (*site.pinned_value - normal.mu) / normal.sigma;
  }
  SiteResult outer = fwd.forward(std::move(std_site));
  const Value value = normal.mu + normal.sigma * outer.value;
  SampleSite realized = site;
  realized.pinned_value = value;
  return SiteResult{value, std::move(realized)};
}

std::unique_ptr<NoncenterHandler> make_noncenter() {
  return std::make_unique<NoncenterHandler>();
}

GuideParam& GuideParams::get_or_init(const std::string& name) {
  const auto it = map_.find(name);
  if (it != map_.end()) return it->second;
  order_.push_back(name);
  return map_[name];
}

bool GuideParams::contains(const std::string& name) const {
  return map_.count(name) > 0;
}

GuideParam& GuideParams::at(const std::string& name) {
  const auto it = map_.find(name);
  if (it == map_.end()) throw UnknownName("no guide parameter named '" + name + "'");
  return it->second;
}

const GuideParam& GuideParams::at(const std::string& name) const {
  const auto it = map_.find(name);
  if (it == map_.end()) throw UnknownName("no guide parameter named '" + name + "'");
  return it->second;
}

SiteResult GuideHandler::intercept(const SampleSite& site, Forwarder& fwd) {
  if (site.observed) return fwd.forward(site);
  if (support_of(site.dist).kind != Support::Kind::kRealLine) {
    throw ConstrainedLatent(site.name);
  }
  GuideParam& param = params_->get_or_init(site.name);
  SampleSite guided = site;
  guided.dist = Normal(param.mu, exp(param.log_sigma));
  return fwd.forward(std::move(guided));
}

std::unique_ptr<GuideHandler> make_mean_field_guide(GuideParams& params) {
  return std::make_unique<GuideHandler>(params);
}

namespace {

void check_disjoint(const ValueMap& latents, const ValueMap& observations) {
  std::vector<std::string> overlap;
  for (const auto& [name, value] : latents) {
    if (observations.count(name) > 0) overlap.push_back(name);
  }
  if (!overlap.empty()) {
    throw DisjointnessError("latent and observation maps share keys: " +
                            detail::join_names(overlap));
  }
}

}  // namespace

Value log_joint(const Model& model, const ValueMap& latents,
                const ValueMap& observations, std::uint64_t seed) {
  check_disjoint(latents, observations);
  ExecutionContext ctx(seed);
  LogJointAccumulator accumulate;
  auto substitute = make_substitute(latents);
  auto condition = make_condition(observations);
  try {
    with_handler(ctx, accumulate, [&] {
      with_handler(ctx, *substitute, [&] {
        with_handler(ctx, *condition, [&] { model(ctx); });
      });
    });
  } catch (const detail::LogJointAbort&) {
    return Value(-kInf);
  }
  return accumulate.total();
}

Value log_joint_unconstrained(const Model& model, const ValueMap& latents,
                              const ValueMap& observations,
                              std::uint64_t seed) {
  check_disjoint(latents, observations);
  ExecutionContext ctx(seed);
  LogJointAccumulator accumulate;
  auto substitute = make_substitute(latents);
  auto unconstrain = make_unconstrain();
  auto condition = make_condition(observations);
  try {
    with_handler(ctx, accumulate, [&] {
      with_handler(ctx, *substitute, [&] {
        with_handler(ctx, *unconstrain, [&] {
          with_handler(ctx, *condition, [&] { model(ctx); });
        });
      });
    });
  } catch (const detail::LogJointAbort&) {
    return Value(-kInf);
  }
  return accumulate.total();
}

}  // namespace handlebar
