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
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "handlebar/effects.hpp"

namespace handlebar {

using ValueMap = std::map<std::string, Value>;

struct TraceRecord {
  std::string name;
  Value value;
  Value log_prob;
  bool observed = false;
  DistributionSpec dist;
};

// Ordered mapping name -> TraceRecord; insertion order equals execution order.
class Trace {
 public:
  void insert(TraceRecord record);
  bool contains(const std::string& name) const;
  const TraceRecord& at(const std::string& name) const;
  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  Value total_log_prob() const;

 private:
  std::vector<TraceRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Shared implementation of condition and substitute: pins listed sites and
// forwards, raising at scope exit if any listed name was never met. condition
// additionally marks pinned sites observed.
class PinHandler : public Handler {
 public:
  PinHandler(ValueMap values, bool mark_observed);
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;
  void on_enter(ExecutionContext&) override;
  void on_finish(ExecutionContext&) override;

 private:
  ValueMap values_;
  bool mark_observed_;
  std::unordered_set<std::string> seen_;
};

std::unique_ptr<PinHandler> make_condition(ValueMap values);
std::unique_ptr<PinHandler> make_substitute(ValueMap values);

// Records every forwarded site into a Trace, including the log density of the
// realized value under the final (possibly rewritten) distribution.
class TraceHandler : public Handler {
 public:
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;
  void on_enter(ExecutionContext&) override;
  const Trace& trace() const { return trace_; }

 private:
  Trace trace_;
};

std::unique_ptr<TraceHandler> make_trace();

// Outermost accumulator used by log_joint: requires every site to arrive
// pinned and sums the log densities. A -inf contribution aborts the execution
// (log_joint catches the abort and reports -inf), so model code never runs on
// values outside a prior's support.
class LogJointAccumulator : public Handler {
 public:
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;
  void on_enter(ExecutionContext&) override;
  const Value& total() const { return total_; }
  bool saw_minus_inf() const { return minus_inf_; }

 private:
  Value total_ = Value(0.0);
  bool minus_inf_ = false;
};

namespace detail {
// Internal control-flow exception: thrown by LogJointAccumulator on a -inf
// site contribution, caught inside log_joint.
struct LogJointAbort {};
}  // namespace detail

// Reparameterizes continuous constrained sites onto the real line: a site with
// support s and constraining bijector b is forwarded (visibly to outer
// handlers) as Transformed(base, Invert(b)) under the same name, and the model
// receives b.forward(unconstrained value). Observed, discrete, real-line, and
// non-canonical sites pass through unchanged. Pinned values are given in
// constrained space and are mapped through b.inverse for the forwarded site.
class UnconstrainHandler : public Handler {
 public:
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;
};

std::unique_ptr<UnconstrainHandler> make_unconstrain();

// Rewrites each latent Normal(mu, sigma) site s into a standard-normal site
// s + "_std", returning mu + sigma * draw to the model. Observed and
// non-Normal sites pass through.
class NoncenterHandler : public Handler {
 public:
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;
};

std::unique_ptr<NoncenterHandler> make_noncenter();

struct GuideParam {
  Value mu = Value(0.0);
  Value log_sigma = Value(0.0);
};

// Insertion-ordered mapping name -> (mu, log_sigma) of the mean-field guide.
class GuideParams {
 public:
  GuideParam& get_or_init(const std::string& name);
  bool contains(const std::string& name) const;
  GuideParam& at(const std::string& name);
  const GuideParam& at(const std::string& name) const;
  const std::vector<std::string>& names() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, GuideParam> map_;
};

// Mean-field variational guide: every latent site (which must be real-line
// supported, i.e. the handler runs outside unconstrain) is realized from
// Normal(mu, exp(log_sigma)), with parameters lazily initialized to (0, 0).
// Observed sites pass through untouched.
class GuideHandler : public Handler {
 public:
  explicit GuideHandler(GuideParams& params) : params_(&params) {}
  SiteResult intercept(const SampleSite& site, Forwarder& fwd) override;

 private:
  GuideParams* params_;
};

std::unique_ptr<GuideHandler> make_mean_field_guide(GuideParams& params);

// Log joint density of the model at the pinned values: runs the model under
// substitute(latents) / condition(observations) with the accumulator
// outermost. Latent Values may live on a tape; the result then carries
// gradients. Key sets must be disjoint; a site left unpinned raises
// MissingValue.
Value log_joint(const Model& model, const ValueMap& latents,
                const ValueMap& observations, std::uint64_t seed = 0);

// Same, but with unconstrain between the pinning handlers, so latent values
// are given in unconstrained space and densities include the Jacobian
// correction. Stack outermost to innermost: accumulate, substitute,
// unconstrain, condition.
Value log_joint_unconstrained(const Model& model, const ValueMap& latents,
                              const ValueMap& observations,
                              std::uint64_t seed = 0);

}  // namespace handlebar
