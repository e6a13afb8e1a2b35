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
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "handlebar/autodiff.hpp"
#include "handlebar/distributions.hpp"
#include "handlebar/errors.hpp"

namespace handlebar {

// One random-variable construction request: the (distribution, name) pair of a
// sample statement, plus the pinned value when an upstream handler has fixed
// the outcome.
struct SampleSite {
  std::string name;
  DistributionSpec dist;
  std::optional<Value> pinned_value;
  bool observed = false;
};

// The realized site: the value handed back to the model plus the site as
// finally executed (post any handler rewriting, pinned_value always set).
struct SiteResult {
  Value value;
  SampleSite site;
};

class ExecutionContext;
class Forwarder;

// Interceptor contract. intercept() must resolve the site by calling the
// forwarder (at most once) or by synthesizing a result itself. The on_enter /
// on_finish hooks run when a with_handler scope starts and completes normally.
class Handler {
 public:
  virtual ~Handler() = default;
  virtual SiteResult intercept(const SampleSite& site, Forwarder& fwd) = 0;
  virtual void on_enter(ExecutionContext&) {}
  virtual void on_finish(ExecutionContext&) {}
};

// Capability handed to a handler for resolving a site. forward() delivers the
// site to the next-outer handler (visible to it and everything above);
// direct() runs the base sampling behavior immediately, invisible to outer
// handlers. At most one of the two may be called, once.
class Forwarder {
 public:
  SiteResult forward(SampleSite site);
  SiteResult direct(SampleSite site);

 private:
  friend class ExecutionContext;
  Forwarder(ExecutionContext* ctx, std::size_t level) : ctx_(ctx), level_(level) {}

  ExecutionContext* ctx_;
  std::size_t level_;
  bool used_ = false;
};

// Owns the handler stack, the per-execution PRNG keying, and duplicate-name
// detection. One context serves one single-threaded model execution; create a
// fresh context per run (parallel chains use independent contexts).
class ExecutionContext {
 public:
  explicit ExecutionContext(std::uint64_t seed) : seed_(seed) {}
  ExecutionContext(const ExecutionContext&) = delete;
  ExecutionContext& operator=(const ExecutionContext&) = delete;

  // Entry point used by model code: dispatches the site to the innermost
  // handler, or to base_execute when the stack is empty.
  SiteResult perform(SampleSite site);

  std::uint64_t seed() const { return seed_; }
  std::size_t handler_depth() const { return stack_.size(); }

  // Stack maintenance; use with_handler() rather than calling these directly.
  void push_handler(Handler* h);
  void pop_handler(Handler* h);

 private:
  friend class Forwarder;

  SiteResult dispatch(SampleSite site, std::size_t level);
  SiteResult base_execute(SampleSite site);

  std::vector<Handler*> stack_;
  std::unordered_set<std::string> performed_;
  std::uint64_t seed_;
  std::uint64_t ordinal_ = 0;
};

// Runs body with h pushed innermost on the stack; the stack is restored on
// both normal and exceptional exit, and h.on_finish runs (after restoration)
// only when body completes normally.
template <typename Body>
auto with_handler(ExecutionContext& ctx, Handler& h, Body&& body) {
  struct Guard {
    ExecutionContext* ctx;
    Handler* h;
    bool active = true;
    void release() {
      active = false;
      ctx->pop_handler(h);
    }
    ~Guard() {
      if (active) ctx->pop_handler(h);
    }
  };

  ctx.push_handler(&h);
  Guard guard{&ctx, &h};
  h.on_enter(ctx);
  using R = std::invoke_result_t<Body&&>;
  if constexpr (std::is_void_v<R>) {
    std::forward<Body>(body)();
    guard.release();
    h.on_finish(ctx);
  } else {
    R result = std::forward<Body>(body)();
    guard.release();
    h.on_finish(ctx);
    return result;
  }
}

// Model-facing sugar: perform a site and return its realized value.
inline Value sample(ExecutionContext& ctx, std::string name,
                    DistributionSpec dist) {
  return ctx.perform(SampleSite{std::move(name), std::move(dist), std::nullopt,
                                false})
      .value;
}

// A model is a computation performing sites against a context.
using Model = std::function<Value(ExecutionContext&)>;

}  // namespace handlebar
