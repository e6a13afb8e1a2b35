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

#include "handlebar/effects.hpp"

#include "handlebar/rng.hpp"

namespace handlebar {

SiteResult Forwarder::forward(SampleSite site) {
  if (used_) {
    throw HandlerProtocolError(
        "forward/direct may be called at most once per intercepted site");
  }
  used_ = true;
  if (level_ == 0) return ctx_->base_execute(std::move(site));
  return ctx_->dispatch(std::move(site), level_ - 1);
}

SiteResult Forwarder::direct(SampleSite site) {
  if (used_) {
    throw HandlerProtocolError(
        "forward/direct may be called at most once per intercepted site");
  }
  used_ = true;
  return ctx_->base_execute(std::move(site));
}

SiteResult ExecutionContext::perform(SampleSite site) {
  if (site.name.empty()) {
    throw HandlerProtocolError("site name must be non-empty");
  }
  if (site.observed && !site.pinned_value.has_value()) {
    throw HandlerProtocolError("observed site '" + site.name +
                               "' must carry a pinned value");
  }
  if (!performed_.insert(site.name).second) {
    throw DuplicateName(site.name);
  }
  if (stack_.empty()) return base_execute(std::move(site));
  return dispatch(std::move(site), stack_.size() - 1);
}

void ExecutionContext::push_handler(Handler* h) {
  if (h == nullptr) throw HandlerProtocolError("cannot push a null handler");
  stack_.push_back(h);
}

void ExecutionContext::pop_handler(Handler* h) {
  if (stack_.empty() || stack_.back() != h) {
    throw HandlerProtocolError("handler stack popped out of order");
  }
  stack_.pop_back();
}

SiteResult ExecutionContext::dispatch(SampleSite site, std::size_t level) {
  Forwarder fwd(this, level);
  return stack_[level]->intercept(site, fwd);
}

SiteResult ExecutionContext::base_execute(SampleSite site) {
  // The visit ordinal advances even for pinned sites so that positionally
  // later sites keep their streams when upstream ones become observed.
  const std::uint64_t ordinal = ordinal_++;
  if (site.pinned_value.has_value()) {
    const Value v = *site.pinned_value;
    return SiteResult{v, std::move(site)};
  }
  SiteRng rng(seed_, ordinal);
  const Value v = sample(site.dist, rng);
  site.pinned_value = v;
  return SiteResult{v, std::move(site)};
}

}  // namespace handlebar
