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
#include <string>

namespace handlebar {

// Support descriptor of a distribution. kTransformed marks a pushforward
// support that does not simplify to one of the canonical supports.
struct Support {
  enum class Kind {
    kUnitInterval,
    kIntegerRange,
    kRealLine,
    kPositiveReals,
    kTransformed,
  };

  Kind kind = Kind::kRealLine;
  // Inclusive bounds, meaningful for kIntegerRange only.
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool discrete() const { return kind == Kind::kIntegerRange; }
};

std::string support_name(const Support& s);

}  // namespace handlebar
