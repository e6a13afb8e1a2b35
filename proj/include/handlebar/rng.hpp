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

namespace handlebar {

// Counter-based splittable PRNG. Every random-variable site gets its own
// stream keyed by (seed, site-visit ordinal), so draws stay reproducible even
// when handlers add or remove draws elsewhere, as long as site order is
// stable.

// splitmix64 step: advances the state and returns a scrambled output word.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Derives an independent stream seed from (seed, salt). Used to decouple
// e.g. MH proposal noise from model-site draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

class SiteRng {
 public:
  SiteRng(std::uint64_t seed, std::uint64_t ordinal);

  std::uint64_t next_u64();

  // Uniform draw strictly inside (0, 1).
  double uniform();

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double normal();

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace handlebar
