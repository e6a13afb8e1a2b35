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

#include "handlebar/special_functions.hpp"

#include <cmath>

#include "handlebar/errors.hpp"

namespace handlebar {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

}  // namespace

double lgamma(double z) {
  if (std::isnan(z)) throw DomainError("lgamma of NaN");
  if (z == 1.0 || z == 2.0) return 0.0;  // exact zeros of log-gamma
  if (z < 0.5) {
    if (z <= 0.0 && z == std::floor(z)) {
      throw DomainError("lgamma pole at non-positive integer");
    }
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(kPi / std::fabs(std::sin(kPi * z))) - lgamma(1.0 - z);
  }
  const double x = z - 1.0;
  double acc = kLanczosCoef[0];
  for (int i = 1; i < 9; ++i) acc += kLanczosCoef[i] / (x + i);
  const double t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(acc);
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma requires x > 0");
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series with Bernoulli numbers B2..B12.
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace handlebar
