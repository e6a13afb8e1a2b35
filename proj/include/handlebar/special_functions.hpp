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

namespace handlebar {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLog2Pi = 1.83787706640934548356065947281123527;

// Log-gamma via the Lanczos approximation (g = 7, 9 coefficients), with the
// reflection formula below 0.5. Relative accuracy better than 1e-12 on
// [0.5, 100]. Throws DomainError at non-positive integers (poles).
double lgamma(double z);

// Digamma psi(x) = d/dx lgamma(x) for x > 0, by the ascending recurrence up to
// x >= 6 followed by a 6-term asymptotic series. Accuracy ~1e-10 on [0.1, 100].
double digamma(double x);

// Numerically stable logistic function and softplus(x) = log(1 + e^x).
double sigmoid(double x);
double softplus(double x);

}  // namespace handlebar
