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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace handlebar {

class Tape;

// Scalar value for reverse-mode autodiff. A Value is either a constant
// (tape == nullptr) or a reference to a node on some tape. Doubles convert
// implicitly, so plain literals participate in Value arithmetic as constants
// without growing the tape.
struct Value {
  double primal = 0.0;
  Tape* tape = nullptr;
  std::int32_t node = -1;

  Value() = default;
  Value(double p) : primal(p) {}  // NOLINT(google-explicit-constructor)

  bool constant() const { return tape == nullptr; }
};

// Growable record of elementary operations. Nodes store parent indices and the
// local partial derivatives; a backward pass is a single reverse sweep, O(n).
// Tapes are owned per evaluation and must not be shared across threads.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Value leaf(double primal);
  Value record_unary(const Value& a, double grad_a, double primal);
  Value record_binary(const Value& a, const Value& b, double grad_a,
                      double grad_b, double primal);

  // Accumulates adjoints of every node reachable from `output`, seeding
  // d output / d output = 1. A constant output zeroes all adjoints.
  void backward(const Value& output);

  // Adjoint of `v` after backward(); constants have adjoint 0.
  double adjoint(const Value& v) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::int32_t parent[2];
    double weight[2];
  };

  std::int32_t push(const Node& node);

  std::vector<Node> nodes_;
  std::vector<double> adjoints_;
};

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Value& a, const Value& b);
Value operator/(const Value& a, const Value& b);
Value operator-(const Value& a);

Value log(const Value& x);
Value exp(const Value& x);
Value sqrt(const Value& x);
Value pow(const Value& base, const Value& exponent);
Value sigmoid(const Value& x);
Value softplus(const Value& x);
Value lgamma(const Value& x);

// Gradient of a scalar function by one forward evaluation plus one backward
// sweep over a tape local to this call.
std::vector<double> gradient(
    const std::function<Value(const std::vector<Value>&)>& f,
    const std::vector<double>& x);

}  // namespace handlebar
