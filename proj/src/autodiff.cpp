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

#include "handlebar/autodiff.hpp"

#include <cmath>
#include <limits>

#include "handlebar/errors.hpp"
#include "handlebar/special_functions.hpp"

namespace handlebar {

namespace {

// Resolves the tape shared by two operands, rejecting mixed tapes.
Tape* tape_of(const Value& a, const Value& b) {
  if (a.tape != nullptr && b.tape != nullptr && a.tape != b.tape) {
    throw TapeMismatch("operands recorded on different tapes");
  }
  return a.tape != nullptr ? a.tape : b.tape;
}

Value unary(const Value& a, double grad, double primal) {
  if (a.constant()) return Value(primal);
  return a.tape->record_unary(a, grad, primal);
}

Value binary(const Value& a, const Value& b, double grad_a, double grad_b,
             double primal) {
  Tape* tape = tape_of(a, b);
  if (tape == nullptr) return Value(primal);
  return tape->record_binary(a, b, grad_a, grad_b, primal);
}

}  // namespace

Value Tape::leaf(double primal) {
  Value v(primal);
  v.tape = this;
  v.node = push(Node{{-1, -1}, {0.0, 0.0}});
  return v;
}

Value Tape::record_unary(const Value& a, double grad_a, double primal) {
  Value v(primal);
  v.tape = this;
  v.node = push(Node{{a.node, -1}, {grad_a, 0.0}});
  return v;
}

Value Tape::record_binary(const Value& a, const Value& b, double grad_a,
                          double grad_b, double primal) {
  Value v(primal);
  v.tape = this;
  v.node = push(Node{{a.constant() ? -1 : a.node, b.constant() ? -1 : b.node},
                     {grad_a, grad_b}});
  return v;
}

std::int32_t Tape::push(const Node& node) {
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

void Tape::backward(const Value& output) {
  adjoints_.assign(nodes_.size(), 0.0);
  if (output.constant()) return;
  if (output.tape != this) {
    throw TapeMismatch("backward called with a value from another tape");
  }
  adjoints_[output.node] = 1.0;
  for (std::int32_t i = output.node; i >= 0; --i) {
    const double a = adjoints_[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    for (int k = 0; k < 2; ++k) {
      if (n.parent[k] >= 0) adjoints_[n.parent[k]] += n.weight[k] * a;
    }
  }
}

double Tape::adjoint(const Value& v) const {
  if (v.constant()) return 0.0;
  if (v.tape != this) {
    throw TapeMismatch("adjoint queried for a value from another tape");
  }
  if (static_cast<std::size_t>(v.node) >= adjoints_.size()) {
    throw HandlerProtocolError("adjoint queried before backward()");
  }
  return adjoints_[v.node];
}

Value operator+(const Value& a, const Value& b) {
  return binary(a, b, 1.0, 1.0, a.primal + b.primal);
}

Value operator-(const Value& a, const Value& b) {
  return binary(a, b, 1.0, -1.0, a.primal - b.primal);
}

Value operator*(const Value& a, const Value& b) {
  return binary(a, b, b.primal, a.primal, a.primal * b.primal);
}

Value operator/(const Value& a, const Value& b) {
  const double inv = 1.0 / b.primal;
  return binary(a, b, inv, -a.primal * inv * inv, a.primal * inv);
}

Value operator-(const Value& a) { return unary(a, -1.0, -a.primal); }

Value log(const Value& x) {
  if (!(x.primal > 0.0)) throw DomainError("log requires a positive argument");
  return unary(x, 1.0 / x.primal, std::log(x.primal));
}

Value exp(const Value& x) {
  const double e = std::exp(x.primal);
  return unary(x, e, e);
}

Value sqrt(const Value& x) {
  if (x.primal < 0.0) throw DomainError("sqrt requires a non-negative argument");
  const double r = std::sqrt(x.primal);
  return unary(x, 0.5 / r, r);
}

Value pow(const Value& base, const Value& exponent) {
  const bool needs_grad = !base.constant() || !exponent.constant();
  if (needs_grad && !(base.primal > 0.0)) {
    throw DomainError("pow requires a positive base when differentiating");
  }
  const double p = std::pow(base.primal, exponent.primal);
  return binary(base, exponent, exponent.primal * p / base.primal,
                p * std::log(base.primal), p);
}

Value sigmoid(const Value& x) {
  const double s = sigmoid(x.primal);
  return unary(x, s * (1.0 - s), s);
}

Value softplus(const Value& x) {
  return unary(x, sigmoid(x.primal), softplus(x.primal));
}

Value lgamma(const Value& x) {
  if (x.constant()) return Value(lgamma(x.primal));
  if (!(x.primal > 0.0)) {
    throw DomainError("lgamma requires a positive argument when differentiating");
  }
  return unary(x, digamma(x.primal), lgamma(x.primal));
}

std::vector<double> gradient(
    const std::function<Value(const std::vector<Value>&)>& f,
    const std::vector<double>& x) {
  Tape tape;
  std::vector<Value> leaves;
  leaves.reserve(x.size());
  for (double xi : x) leaves.push_back(tape.leaf(xi));
  const Value out = f(leaves);
  if (!out.constant() && out.tape != &tape) {
    throw TapeMismatch("function returned a value from a foreign tape");
  }
  tape.backward(out);
  std::vector<double> grads(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) grads[i] = tape.adjoint(leaves[i]);
  return grads;
}

}  // namespace handlebar
