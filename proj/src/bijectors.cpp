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

#include "handlebar/bijectors.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "handlebar/errors.hpp"
#include "handlebar/special_functions.hpp"

namespace handlebar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class SigmoidBijector final : public Bijector {
 public:
  Value forward(const Value& x) const override { return sigmoid(x); }

  Value inverse(const Value& y) const override {
    if (!(y.primal > 0.0) || !(y.primal < 1.0)) {
      throw DomainError("sigmoid inverse requires a value inside (0, 1)");
    }
    return log(y) - log(Value(1.0) - y);
  }

  Value forward_log_det_jacobian(const Value& x) const override {
    // d sigmoid/dx = sigmoid(x) sigmoid(-x); stable in log form.
    return -softplus(x) - softplus(-x);
  }

  double forward_ext(double x) const override {
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    return sigmoid(x);
  }

  double inverse_ext(double y) const override {
    if (y <= 0.0) return -kInf;
    if (y >= 1.0) return kInf;
    return std::log(y) - std::log1p(-y);
  }

  std::string name() const override { return "sigmoid"; }
};

class ExpBijector final : public Bijector {
 public:
  Value forward(const Value& x) const override { return exp(x); }

  Value inverse(const Value& y) const override {
    if (!(y.primal > 0.0)) {
      throw DomainError("exp inverse requires a positive value");
    }
    return log(y);
  }

  Value forward_log_det_jacobian(const Value& x) const override { return x; }

  double forward_ext(double x) const override {
    if (x == -kInf) return 0.0;
    return std::exp(x);
  }

  double inverse_ext(double y) const override {
    if (y <= 0.0) return -kInf;
    return std::log(y);
  }

  std::string name() const override { return "exp"; }
};

class AffineBijector final : public Bijector {
 public:
  AffineBijector(double a, double b) : a_(a), b_(b) {}

  Value forward(const Value& x) const override { return Value(a_) * x + Value(b_); }

  Value inverse(const Value& y) const override { return (y - Value(b_)) / Value(a_); }

  Value forward_log_det_jacobian(const Value&) const override {
    return Value(std::log(std::fabs(a_)));
  }

  double forward_ext(double x) const override { return a_ * x + b_; }

  double inverse_ext(double y) const override { return (y - b_) / a_; }

  std::string name() const override { return "affine"; }

 private:
  double a_;
  double b_;
};

class InvertBijector final : public Bijector {
 public:
  explicit InvertBijector(BijectorPtr inner) : inner_(std::move(inner)) {}

  Value forward(const Value& x) const override { return inner_->inverse(x); }

  Value inverse(const Value& y) const override { return inner_->forward(y); }

  Value forward_log_det_jacobian(const Value& x) const override {
    return -inner_->forward_log_det_jacobian(inner_->inverse(x));
  }

  double forward_ext(double x) const override { return inner_->inverse_ext(x); }

  double inverse_ext(double y) const override { return inner_->forward_ext(y); }

  std::string name() const override { return "invert(" + inner_->name() + ")"; }

 private:
  BijectorPtr inner_;
};

class ChainBijector final : public Bijector {
 public:
  explicit ChainBijector(std::vector<BijectorPtr> parts)
      : parts_(std::move(parts)) {}

  Value forward(const Value& x) const override {
    Value v = x;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
      v = (*it)->forward(v);
    }
    return v;
  }

  Value inverse(const Value& y) const override {
    Value v = y;
    for (const auto& part : parts_) v = part->inverse(v);
    return v;
  }

  Value forward_log_det_jacobian(const Value& x) const override {
    Value total(0.0);
    Value v = x;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
      total = total + (*it)->forward_log_det_jacobian(v);
      v = (*it)->forward(v);
    }
    return total;
  }

  double forward_ext(double x) const override {
    double v = x;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
      v = (*it)->forward_ext(v);
    }
    return v;
  }

  double inverse_ext(double y) const override {
    double v = y;
    for (const auto& part : parts_) v = part->inverse_ext(v);
    return v;
  }

  std::string name() const override {
    std::string out = "chain(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i > 0) out += ", ";
      out += parts_[i]->name();
    }
    return out + ")";
  }

 private:
  std::vector<BijectorPtr> parts_;
};

}  // namespace

BijectorPtr sigmoid_bijector() {
  static const BijectorPtr instance = std::make_shared<SigmoidBijector>();
  return instance;
}

BijectorPtr exp_bijector() {
  static const BijectorPtr instance = std::make_shared<ExpBijector>();
  return instance;
}

BijectorPtr affine_bijector(double a, double b) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidParams("affine bijector requires finite b and nonzero finite a");
  }
  return std::make_shared<AffineBijector>(a, b);
}

BijectorPtr identity_bijector() {
  static const BijectorPtr instance = std::make_shared<AffineBijector>(1.0, 0.0);
  return instance;
}

BijectorPtr invert(BijectorPtr inner) {
  if (inner == nullptr) throw InvalidParams("invert requires a bijector");
  return std::make_shared<InvertBijector>(std::move(inner));
}

BijectorPtr chain(std::vector<BijectorPtr> parts) {
  for (const auto& part : parts) {
    if (part == nullptr) throw InvalidParams("chain requires non-null bijectors");
  }
  return std::make_shared<ChainBijector>(std::move(parts));
}

BijectorPtr constraining_transform(const Support& support) {
  switch (support.kind) {
    case Support::Kind::kUnitInterval:
      return sigmoid_bijector();
    case Support::Kind::kPositiveReals:
      return exp_bijector();
    case Support::Kind::kRealLine:
      return identity_bijector();
    case Support::Kind::kIntegerRange:
      throw Unsupported("discrete supports cannot be unconstrained");
    case Support::Kind::kTransformed:
      throw Unsupported("no canonical constraining transform for a non-canonical support");
  }
  throw Unsupported("unknown support kind");
}

}  // namespace handlebar
