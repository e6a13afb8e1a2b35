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

#include "handlebar/distributions.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "handlebar/errors.hpp"
#include "handlebar/special_functions.hpp"

namespace handlebar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(const Value& v) {
  return std::isfinite(v.primal) && v.primal > 0.0;
}

// True when the Value is a plain constant equal to c, so a density term with
// an exactly-zero coefficient can be dropped without losing gradients.
bool constant_equal(const Value& v, double c) {
  return v.constant() && v.primal == c;
}

double gamma_draw(SiteRng& rng, double shape) {
  // Marsaglia-Tsang squeeze; shapes below one are boosted via Gamma(a+1) U^1/a.
  if (shape < 1.0) {
    const double u = rng.uniform();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

const Support kUnitSupport{Support::Kind::kUnitInterval, 0, 0};
const Support kRealSupport{Support::Kind::kRealLine, 0, 0};
const Support kPositiveSupport{Support::Kind::kPositiveReals, 0, 0};

// Open-interval endpoints of a continuous support, used to classify the image
// of a support under a bijector.
void support_endpoints(const Support& s, double* lo, double* hi) {
  switch (s.kind) {
    case Support::Kind::kUnitInterval:
      *lo = 0.0;
      *hi = 1.0;
      return;
    case Support::Kind::kPositiveReals:
      *lo = 0.0;
      *hi = kInf;
      return;
    case Support::Kind::kRealLine:
    case Support::Kind::kTransformed:
      *lo = -kInf;
      *hi = kInf;
      return;
    case Support::Kind::kIntegerRange:
      *lo = static_cast<double>(s.lo);
      *hi = static_cast<double>(s.hi);
      return;
  }
  *lo = -kInf;
  *hi = kInf;
}

Support classify_interval(double lo, double hi) {
  if (lo == 0.0 && hi == 1.0) return kUnitSupport;
  if (lo == 0.0 && hi == kInf) return kPositiveSupport;
  if (lo == -kInf && hi == kInf) return kRealSupport;
  return Support{Support::Kind::kTransformed, 0, 0};
}

}  // namespace

std::string support_name(const Support& s) {
  switch (s.kind) {
    case Support::Kind::kUnitInterval:
      return "unit-interval";
    case Support::Kind::kIntegerRange:
      return "integer-range[" + std::to_string(s.lo) + ".." +
             std::to_string(s.hi) + "]";
    case Support::Kind::kRealLine:
      return "real-line";
    case Support::Kind::kPositiveReals:
      return "positive-reals";
    case Support::Kind::kTransformed:
      return "transformed";
  }
  return "unknown";
}

DistributionSpec Beta(Value alpha, Value beta) {
  if (!positive_finite(alpha) || !positive_finite(beta)) {
    throw InvalidParams("Beta requires alpha > 0 and beta > 0");
  }
  return DistributionSpec{BetaDist{alpha, beta}};
}

DistributionSpec Binomial(std::int64_t trials, Value prob) {
  if (trials < 0) throw InvalidParams("Binomial requires trials >= 0");
  if (!(prob.primal >= 0.0) || !(prob.primal <= 1.0)) {
    throw InvalidParams("Binomial requires prob in [0, 1]");
  }
  return DistributionSpec{BinomialDist{trials, prob}};
}

DistributionSpec Normal(Value mu, Value sigma) {
  if (!std::isfinite(mu.primal) || !positive_finite(sigma)) {
    throw InvalidParams("Normal requires finite mu and sigma > 0");
  }
  return DistributionSpec{NormalDist{mu, sigma}};
}

DistributionSpec HalfCauchy(Value scale) {
  if (!positive_finite(scale)) {
    throw InvalidParams("HalfCauchy requires scale > 0");
  }
  return DistributionSpec{HalfCauchyDist{scale}};
}

DistributionSpec Transformed(DistributionSpec base, BijectorPtr bijector) {
  if (bijector == nullptr) throw InvalidParams("Transformed requires a bijector");
  if (support_of(base).discrete()) {
    throw InvalidParams("Transformed requires a continuous base distribution");
  }
  return DistributionSpec{TransformedDist{
      std::make_shared<DistributionSpec>(std::move(base)), std::move(bijector)}};
}

std::string family_name(const DistributionSpec& d) {
  struct Visitor {
    std::string operator()(const BetaDist&) const { return "beta"; }
    std::string operator()(const BinomialDist&) const { return "binomial"; }
    std::string operator()(const NormalDist&) const { return "normal"; }
    std::string operator()(const HalfCauchyDist&) const { return "half_cauchy"; }
    std::string operator()(const TransformedDist&) const { return "transformed"; }
  };
  return std::visit(Visitor{}, d.dist);
}

namespace {

// Interval endpoints of the support of `d`. Unlike Support, which collapses
// non-canonical images to kTransformed, this keeps exact endpoints so nested
// Transformed wrappers classify correctly (e.g. negating twice restores the
// positive axis).
void image_endpoints(const DistributionSpec& d, double* lo, double* hi) {
  if (const auto* t = std::get_if<TransformedDist>(&d.dist)) {
    double base_lo;
    double base_hi;
    image_endpoints(*t->base, &base_lo, &base_hi);
    double mapped_lo = t->bijector->forward_ext(base_lo);
    double mapped_hi = t->bijector->forward_ext(base_hi);
    if (mapped_lo > mapped_hi) std::swap(mapped_lo, mapped_hi);
    *lo = mapped_lo;
    *hi = mapped_hi;
    return;
  }
  support_endpoints(support_of(d), lo, hi);
}

}  // namespace

Support support_of(const DistributionSpec& d) {
  struct Visitor {
    Support operator()(const BetaDist&) const { return kUnitSupport; }
    Support operator()(const BinomialDist& b) const {
      return Support{Support::Kind::kIntegerRange, 0, b.trials};
    }
    Support operator()(const NormalDist&) const { return kRealSupport; }
    Support operator()(const HalfCauchyDist&) const { return kPositiveSupport; }
    Support operator()(const TransformedDist& t) const {
      double lo;
      double hi;
      image_endpoints(*t.base, &lo, &hi);
      double mapped_lo = t.bijector->forward_ext(lo);
      double mapped_hi = t.bijector->forward_ext(hi);
      if (mapped_lo > mapped_hi) std::swap(mapped_lo, mapped_hi);
      return classify_interval(mapped_lo, mapped_hi);
    }
  };
  return std::visit(Visitor{}, d.dist);
}

Value log_prob(const DistributionSpec& d, const Value& value) {
  struct Visitor {
    const Value& v;

    Value operator()(const BetaDist& b) const {
      if (!(v.primal > 0.0) || !(v.primal < 1.0)) return Value(-kInf);
      Value lp(0.0);
      if (!constant_equal(b.alpha, 1.0)) {
        lp = lp + (b.alpha - 1.0) * log(v);
      }
      if (!constant_equal(b.beta, 1.0)) {
        lp = lp + (b.beta - 1.0) * log(Value(1.0) - v);
      }
      return lp - (lgamma(b.alpha) + lgamma(b.beta) - lgamma(b.alpha + b.beta));
    }

    Value operator()(const BinomialDist& b) const {
      if (!std::isfinite(v.primal) || v.primal != std::floor(v.primal)) {
        throw OutOfSupport("Binomial requires an integer value");
      }
      const auto k = static_cast<std::int64_t>(v.primal);
      if (k < 0 || k > b.trials) return Value(-kInf);
      const double n = static_cast<double>(b.trials);
      const double kd = static_cast<double>(k);
      if (b.prob.primal == 0.0) return Value(k == 0 ? 0.0 : -kInf);
      if (b.prob.primal == 1.0) return Value(k == b.trials ? 0.0 : -kInf);
      Value lp(lgamma(n + 1.0) - lgamma(kd + 1.0) - lgamma(n - kd + 1.0));
      if (k > 0) lp = lp + kd * log(b.prob);
      if (k < b.trials) lp = lp + (n - kd) * log(Value(1.0) - b.prob);
      return lp;
    }

    Value operator()(const NormalDist& n) const {
      const Value z = (v - n.mu) / n.sigma;
      return Value(-0.5 * kLog2Pi) - log(n.sigma) - 0.5 * z * z;
    }

    Value operator()(const HalfCauchyDist& h) const {
      if (!(v.primal > 0.0)) return Value(-kInf);
      const Value r = v / h.scale;
      return Value(std::log(2.0 / kPi)) - log(h.scale) - log(Value(1.0) + r * r);
    }

    Value operator()(const TransformedDist& t) const {
      Value x;
      try {
        x = t.bijector->inverse(v);
      } catch (const DomainError&) {
        return Value(-kInf);
      }
      const Value base_lp = log_prob(*t.base, x);
      if (base_lp.primal == -kInf) return Value(-kInf);
      return base_lp - t.bijector->forward_log_det_jacobian(x);
    }
  };
  return std::visit(Visitor{value}, d.dist);
}

Value sample(const DistributionSpec& d, SiteRng& rng) {
  struct Visitor {
    SiteRng& rng;

    Value operator()(const BetaDist& b) const {
      const double x = gamma_draw(rng, b.alpha.primal);
      const double y = gamma_draw(rng, b.beta.primal);
      return Value(x / (x + y));
    }

    Value operator()(const BinomialDist& b) const {
      std::int64_t count = 0;
      for (std::int64_t i = 0; i < b.trials; ++i) {
        if (rng.uniform() < b.prob.primal) ++count;
      }
      return Value(static_cast<double>(count));
    }

    Value operator()(const NormalDist& n) const {
      return n.mu + n.sigma * Value(rng.normal());
    }

    Value operator()(const HalfCauchyDist& h) const {
      return Value(h.scale.primal * std::tan(0.5 * kPi * rng.uniform()));
    }

    Value operator()(const TransformedDist& t) const {
      return t.bijector->forward(sample(*t.base, rng));
    }
  };
  return std::visit(Visitor{rng}, d.dist);
}

}  // namespace handlebar
