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

// End-to-end acceptance gate. Each numbered criterion prints one [PASS] or
// [FAIL] line; the process exits nonzero if any criterion fails. Unlike the
// unit suite, everything here goes through the public library surface only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "handlebar/bijectors.hpp"
#include "handlebar/distributions.hpp"
#include "handlebar/effects.hpp"
#include "handlebar/handlers.hpp"
#include "handlebar/inference.hpp"
#include "handlebar/models.hpp"
#include "handlebar/support.hpp"

namespace hb = handlebar;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;
using Verdict = std::pair<bool, std::string>;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

hb::ValueMap observe_x7() {
  hb::ValueMap obs;
  obs["x"] = hb::Value(7.0);
  return obs;
}

double simpson(const std::function<double(double)>& f, double lo, double hi,
               int intervals) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double density(const hb::DistributionSpec& d, double v) {
  return std::exp(hb::log_prob(d, hb::Value(v)).primal);
}

double central_diff(const std::function<double(double)>& f, double x) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double rel_err(double actual, double expected) {
  return std::abs(actual - expected) / std::max(1.0, std::abs(expected));
}

// --- criterion 1: pinned log-joint value and latency ------------------------

Verdict criterion_log_joint() {
  const hb::Model model = hb::beta_binomial(10);
  const hb::ValueMap latents{{"z", hb::Value(0.5)}};
  const hb::ValueMap obs = observe_x7();
  const double expected = std::log(120.0) - 10.0 * std::log(2.0);

  (void)hb::log_joint(model, latents, obs);  // warm-up
  const auto start = Clock::now();
  const double got = hb::log_joint(model, latents, obs).primal;
  const double ms = seconds_since(start) * 1e3;

  const double err = std::abs(got - expected);
  return {err <= 1e-10 && ms < 1.0, fmt("err %.2e, %.3f ms", err, ms)};
}

// --- criterion 2: Jacobian-corrected unconstrained density ------------------

Verdict criterion_jacobian() {
  const hb::Model model = hb::beta_binomial(10);
  const hb::ValueMap obs = observe_x7();
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double u = -5.0 + 0.5 * i;
    const double z = sigmoid(u);
    const double lhs =
        hb::log_joint_unconstrained(model, {{"z", hb::Value(u)}}, obs).primal;
    const double rhs = hb::log_joint(model, {{"z", hb::Value(z)}}, obs).primal +
                       std::log(z * (1.0 - z));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-9, fmt("21 grid points, max err %.2e", worst)};
}

// --- criterion 3: composition order ------------------------------------------

// Hand-composed accumulate / substitute / unconstrain / condition stack with
// the condition handler either inside or outside unconstrain.
double composed_log_joint(double u, bool condition_innermost) {
  const hb::Model model = hb::beta_binomial(10);
  hb::ExecutionContext ctx(0);
  hb::LogJointAccumulator acc;
  auto substitute = hb::make_substitute({{"z", hb::Value(u)}});
  auto unconstrain = hb::make_unconstrain();
  auto condition = hb::make_condition(observe_x7());

  const auto innermost_pair = [&](hb::Handler& outer, hb::Handler& inner) {
    hb::with_handler(ctx, outer, [&] {
      hb::with_handler(ctx, inner, [&] { model(ctx); });
    });
  };
  try {
    hb::with_handler(ctx, acc, [&] {
      hb::with_handler(ctx, *substitute, [&] {
        if (condition_innermost) {
          innermost_pair(*unconstrain, *condition);
        } else {
          innermost_pair(*condition, *unconstrain);
        }
      });
    });
  } catch (const hb::detail::LogJointAbort&) {
    return -kInf;
  }
  return acc.total().primal;
}

Verdict criterion_composition() {
  const hb::Model model = hb::beta_binomial(10);
  const hb::ValueMap obs = observe_x7();
  std::vector<double> grid = {-30.0, 30.0};
  for (int i = 0; i <= 20; ++i) grid.push_back(-5.0 + 0.5 * i);

  double worst = 0.0;
  for (const double u : grid) {
    const double inside = composed_log_joint(u, true);
    const double outside = composed_log_joint(u, false);
    const double reference =
        hb::log_joint_unconstrained(model, {{"z", hb::Value(u)}}, obs).primal;
    if (!std::isfinite(inside)) return {false, fmt("not evaluable at u=%g", u)};
    worst = std::max(worst, std::abs(inside - reference));
    worst = std::max(worst, std::abs(inside - outside));
  }
  return {worst <= 1e-12,
          fmt("%zu points incl. u=+/-30, max err %.2e", grid.size(), worst)};
}

// --- criterion 4: forwarding visibility --------------------------------------

Verdict criterion_forwarding() {
  const hb::Model model = hb::beta_binomial(10);
  hb::ExecutionContext ctx(7);
  auto tracer = hb::make_trace();
  auto unconstrain = hb::make_unconstrain();
  hb::with_handler(ctx, *tracer, [&] {
    hb::with_handler(ctx, *unconstrain, [&] { model(ctx); });
  });

  const hb::Trace& trace = tracer->trace();
  if (trace.size() != 2) {
    return {false, fmt("expected 2 records, saw %zu", trace.size())};
  }
  const auto& records = trace.records();
  const bool names_ok = records[0].name == "z" && records[1].name == "x";
  const bool z_real_line =
      hb::support_of(records[0].dist).kind == hb::Support::Kind::kRealLine;
  return {names_ok && z_real_line,
          fmt("2 records, z support %s",
              hb::support_name(hb::support_of(records[0].dist)).c_str())};
}

// --- criterion 5: conjugate MH recovery ---------------------------------------

Verdict criterion_mh() {
  hb::MHConfig cfg;
  cfg.steps = 50000;
  cfg.burn_in = 5000;
  cfg.step_size = 0.5;
  cfg.seed = 1;

  const auto start = Clock::now();
  const hb::PosteriorSamples posterior =
      hb::mh_run(hb::beta_binomial(10), observe_x7(), cfg);
  const double secs = seconds_since(start);

  const auto& draws = posterior.draws.at("z");
  double mean = 0.0;
  for (const double v : draws) mean += v;
  mean /= static_cast<double>(draws.size());
  double var = 0.0;
  for (const double v : draws) var += (v - mean) * (v - mean);
  var /= static_cast<double>(draws.size());

  const double mean_err = std::abs(mean - 2.0 / 3.0);
  const double var_err = std::abs(var - 32.0 / 1872.0);
  const bool pass = mean_err <= 0.02 && var_err <= 0.003 && secs < 30.0;
  return {pass, fmt("mean %.4f (target 0.6667+/-0.02), var %.5f "
                    "(target 0.01709+/-0.003), %.2f s",
                    mean, var, secs)};
}

// --- criterion 6: ADVI evidence bound -----------------------------------------

Verdict criterion_advi() {
  hb::ADVIConfig cfg;
  cfg.steps = 3000;
  cfg.learning_rate = 0.05;
  cfg.seed = 2;

  const auto start = Clock::now();
  const hb::AdviResult result =
      hb::advi_fit(hb::beta_binomial(10), observe_x7(), cfg);
  const double secs = seconds_since(start);

  if (result.nonfinite_step.has_value()) {
    return {false, fmt("diverged at step %zu", *result.nonfinite_step)};
  }
  double tail = 0.0;
  for (std::size_t i = result.elbo_history.size() - 100;
       i < result.elbo_history.size(); ++i) {
    tail += result.elbo_history[i];
  }
  tail /= 100.0;

  // Implied posterior mean E[sigmoid(u)] under the fitted Gaussian.
  const hb::GuideParam& q = result.params.at("z");
  const double mu = q.mu.primal;
  const double sd = std::exp(q.log_sigma.primal);
  const auto integrand = [&](double u) {
    const double norm = std::exp(-0.5 * (u - mu) * (u - mu) / (sd * sd)) /
                        (sd * std::sqrt(2.0 * M_PI));
    return sigmoid(u) * norm;
  };
  const double posterior_mean =
      simpson(integrand, mu - 10.0 * sd, mu + 10.0 * sd, 2000);

  const double evidence = std::log(1.0 / 11.0);
  const bool elbo_ok = tail >= evidence - 0.1 && tail <= evidence + 0.05;
  const bool mean_ok = std::abs(posterior_mean - 2.0 / 3.0) <= 0.05;
  return {elbo_ok && mean_ok && secs < 60.0,
          fmt("final-100 ELBO %.4f (evidence %.4f), E[sigmoid(u)] %.4f, %.2f s",
              tail, evidence, posterior_mean, secs)};
}

// --- criterion 7: gradient oracle ---------------------------------------------

// AD derivative of a single-input library op via a throwaway tape.
double ad_unary(const std::function<hb::Value(const hb::Value&)>& op, double x) {
  hb::Tape tape;
  const hb::Value leaf = tape.leaf(x);
  tape.backward(op(leaf));
  return tape.adjoint(leaf);
}

Verdict criterion_gradients() {
  std::mt19937_64 rng(20260814);
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  struct UnaryCase {
    const char* label;
    std::function<hb::Value(const hb::Value&)> op;
    double lo, hi;
  };
  const std::vector<UnaryCase> unary = {
      {"neg", [](const hb::Value& v) { return -v; }, -3.0, 3.0},
      {"log", [](const hb::Value& v) { return hb::log(v); }, 0.2, 5.0},
      {"exp", [](const hb::Value& v) { return hb::exp(v); }, -3.0, 3.0},
      {"sqrt", [](const hb::Value& v) { return hb::sqrt(v); }, 0.2, 5.0},
      {"sigmoid", [](const hb::Value& v) { return hb::sigmoid(v); }, -4.0, 4.0},
      {"softplus", [](const hb::Value& v) { return hb::softplus(v); }, -4.0, 4.0},
      {"lgamma", [](const hb::Value& v) { return hb::lgamma(v); }, 0.3, 6.0},
  };

  double worst = 0.0;
  std::string worst_label = "none";
  const auto note = [&](const char* label, double err) {
    if (err > worst) {
      worst = err;
      worst_label = label;
    }
  };

  for (const auto& c : unary) {
    for (int i = 0; i < 10; ++i) {
      const double x = uniform(c.lo, c.hi);
      const double fd =
          central_diff([&](double t) { return c.op(hb::Value(t)).primal; }, x);
      note(c.label, rel_err(ad_unary(c.op, x), fd));
    }
  }

  struct BinaryCase {
    const char* label;
    std::function<hb::Value(const hb::Value&, const hb::Value&)> op;
    std::function<double()> draw_a;
    std::function<double()> draw_b;
  };
  const auto any = [&] { return uniform(-3.0, 3.0); };
  const auto away_from_zero = [&] {
    const double m = uniform(0.5, 3.0);
    return uniform(0.0, 1.0) < 0.5 ? -m : m;
  };
  const auto positive = [&] { return uniform(0.3, 3.0); };
  const auto exponent = [&] { return uniform(-2.0, 2.0); };
  const std::vector<BinaryCase> binary = {
      {"add", [](const hb::Value& a, const hb::Value& b) { return a + b; }, any, any},
      {"sub", [](const hb::Value& a, const hb::Value& b) { return a - b; }, any, any},
      {"mul", [](const hb::Value& a, const hb::Value& b) { return a * b; }, any, any},
      {"div", [](const hb::Value& a, const hb::Value& b) { return a / b; }, any,
       away_from_zero},
      {"pow", [](const hb::Value& a, const hb::Value& b) { return hb::pow(a, b); },
       positive, exponent},
  };

  for (const auto& c : binary) {
    for (int i = 0; i < 10; ++i) {
      const double a = c.draw_a();
      const double b = c.draw_b();
      hb::Tape tape;
      const hb::Value va = tape.leaf(a);
      const hb::Value vb = tape.leaf(b);
      tape.backward(c.op(va, vb));
      const double fd_a = central_diff(
          [&](double t) { return c.op(hb::Value(t), hb::Value(b)).primal; }, a);
      const double fd_b = central_diff(
          [&](double t) { return c.op(hb::Value(a), hb::Value(t)).primal; }, b);
      note(c.label, rel_err(tape.adjoint(va), fd_a));
      note(c.label, rel_err(tape.adjoint(vb), fd_b));
    }
  }

  // Full unconstrained log-joint gradient d/du of the beta_binomial model.
  const hb::Model model = hb::beta_binomial(10);
  const hb::ValueMap obs = observe_x7();
  for (int i = 0; i < 10; ++i) {
    const double u = uniform(-3.0, 3.0);
    const std::vector<double> grad = hb::gradient(
        [&](const std::vector<hb::Value>& xs) {
          return hb::log_joint_unconstrained(model, {{"z", xs[0]}}, obs);
        },
        {u});
    const double fd = central_diff(
        [&](double t) {
          return hb::log_joint_unconstrained(model, {{"z", hb::Value(t)}}, obs)
              .primal;
        },
        u);
    note("log-joint", rel_err(grad[0], fd));
  }

  return {worst <= 1e-5,
          fmt("13 ops x 10 points, worst %s at rel %.2e", worst_label.c_str(), worst)};
}

// --- criterion 8: distribution normalization ----------------------------------

Verdict criterion_normalization() {
  double worst = 0.0;
  const auto note = [&](double integral) {
    worst = std::max(worst, std::abs(integral - 1.0));
  };

  const hb::DistributionSpec beta = hb::Beta(2.0, 5.0);
  note(simpson([&](double v) { return density(beta, v); }, 0.0, 1.0, 20000));

  const hb::DistributionSpec normal = hb::Normal(0.7, 1.3);
  note(simpson([&](double v) { return density(normal, v); }, 0.7 - 12 * 1.3,
               0.7 + 12 * 1.3, 20000));

  // Heavy tail handled analytically: P(X > r) = 1 - (2/pi) atan(r / s).
  const hb::DistributionSpec half_cauchy = hb::HalfCauchy(2.0);
  const double r = 40.0;
  const double tail = 1.0 - (2.0 / M_PI) * std::atan(r / 2.0);
  note(simpson([&](double v) { return density(half_cauchy, v); }, 1e-9, r, 20000) +
       tail);

  const hb::DistributionSpec logit_beta =
      hb::Transformed(hb::Beta(2.0, 2.0), hb::invert(hb::sigmoid_bijector()));
  note(simpson([&](double v) { return density(logit_beta, v); }, -17.0, 17.0,
               20000));

  const bool continuous_ok = worst <= 1e-6;
  const double continuous_worst = worst;

  double mass_worst = 0.0;
  for (const std::int64_t n : {5, 20}) {
    for (const double p : {0.0, 0.17, 0.5, 0.93, 1.0}) {
      const hb::DistributionSpec binomial = hb::Binomial(n, p);
      double mass = 0.0;
      for (std::int64_t k = 0; k <= n; ++k) {
        mass += density(binomial, static_cast<double>(k));
      }
      mass_worst = std::max(mass_worst, std::abs(mass - 1.0));
    }
  }

  return {continuous_ok && mass_worst <= 1e-12,
          fmt("continuous err %.2e (tol 1e-6), binomial err %.2e (tol 1e-12)",
              continuous_worst, mass_worst)};
}

// --- criterion 9: handler-law property suites ----------------------------------

// Minimal instrumented handler: logs its id on interception and either
// forwards, runs the base behavior directly, synthesizes a value, or throws.
class Probe : public hb::Handler {
 public:
  enum class Action { kForward, kDirect, kSynthesize, kThrow };

  Probe(int id, Action action, std::vector<int>* log)
      : id_(id), action_(action), log_(log) {}

  hb::SiteResult intercept(const hb::SampleSite& site, hb::Forwarder& fwd) override {
    log_->push_back(id_);
    switch (action_) {
      case Action::kForward:
        return fwd.forward(site);
      case Action::kDirect:
        return fwd.direct(site);
      case Action::kThrow:
        throw std::runtime_error("probe failure");
      case Action::kSynthesize:
      default: {
        hb::SampleSite resolved = site;
        resolved.pinned_value = hb::Value(1000.0 + id_);
        return hb::SiteResult{hb::Value(1000.0 + id_), resolved};
      }
    }
  }

  void on_enter(hb::ExecutionContext&) override { ++enters_; }
  void on_finish(hb::ExecutionContext&) override { ++finishes_; }

  int enters() const { return enters_; }
  int finishes() const { return finishes_; }

 private:
  int id_;
  Action action_;
  std::vector<int>* log_;
  int enters_ = 0;
  int finishes_ = 0;
};

hb::Value with_stack(hb::ExecutionContext& ctx, std::vector<Probe>& probes,
                     std::size_t i, const std::function<hb::Value()>& body) {
  if (i == probes.size()) return body();
  return hb::with_handler(ctx, probes[i],
                          [&] { return with_stack(ctx, probes, i + 1, body); });
}

bool law_stack_restoration(std::mt19937_64& rng, int cases) {
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const bool throw_in_handler = rng() % 2 == 0;
    std::vector<int> log;
    std::vector<Probe> probes;
    probes.reserve(static_cast<std::size_t>(n));
    const int thrower = throw_in_handler ? static_cast<int>(rng() % n) : -1;
    for (int i = 0; i < n; ++i) {
      probes.emplace_back(i, i == thrower ? Probe::Action::kThrow
                                          : Probe::Action::kForward,
                          &log);
    }

    hb::ExecutionContext ctx(static_cast<std::uint64_t>(c));
    bool threw = false;
    try {
      with_stack(ctx, probes, 0, [&]() -> hb::Value {
        if (throw_in_handler) return hb::sample(ctx, "s", hb::Normal(0.0, 1.0));
        throw std::runtime_error("body failure");
      });
    } catch (const std::runtime_error&) {
      threw = true;
    }
    if (!threw || ctx.handler_depth() != 0) return false;
    for (const Probe& p : probes) {
      if (p.enters() != 1 || p.finishes() != 0) return false;
    }
  }
  return true;
}

bool law_dispatch_order(std::mt19937_64& rng, int cases) {
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + static_cast<int>(rng() % 5);
    // Index of the probe that stops the forwarding walk; -1 lets the site
    // fall through to the base sampler.
    const int stop = static_cast<int>(rng() % (n + 1)) - 1;
    std::vector<int> log;
    std::vector<Probe> probes;
    probes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      Probe::Action action = Probe::Action::kForward;
      if (i == stop) {
        action = rng() % 2 == 0 ? Probe::Action::kSynthesize : Probe::Action::kDirect;
      }
      probes.emplace_back(i, action, &log);
    }

    hb::ExecutionContext ctx(static_cast<std::uint64_t>(c));
    with_stack(ctx, probes, 0,
               [&] { return hb::sample(ctx, "s", hb::Normal(0.0, 1.0)); });

    // Innermost handler (pushed last) must speak first, walking outward until
    // a handler declines to forward.
    std::vector<int> expected;
    for (int i = n - 1; i >= std::max(stop, 0); --i) expected.push_back(i);
    if (log != expected) return false;
  }
  return true;
}

bool law_duplicate_rejection(std::mt19937_64& rng, int cases) {
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  for (int c = 0; c < cases; ++c) {
    const int m = 2 + static_cast<int>(rng() % 5);
    const int dup = static_cast<int>(rng() % m);
    const bool under_handler = rng() % 2 == 0;

    std::vector<int> log;
    Probe passthrough(0, Probe::Action::kForward, &log);
    hb::ExecutionContext ctx(static_cast<std::uint64_t>(c));
    const auto body = [&]() -> hb::Value {
      for (int i = 0; i < m; ++i) {
        hb::sample(ctx, pool[static_cast<std::size_t>(i)], hb::Normal(0.0, 1.0));
      }
      // Re-performing any earlier name must be rejected.
      return hb::sample(ctx, pool[static_cast<std::size_t>(dup)],
                        hb::Normal(0.0, 1.0));
    };
    bool rejected = false;
    try {
      if (under_handler) {
        hb::with_handler(ctx, passthrough, body);
      } else {
        body();
      }
    } catch (const hb::DuplicateName&) {
      rejected = true;
    }
    if (!rejected) return false;
  }
  return true;
}

bool law_deterministic_replay(std::mt19937_64& rng, int cases) {
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  for (int c = 0; c < cases; ++c) {
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<hb::DistributionSpec> dists;
    for (int i = 0; i < k; ++i) {
      switch (rng() % 4) {
        case 0:
          dists.push_back(hb::Beta(uniform(0.5, 4.0), uniform(0.5, 4.0)));
          break;
        case 1:
          dists.push_back(hb::Normal(uniform(-2.0, 2.0), uniform(0.1, 2.0)));
          break;
        case 2:
          dists.push_back(hb::HalfCauchy(uniform(0.2, 3.0)));
          break;
        default:
          dists.push_back(
              hb::Binomial(1 + static_cast<std::int64_t>(rng() % 20),
                           uniform(0.05, 0.95)));
          break;
      }
    }
    const std::uint64_t seed = rng();

    const auto run_once = [&] {
      hb::ExecutionContext ctx(seed);
      std::vector<double> values;
      for (int i = 0; i < k; ++i) {
        values.push_back(
            hb::sample(ctx, "s" + std::to_string(i), dists[static_cast<std::size_t>(i)])
                .primal);
      }
      return values;
    };
    if (run_once() != run_once()) return false;
  }
  return true;
}

Verdict criterion_handler_laws() {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  const bool restoration = law_stack_restoration(rng, 250);
  const bool dispatch = law_dispatch_order(rng, 300);
  const bool duplicates = law_duplicate_rejection(rng, 250);
  const bool replay = law_deterministic_replay(rng, 200);
  const bool pass = restoration && dispatch && duplicates && replay;
  return {pass, fmt("restoration %s (250), dispatch %s (300), duplicate %s (250), "
                    "replay %s (200)",
                    restoration ? "ok" : "FAIL", dispatch ? "ok" : "FAIL",
                    duplicates ? "ok" : "FAIL", replay ? "ok" : "FAIL")};
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    std::function<Verdict()> body;
  };
  const std::vector<Entry> criteria = {
      {"1. log-joint of beta_binomial(10) at (z=0.5, x=7)", criterion_log_joint},
      {"2. Jacobian-corrected unconstrained log-joint on u grid", criterion_jacobian},
      {"3. handler composition order and condition permutation", criterion_composition},
      {"4. unconstrain forwards the rewritten site, not the base", criterion_forwarding},
      {"5. MH recovers the conjugate Beta(8,4) posterior", criterion_mh},
      {"6. ADVI evidence bound and implied posterior mean", criterion_advi},
      {"7. gradients match central finite differences", criterion_gradients},
      {"8. densities normalize by quadrature and summation", criterion_normalization},
      {"9. handler laws hold under randomized property suites", criterion_handler_laws},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    bool pass = false;
    std::string detail;
    try {
      const Verdict v = entry.body();
      pass = v.first;
      detail = v.second;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << entry.label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
