# Copyright 2026 The Handlebar Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import handlebar as hb


def test_list_models():
    names = [entry["name"] for entry in hb.list_models()]
    assert names == ["beta_binomial", "normal_normal"]
    bb = hb.list_models()[0]
    assert bb["latents"] == ["z"]
    assert bb["observed"] == ["x"]
    assert bb["hypers"] == {"n": 10.0}


def test_log_joint_matches_closed_form():
    got = hb.log_joint("beta_binomial", {"z": 0.5}, {"x": 7})
    assert abs(got - (math.log(120.0) - 10.0 * math.log(2.0))) < 1e-10


def test_log_joint_unconstrained_includes_jacobian():
    got = hb.log_joint_unconstrained("beta_binomial", {"z": 0.0}, {"x": 7})
    assert abs(got - -3.5302744239372977) < 1e-12


def test_gradient_matches_finite_differences():
    u = 0.3

    def f(t):
        return hb.log_joint_unconstrained("beta_binomial", {"z": t}, {"x": 7})

    value, grads = hb.grad_log_joint_unconstrained(
        "beta_binomial", {"z": u}, {"x": 7}
    )
    assert value == pytest.approx(f(u), abs=1e-12)
    h = 1e-6
    fd = (f(u + h) - f(u - h)) / (2.0 * h)
    assert grads["z"] == pytest.approx(fd, rel=1e-5)


def test_trace_shape_and_total():
    result = hb.trace("beta_binomial", observed={"x": 7}, seed=11)
    sites = result["sites"]
    assert [site["name"] for site in sites] == ["z", "x"]
    assert [site["family"] for site in sites] == ["beta", "binomial"]
    assert [site["observed"] for site in sites] == [False, True]
    assert sites[1]["value"] == 7.0
    total = sum(site["log_prob"] for site in sites)
    assert result["total_log_prob"] == pytest.approx(total, abs=1e-12)


def test_sample_is_deterministic_in_the_seed():
    a = hb.sample("beta_binomial", seed=5)
    b = hb.sample("beta_binomial", seed=5)
    c = hb.sample("beta_binomial", seed=6)
    assert a == b
    assert a != c
    assert 0.0 < a["z"] < 1.0
    assert a["x"] == int(a["x"])


def test_hypers_override():
    values = hb.sample("beta_binomial", hypers={"n": 1}, seed=9)
    assert values["x"] in (0.0, 1.0)


def test_mh_recovers_the_conjugate_mean():
    result = hb.mh(
        "beta_binomial", {"x": 7}, steps=6000, burn_in=1000, step_size=0.5, seed=1
    )
    draws = result["draws"]["z"]
    assert len(draws) == 5000
    mean = sum(draws) / len(draws)
    assert abs(mean - 2.0 / 3.0) < 0.05
    assert 0.0 < result["acceptance_rate"] < 1.0
    assert result["warnings"] == []


def test_advi_improves_the_elbo():
    result = hb.advi("beta_binomial", {"x": 7}, steps=300, seed=2)
    assert result["nonfinite_step"] is None
    assert len(result["elbo"]) == 300
    assert set(result["params"]) == {"z"}
    head = sum(result["elbo"][:50]) / 50.0
    tail = sum(result["elbo"][-50:]) / 50.0
    assert tail > head


def test_errors_carry_the_kind_tag():
    with pytest.raises(hb.HandlebarError, match="NotFound"):
        hb.log_joint("beta_gamma", {"z": 0.5}, {"x": 7})
    with pytest.raises(hb.HandlebarError, match="InvalidParams"):
        hb.log_joint("beta_binomial", {"z": 0.5}, {"x": 7}, hypers={"n": 0})
    with pytest.raises(hb.HandlebarError, match="MissingValue"):
        hb.log_joint("beta_binomial", {"z": 0.5}, {})
