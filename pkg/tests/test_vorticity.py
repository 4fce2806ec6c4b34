import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexplane import (C2_UPPER_BOUND, ParameterDomainError,
                         constantin_model, example_model, find_positive_zero,
                         make_model, potential_by_quadrature, power_law_model)
from vortexplane.vorticity import potential_grid

finite_u = st.floats(min_value=-50.0, max_value=50.0,
                     allow_nan=False, allow_infinity=False)

_MODELS = (constantin_model(), example_model(0.02), power_law_model(0.3))


def test_positive_zero_all_models(constantin, example, powerlaw):
    for model in (constantin, example, powerlaw):
        assert abs(find_positive_zero(model) - 1.0) <= 1e-9
        assert model.u0 == 1.0


@settings(max_examples=200, deadline=None)
@given(finite_u)
def test_oddness(u):
    for model in _MODELS:
        assert math.isclose(model.f(-u), -model.f(u),
                            rel_tol=1e-12, abs_tol=1e-300)


@settings(max_examples=200, deadline=None)
@given(finite_u)
def test_decomposition(u):
    # f(u) = u - g(u) with g odd and u g(u) >= 0
    for model in _MODELS:
        assert math.isclose(model.f(u), u - model.g(u),
                            rel_tol=1e-12, abs_tol=1e-300)
        assert math.isclose(model.g(-u), -model.g(u),
                            rel_tol=1e-12, abs_tol=1e-300)
        assert u * model.g(u) >= 0.0


def test_parameter_bound_exact_value():
    exact = (3.0 - 2.0 * math.sqrt(2.0)) / (4.0 + 3.0 * math.sqrt(2.0))
    assert C2_UPPER_BOUND == exact
    assert 0.0208 < C2_UPPER_BOUND < 0.0209


@pytest.mark.parametrize("c2", [0.0, -0.01, 0.0209, 0.1])
def test_example_rejects_bad_c2(c2):
    with pytest.raises(ParameterDomainError):
        example_model(c2)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5, -0.2])
def test_power_law_rejects_bad_alpha(alpha):
    with pytest.raises(ParameterDomainError):
        power_law_model(alpha)


def test_constantin_potential_closed_form(constantin):
    assert abs(constantin.F(1.0) + 1.0 / 6.0) < 1e-15
    for psi in (0.5, 1.0, 16.0 / 9.0, 3.0, 10.0):
        closed = constantin.F(psi)
        expected = 0.5 * psi * psi - (2.0 / 3.0) * psi ** 1.5
        assert math.isclose(closed, expected, rel_tol=1e-14, abs_tol=1e-14)
        assert abs(potential_by_quadrature(constantin, psi) - closed) < 1e-10


def test_example_potential_frozen_value(example):
    # independent adaptive quadrature agrees with the model's accumulator
    assert abs(example.F(1.0) - (-0.16974983195210164)) < 1e-9
    assert abs(potential_by_quadrature(example, 1.0) - example.F(1.0)) < 1e-9


def test_power_law_potential(powerlaw):
    for psi in (0.5, 1.0, 2.0, 8.0):
        expected = 0.5 * psi * psi - psi ** 1.3 / 1.3
        assert math.isclose(powerlaw.F(psi), expected,
                            rel_tol=1e-13, abs_tol=1e-13)
        assert abs(potential_by_quadrature(powerlaw, psi)
                   - powerlaw.F(psi)) < 1e-10


def test_potential_even():
    for model in _MODELS:
        for psi in (0.3, 1.0, 2.5):
            assert math.isclose(model.F(-psi), model.F(psi), rel_tol=1e-12)


def test_ledgers(constantin, example, powerlaw):
    c = constantin.ledger
    assert (c.eta, c.L, c.lambda_g, c.c, c.nu) == (
        28.0 / 9.0, 1.0 + math.sqrt(2.0), 0.75, 0.0, 0.5)
    e = example.ledger
    assert e.eta == 10.0 / 3.0
    assert e.L == 2.5
    assert e.c == 0.01
    assert e.nu == 0.5
    expected_lam = 0.75 / (1.0 + math.sin(0.01) - math.sin(0.02))
    assert math.isclose(e.lambda_g, expected_lam, rel_tol=1e-14)
    p = powerlaw.ledger
    assert p.eta == 28.0 / 9.0
    assert math.isclose(p.L, 1.0 + 0.3 * (2.0 / 9.0) ** (0.3 - 1.0),
                        rel_tol=1e-14)
    assert p.lambda_g == (1.0 + 0.3) / 2.0
    assert p.nu == 1.0 - 0.3


def test_make_model_dispatch():
    assert make_model("constantin").model_id == "constantin"
    assert make_model("example").ledger.params["c2"] == 0.02
    assert make_model("example", c2=0.01).ledger.params["c2"] == 0.01
    assert make_model("powerlaw").ledger.params["alpha"] == 0.5
    with pytest.raises(ParameterDomainError):
        make_model("unknown")


def test_potential_grid_matches_pointwise():
    psis = np.linspace(0.0, 3.0, 21)
    for model in _MODELS:
        grid = potential_grid(model, psis)
        point = np.array([model.F(float(p)) for p in psis])
        assert np.max(np.abs(grid - point)) < 1e-9


def test_potential_grid_rejects_descending():
    with pytest.raises(ValueError):
        potential_grid(constantin_model(), np.array([1.0, 0.5]))
