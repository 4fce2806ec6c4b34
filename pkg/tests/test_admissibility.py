import json
import math

import pytest

from vortexplane import full_report
from vortexplane.admissibility import (check_decomposition, check_growth,
                                       check_lipschitz, check_zero)
from vortexplane.vorticity import ConstantsLedger, VorticityModel


def test_full_report_passes_everywhere(constantin, example, powerlaw):
    for model in (constantin, example, powerlaw):
        rep = full_report(model)
        assert rep.overall
        failed = [c.name for c in rep.checks if c.passed is False]
        assert failed == []


def test_report_check_inventory(constantin, example, powerlaw):
    # the modulated family carries one extra record for its parameter window
    assert len(full_report(constantin).checks) == 14
    assert len(full_report(example).checks) == 15
    assert len(full_report(powerlaw).checks) == 14


def test_sandwich_skip_marker(constantin, example):
    rep = full_report(constantin)
    sandwich = next(c for c in rep.checks if c.name == "level_set_sandwich")
    assert sandwich.passed is None
    rep = full_report(example)
    sandwich = next(c for c in rep.checks if c.name == "level_set_sandwich")
    assert sandwich.passed is True


def test_report_serializes(example):
    rep = full_report(example)
    payload = rep.to_json_dict()
    assert payload["schema_version"] == 1
    text = json.dumps(payload, sort_keys=True)
    back = json.loads(text)
    assert back["overall"] == rep.overall
    assert len(back["checks"]) == len(rep.checks)


def test_report_deterministic(constantin):
    a = full_report(constantin, seed=7).to_json_dict()
    b = full_report(constantin, seed=7).to_json_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def _broken_model() -> VorticityModel:
    # f keeps the true square-root shape but the declared singular part is
    # a constant, so f != u - g and the split audit must flag it
    def f(u: float) -> float:
        return u - math.copysign(math.sqrt(abs(u)), u)

    def g(u: float) -> float:
        return 0.5

    def big_f(u: float) -> float:
        return 0.5 * u * u - (2.0 / 3.0) * abs(u) ** 1.5

    ledger = ConstantsLedger(u0=1.0, eta=28.0 / 9.0, L=1.0 + math.sqrt(2.0),
                             lambda_g=0.75, c=0.0, nu=0.5,
                             params={})
    return VorticityModel(model_id="broken", f=f, g=g, F=big_f, ledger=ledger)


def test_broken_decomposition_detected():
    model = _broken_model()
    rec = check_decomposition(model)
    assert rec.passed is False
    rep = full_report(model)
    assert rep.overall is False


def test_individual_checks_expose_witnesses(constantin):
    zero = check_zero(constantin)
    assert zero.passed
    assert abs(zero.witnesses["root"] - 1.0) <= 1e-9
    growth = check_growth(constantin, 10.0)
    assert growth.passed
    assert growth.witnesses["bound"] == pytest.approx(
        constantin.ledger.eta * 10.0)
    assert growth.witnesses["max_abs_f"] <= growth.witnesses["bound"]
    lip = check_lipschitz(constantin, 10.0)
    assert lip.passed
    assert lip.witnesses["max_slope"] < constantin.ledger.L
