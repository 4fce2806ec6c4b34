import math

import numpy as np
import pytest

from vortexplane import (HypothesisViolationError, IntegrationConfig,
                         NoBracketError, ParameterDomainError, RingSpec,
                         classify_shot, crossing_sequence, e_region_entry,
                         integrate, rate_onset_radius, ring_entry,
                         scan_for_bracket, shoot_for_origin,
                         transversality_check, verify_crossing_bounds)
from vortexplane.analysis import refined_min_radius


def test_ring_spec_floor(constantin, example):
    ring = RingSpec.for_model(constantin, 0.05, 0.1)
    assert ring.liminf_floor == 1.0
    # the modulated model has c > 0, pushing the admissible floor to
    # (1 + c)^(1/nu) - 1 = (1.01)^2 - 1
    with pytest.raises(ParameterDomainError):
        RingSpec.for_model(example, 0.02, 0.1)
    ok = RingSpec.for_model(example, 0.05, 0.1)
    assert ok.liminf_floor == pytest.approx(1.01 ** 2)
    with pytest.raises(ParameterDomainError):
        RingSpec(epsilon=0.1, delta=0.1, c=0.0, nu=0.5)
    with pytest.raises(ParameterDomainError):
        RingSpec(epsilon=0.05, delta=0.1, c=0.0, nu=1.5)


def test_ring_rate_eta():
    ring = RingSpec(epsilon=0.05, delta=0.1, c=0.0, nu=0.5)
    r_minus = 40.0
    expected = 1.0 - 0.5 / 40.0 - 1.05 ** -0.5
    assert math.isclose(ring.rate_eta(r_minus), expected, rel_tol=1e-15)
    assert ring.rate_eta(r_minus) > 0.0


def test_energy_entry_frozen(run10):
    entry = e_region_entry(run10)
    assert entry is not None
    assert abs(entry.r_cross - 60.41671440543745) < 1e-6
    assert entry.side == "left"
    assert entry.psi < 0.0
    assert entry.transversal
    assert entry.rate < 0.0
    assert entry.energy_after < 0.0


def test_energy_entry_requires_positive_start(constantin, run10):
    entry = e_region_entry(run10)
    tail = integrate(constantin, 10.0, IntegrationConfig(r_max=100.0))
    # re-running from inside {E < 0} violates the hypothesis
    psi, beta = tail.sample(entry.r_cross + 5.0)
    from vortexplane import integrate_from
    inner = integrate_from(constantin, entry.r_cross + 5.0, psi, beta,
                           IntegrationConfig(r_max=90.0))
    with pytest.raises(HypothesisViolationError):
        e_region_entry(inner)


def test_transversality_roster(run10):
    crossings = transversality_check(run10)
    assert len(crossings) == 9
    for c in crossings:
        assert abs(c.psi) < 1e-8
        assert c.residual < 1e-8
        assert c.transversal
    radii = [c.r for c in crossings]
    assert radii == sorted(radii)


def test_ring_entry_frozen(constantin, run100):
    ring = RingSpec.for_model(constantin, 0.05, 0.1)
    entry = ring_entry(run100, ring)
    assert entry is not None
    assert abs(entry.r_entry - 1770.7261366824164) < 1e-5
    assert entry.min_radius_after <= 1.05
    assert entry.min_radius_after >= 0.0
    assert entry.r_entry < entry.min_radius_r <= float(run100.r[-1])


def test_ring_entry_requires_wide_start(constantin):
    ring = RingSpec.for_model(constantin, 0.05, 0.1)
    traj = integrate(constantin, 5.0, IntegrationConfig(r_max=10.0))
    with pytest.raises(HypothesisViolationError):
        ring_entry(traj, ring)


def test_rate_onset_frozen(constantin, run100):
    ring = RingSpec.for_model(constantin, 0.05, 0.1)
    r_minus = rate_onset_radius(run100, ring)
    assert abs(r_minus - 35.48918810499873) < 1e-6
    with pytest.raises(HypothesisViolationError):
        rate_onset_radius(run100, ring, margin=0.9999)


def test_crossing_sequence_run100(constantin, run100):
    ring = RingSpec.for_model(constantin, 0.05, 0.1)
    r_minus = rate_onset_radius(run100, ring)
    seq = crossing_sequence(run100, r_start=r_minus, r_end=1990.0)
    assert seq is not None
    assert seq.count == 195
    assert len(seq.r_minus) == len(seq.r_plus)
    assert np.all(seq.r_minus < seq.r_plus)
    assert np.all(np.diff(seq.r_plus) > 0.0)
    assert np.all(seq.r_minus >= r_minus)
    gaps = seq.r_plus - seq.r_minus
    # each passage takes at least one third of a turn divided by the top
    # angular speed, and the audit confirms the linear-in-n envelope
    assert float(np.min(gaps)) >= math.pi / 3.0 - 1e-3
    report = verify_crossing_bounds(run100, seq, ring, slack=1e-3)
    assert report.ok


def test_crossing_sequence_stalls_to_none(run10):
    # inside the potential well the angle is no longer strictly decreasing
    seq = crossing_sequence(run10, r_start=50.0, r_end=90.0)
    assert seq is None


def test_crossing_sequence_window_validation(run10):
    with pytest.raises(ParameterDomainError):
        crossing_sequence(run10, r_start=90.0, r_end=50.0)
    with pytest.raises(ParameterDomainError):
        crossing_sequence(run10, r_start=0.0, r_end=1e9)


def test_classify_shot_sides(constantin):
    assert classify_shot(constantin, 2.0).outcome == "right"
    assert classify_shot(constantin, 4.0).outcome == "left"


def test_scan_requires_sign_change(constantin):
    with pytest.raises(NoBracketError):
        scan_for_bracket(constantin, 2.0, 3.0, 1.0)


def test_shooting_frozen(constantin):
    a_lo, a_hi, history = scan_for_bracket(constantin, 2.0, 6.0, 1.0)
    assert a_lo == 3.0 and a_hi == 4.0
    assert {rec.outcome for rec in history} >= {"left", "right"}
    result = shoot_for_origin(constantin, a_lo, a_hi, tol=1e-6)
    assert abs(result.a_star - 3.0013413429260254) < 1e-3
    assert result.min_radius_achieved < 0.05
    assert result.a_lo <= result.a_star <= result.a_hi
    assert isinstance(result.origin_hit, bool)


def test_refined_min_radius(run10):
    r_at, value = refined_min_radius(run10)
    assert value <= float(np.min(run10.radius)) + 1e-12
    assert float(run10.r[0]) <= r_at <= float(run10.r[-1])
    with pytest.raises(ParameterDomainError):
        refined_min_radius(run10, r_from=2.0 * float(run10.r[-1]))
