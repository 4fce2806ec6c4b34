import io
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from vortexplane import (EventSpec, IntegrationConfig, ParameterDomainError,
                         Termination, integrate, integrate_backward,
                         integrate_from)


def test_against_reference_integrator(constantin, run10):
    # restart from the recorded state at r = 1 and carry it to r = 50 with
    # an independent high order method
    psi1, beta1 = run10.sample(1.0)

    def rhs(r, y):
        return [y[1], -y[1] / r - constantin.f(y[0])]

    sol = solve_ivp(rhs, (1.0, 50.0), [psi1, beta1], method="DOP853",
                    rtol=1e-12, atol=1e-12, dense_output=True)
    assert sol.success
    psi50, beta50 = run10.sample(50.0)
    assert abs(sol.y[0, -1] - psi50) < 1e-5
    assert abs(sol.y[1, -1] - beta50) < 1e-5


def test_energy_monotone_on_nodes(run10):
    diffs = np.diff(run10.E)
    assert float(diffs.max(initial=0.0)) <= 1e-7


def test_energy_balance(constantin, run10):
    # total drop equals the accumulated beta^2 / r dissipation
    drop = float(run10.E[0] - run10.E[-1])
    dissipated = float(np.sum(run10.dissipation))
    assert math.isclose(drop, dissipated, rel_tol=1e-6)


def test_backward_forward_round_trip(constantin):
    # backward sweeps store nodes ascending, so the far end is r[0]
    bw = integrate_backward(constantin, 6.0, 1.5, 0.2)
    r_low = float(bw.r[0])
    psi0, beta0 = bw.sample(r_low)
    fw = integrate_from(constantin, r_low, psi0, beta0,
                        IntegrationConfig(r_max=6.0))
    psi6, beta6 = fw.sample(6.0)
    assert abs(psi6 - 1.5) < 1e-8
    assert abs(beta6 - 0.2) < 1e-8


def test_sample_at_nodes(run10):
    for k in (0, 5, len(run10.r) // 2, len(run10.r) - 1):
        psi, beta = run10.sample(float(run10.r[k]))
        assert math.isclose(psi, float(run10.psi[k]), rel_tol=1e-13, abs_tol=1e-13)
        assert math.isclose(beta, float(run10.beta[k]), rel_tol=1e-13, abs_tol=1e-13)


def test_sample_outside_span_raises(run10):
    with pytest.raises(ParameterDomainError):
        run10.sample(2.0 * float(run10.r[-1]))


def test_terminal_event(constantin):
    # stop as soon as psi drops below 5; the event root must be the last node
    cfg = IntegrationConfig(r_max=200.0, events=(
        EventSpec(name="psi_below_5",
                  fn=lambda r, psi, beta: psi - 5.0,
                  direction=-1, terminal=True),))
    traj = integrate(constantin, 10.0, cfg)
    assert traj.termination is Termination.EVENT
    hits = [e for e in traj.events if e.name == "psi_below_5"]
    assert len(hits) == 1
    assert math.isclose(hits[0].r, float(traj.r[-1]), rel_tol=1e-12)
    psi_end, _ = traj.sample(hits[0].r)
    assert abs(psi_end - 5.0) < 1e-9


def test_handoff_radius_invariance(constantin):
    a = 10.0
    t1 = integrate(constantin, a, IntegrationConfig(r_max=50.0, r_handoff=1.0 / 16.0))
    t2 = integrate(constantin, a, IntegrationConfig(r_max=50.0, r_handoff=1.0 / 32.0))
    p1, b1 = t1.sample(50.0)
    p2, b2 = t2.sample(50.0)
    assert abs(p1 - p2) < 1e-6
    assert abs(b1 - b2) < 1e-6


def test_constant_orbit(constantin):
    traj = integrate(constantin, 1.0, IntegrationConfig(r_max=30.0))
    assert traj.termination is Termination.REACHED_RMAX
    assert float(np.max(np.abs(traj.psi - 1.0))) < 1e-12
    assert float(np.max(np.abs(traj.beta))) < 1e-12


def test_amplitude_below_one_rejected(constantin):
    with pytest.raises(ParameterDomainError):
        integrate(constantin, 0.5, IntegrationConfig(r_max=10.0))


def test_theta_resolved_per_step(run10):
    # the angle track never jumps by more than pi between nodes, so winding
    # counts read off theta are trustworthy
    assert float(np.max(np.abs(np.diff(run10.theta)))) < math.pi


def test_theta_monotone_trend(run10):
    # clockwise rotation: theta decreases over any full unit of radius
    r = run10.r
    theta = run10.theta
    for target in (10.0, 30.0, 60.0, 90.0):
        i = int(np.searchsorted(r, target))
        j = int(np.searchsorted(r, target + 1.0))
        assert theta[j] < theta[i]


def test_csv_round_trip(run10):
    buf = io.StringIO()
    run10.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "r,psi,beta,R,theta,E"
    assert len(lines) == len(run10.r) + 1
    first = [float(tok) for tok in lines[1].split(",")]
    assert first[0] == float(run10.r[0])
    assert first[1] == float(run10.psi[0])


def test_min_radius_tracks_dense_minimum(run10):
    node_min = float(np.min(run10.radius))
    assert run10.min_radius <= node_min + 1e-12
