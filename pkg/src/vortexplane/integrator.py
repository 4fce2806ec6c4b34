"""Adaptive integration of psi' = beta, beta' = -beta/r - f(psi).

The stepper is an embedded Dormand-Prince 5(4) pair with FSAL, PI step
control, and two dense representations per accepted step: the order-4
interpolant of the pair (used to integrate the dissipation density
beta^2/r with a 5-point Gauss rule) and the cubic Hermite of the stored
endpoints (used for event location, minimum-radius refinement, and all
after-the-fact sampling, so results never depend on which steps the
controller happened to take beyond their endpoints).

The left endpoint r = 0 is singular, so integrate() opens with a short
Picard series head on [0, r_handoff] computed by the fixed-point solver
and hands the state to the stepper at r_handoff.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import ParameterDomainError, ToleranceError
from .phaseplane import PhasePoint
from .quadrature import cumtrapz
from .vorticity import VorticityModel

TWO_PI = 2.0 * math.pi

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)

# dense-output polynomial: y(s) = y0 + h s (Q0 + s Q1 + s^2 Q2 + s^3 Q3),
# Q_j = sum_i k_i P[i][j]; each row of P sums to the 5th-order weight b_i
_P = (
    (1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0),
    (0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0),
    (0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0),
    (0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
     -1453857185.0 / 822651844.0),
    (0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
     69997945.0 / 29380423.0),
)

# 5-point Gauss-Legendre on [0, 1]
_GAUSS_S = (0.046910077030668004, 0.23076534494715845, 0.5,
            0.7692346550528415, 0.953089922969332)
_GAUSS_W = (0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
            0.23931433524968324, 0.11846344252809454)

_INVPHI = 0.6180339887498949
_EVENT_BISECTIONS = 60
_GOLDEN_ITERS = 80
_THETA_STEP_CAP = 0.9 * math.pi


class Termination(enum.Enum):
    REACHED_RMAX = "reached_rmax"
    ORIGIN_REACHED = "origin_reached"
    EVENT = "event"
    STEP_FAILURE = "step_failure"


class TrajectoryPoint(NamedTuple):
    r: float
    psi: float
    beta: float
    radius: float
    theta: float
    E: float


class EventRecord(NamedTuple):
    name: str
    r: float
    psi: float
    beta: float


@dataclass(frozen=True)
class EventSpec:
    """Scalar event g(r, psi, beta); a root is reported when g changes sign
    in the stated direction (-1 falling, +1 rising, 0 either)."""
    name: str
    fn: Callable[[float, float, float], float]
    direction: int = -1
    terminal: bool = False


@dataclass(frozen=True)
class IntegrationConfig:
    r_max: float
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    r_handoff: float = 0.0625
    picard_n: int = 512
    picard_tol: float = 1e-13
    max_steps: int = 2_000_000
    origin_radius: float = 1e-6
    # interior sampling for the radius minimum switches on below this R
    r_watch: float = 2.5
    events: Tuple[EventSpec, ...] = ()


def _hermite(y0: float, y1: float, d0: float, d1: float, h: float,
             s: float) -> float:
    s2 = s * s
    return ((1.0 + 2.0 * s) * (1.0 - s) ** 2 * y0
            + s * (1.0 - s) ** 2 * h * d0
            + s2 * (3.0 - 2.0 * s) * y1
            + s2 * (s - 1.0) * h * d1)


@dataclass
class Trajectory:
    """Accepted-step samples of one orbit, ascending in r.

    dissipation[i] holds int beta^2/r dr over [r[i], r[i+1]], evaluated
    from the stepper's own dense output, so cumulative sums reproduce the
    energy drop to integration accuracy.
    """
    model: VorticityModel
    r: np.ndarray
    psi: np.ndarray
    beta: np.ndarray
    radius: np.ndarray
    theta: np.ndarray
    E: np.ndarray
    dissipation: np.ndarray
    termination: Termination
    events: List[EventRecord]
    min_radius: float
    min_radius_r: float

    @property
    def model_id(self) -> str:
        return self.model.model_id

    @property
    def n_points(self) -> int:
        return len(self.r)

    def point(self, i: int) -> TrajectoryPoint:
        return TrajectoryPoint(float(self.r[i]), float(self.psi[i]),
                               float(self.beta[i]), float(self.radius[i]),
                               float(self.theta[i]), float(self.E[i]))

    def derivatives(self, i: int) -> Tuple[float, float]:
        """(psi', beta') at node i from the vector field itself."""
        r = float(self.r[i])
        psi = float(self.psi[i])
        beta = float(self.beta[i])
        if r == 0.0:
            return 0.0, -0.5 * self.model.f(psi)
        return beta, -beta / r - self.model.f(psi)

    def segment(self, r: float) -> int:
        """Index i with r[i] <= r <= r[i+1]."""
        if not self.r[0] <= r <= self.r[-1]:
            raise ParameterDomainError(
                f"r={r!r} outside the stored range "
                f"[{self.r[0]!r}, {self.r[-1]!r}]")
        i = int(np.searchsorted(self.r, r, side="right")) - 1
        return min(max(i, 0), len(self.r) - 2)

    def _hermite_state(self, i: int, s: float) -> Tuple[float, float]:
        h = float(self.r[i + 1] - self.r[i])
        d0 = self.derivatives(i)
        d1 = self.derivatives(i + 1)
        psi = _hermite(float(self.psi[i]), float(self.psi[i + 1]),
                       d0[0], d1[0], h, s)
        beta = _hermite(float(self.beta[i]), float(self.beta[i + 1]),
                        d0[1], d1[1], h, s)
        return psi, beta

    def sample(self, r: float) -> PhasePoint:
        """Dense state by cubic Hermite on the bracketing step."""
        i = self.segment(r)
        h = float(self.r[i + 1] - self.r[i])
        s = 0.0 if h == 0.0 else (r - float(self.r[i])) / h
        return PhasePoint(*self._hermite_state(i, s))

    def sample_sigma(self, i: int, s: float) -> PhasePoint:
        """Dense state at local coordinate s in [0, 1] of segment i; s keeps
        full precision where r itself would round to a grid endpoint."""
        return PhasePoint(*self._hermite_state(i, s))

    def quantity_sigma(self, name: str, i: int, s: float) -> float:
        h = float(self.r[i + 1] - self.r[i])
        y0, d0 = self._quantity_node(name, i)
        y1, d1 = self._quantity_node(name, i + 1)
        return _hermite(y0, y1, d0, d1, h, s)

    def _quantity_node(self, name: str, i: int) -> Tuple[float, float]:
        """(value, d/dr) of a derived quantity at node i."""
        r = float(self.r[i])
        psi = float(self.psi[i])
        beta = float(self.beta[i])
        dpsi, dbeta = self.derivatives(i)
        if name == "theta":
            rr = psi * psi + beta * beta
            dth = 0.0 if rr == 0.0 else (psi * dbeta - beta * dpsi) / rr
            return float(self.theta[i]), dth
        if name == "E":
            de = 0.0 if r == 0.0 else -beta * beta / r
            return float(self.E[i]), de
        if name == "radius":
            rad = float(self.radius[i])
            drad = 0.0 if rad == 0.0 else (psi * dpsi + beta * dbeta) / rad
            return rad, drad
        if name == "psi":
            return psi, dpsi
        if name == "beta":
            return beta, dbeta
        raise ValueError(f"unknown quantity {name!r}")

    def quantity_at(self, name: str, r: float) -> float:
        i = self.segment(r)
        h = float(self.r[i + 1] - self.r[i])
        s = 0.0 if h == 0.0 else (r - float(self.r[i])) / h
        return self.quantity_sigma(name, i, s)

    def theta_at(self, r: float) -> float:
        return self.quantity_at("theta", r)

    def energy_at(self, r: float) -> float:
        return self.quantity_at("E", r)

    def radius_at(self, r: float) -> float:
        return self.quantity_at("radius", r)

    def to_csv(self, fh) -> None:
        fh.write("r,psi,beta,R,theta,E\n")
        for i in range(len(self.r)):
            fh.write(f"{float(self.r[i])!r},{float(self.psi[i])!r},"
                     f"{float(self.beta[i])!r},{float(self.radius[i])!r},"
                     f"{float(self.theta[i])!r},{float(self.E[i])!r}\n")


def _initial_step(f: Callable[[float], float], r0: float, psi: float,
                  beta: float, direction: float, rel_tol: float,
                  abs_tol: float, span: float) -> float:
    # standard two-stage heuristic: trial Euler step, then bound by the
    # observed second derivative
    d_psi = beta
    d_beta = -beta / r0 - f(psi)
    sc_p = abs_tol + rel_tol * abs(psi)
    sc_b = abs_tol + rel_tol * abs(beta)
    d0 = math.sqrt(0.5 * ((psi / sc_p) ** 2 + (beta / sc_b) ** 2))
    d1 = math.sqrt(0.5 * ((d_psi / sc_p) ** 2 + (d_beta / sc_b) ** 2))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    r1 = r0 + direction * h0
    psi1 = psi + direction * h0 * d_psi
    beta1 = beta + direction * h0 * d_beta
    e_psi = beta1
    e_beta = -beta1 / r1 - f(psi1)
    d2 = math.sqrt(0.5 * (((e_psi - d_psi) / sc_p) ** 2
                          + ((e_beta - d_beta) / sc_b) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, 1e-3 * h0)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, span)


def _integrate_core(model: VorticityModel, r0: float, psi0: float,
                    beta0: float, theta0: float, r_target: float,
                    direction: float, config: IntegrationConfig,
                    rows: List[Tuple[float, float, float, float, float, float]],
                    diss: List[float],
                    events_out: List[EventRecord],
                    min_state: List[float]) -> Termination:
    """March from (r0, psi0, beta0) toward r_target; append accepted steps.

    rows/diss/events_out/min_state are mutated in place.  min_state is
    [min_radius, min_radius_r].  Rows are appended in integration order
    (callers reverse for backward runs).
    """
    f = model.f
    F = model.F
    rtol, atol = config.rel_tol, config.abs_tol
    span = abs(r_target - r0)
    if span <= 0.0:
        raise ParameterDomainError("empty integration range")
    h = _initial_step(f, r0, psi0, beta0, direction, rtol, atol, span)
    r, psi, beta, theta = r0, psi0, beta0, theta0
    k1p, k1b = beta, -beta / r - f(psi)
    facold = 1e-4
    nsteps = 0
    while True:
        if nsteps >= config.max_steps:
            return Termination.STEP_FAILURE
        if h < 1e-14 * max(1.0, abs(r)):
            return Termination.STEP_FAILURE
        last = False
        if direction * (r + direction * h - r_target) >= 0.0:
            h = abs(r_target - r)
            last = True
        hs = direction * h
        nsteps += 1

        p2 = psi + hs * _A21 * k1p
        b2 = beta + hs * _A21 * k1b
        r2 = r + _C2 * hs
        k2p, k2b = b2, -b2 / r2 - f(p2)
        p3 = psi + hs * (_A31 * k1p + _A32 * k2p)
        b3 = beta + hs * (_A31 * k1b + _A32 * k2b)
        r3 = r + _C3 * hs
        k3p, k3b = b3, -b3 / r3 - f(p3)
        p4 = psi + hs * (_A41 * k1p + _A42 * k2p + _A43 * k3p)
        b4 = beta + hs * (_A41 * k1b + _A42 * k2b + _A43 * k3b)
        r4 = r + _C4 * hs
        k4p, k4b = b4, -b4 / r4 - f(p4)
        p5 = psi + hs * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p)
        b5 = beta + hs * (_A51 * k1b + _A52 * k2b + _A53 * k3b + _A54 * k4b)
        r5 = r + _C5 * hs
        k5p, k5b = b5, -b5 / r5 - f(p5)
        p6 = psi + hs * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p
                         + _A65 * k5p)
        b6 = beta + hs * (_A61 * k1b + _A62 * k2b + _A63 * k3b + _A64 * k4b
                          + _A65 * k5b)
        r6 = r + hs
        k6p, k6b = b6, -b6 / r6 - f(p6)
        psi1 = psi + hs * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p
                           + _B6 * k6p)
        beta1 = beta + hs * (_B1 * k1b + _B3 * k3b + _B4 * k4b + _B5 * k5b
                             + _B6 * k6b)
        r1 = r_target if last else r + hs
        k7p, k7b = beta1, -beta1 / r1 - f(psi1)
        ep = hs * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p
                   + _E7 * k7p)
        eb = hs * (_E1 * k1b + _E3 * k3b + _E4 * k4b + _E5 * k5b + _E6 * k6b
                   + _E7 * k7b)
        sc_p = atol + rtol * max(abs(psi), abs(psi1))
        sc_b = atol + rtol * max(abs(beta), abs(beta1))
        err = math.sqrt(0.5 * ((ep / sc_p) ** 2 + (eb / sc_b) ** 2))
        if err > 1.0:
            h *= min(1.0, max(0.1, 0.9 * err ** -0.2))
            continue

        theta1 = math.atan2(beta1, psi1)
        theta1 += TWO_PI * round((theta - theta1) / TWO_PI)
        if abs(theta1 - theta) >= _THETA_STEP_CAP:
            # one step must never wrap the phase by anything close to a
            # half turn, or angle bookkeeping becomes ambiguous
            h *= 0.5
            continue

        # dense polynomial of the pair, for the dissipation quadrature
        q0 = (_P[0][0] * k1b + _P[2][0] * k3b + _P[3][0] * k4b
              + _P[4][0] * k5b + _P[5][0] * k6b + _P[6][0] * k7b)
        q1 = (_P[0][1] * k1b + _P[2][1] * k3b + _P[3][1] * k4b
              + _P[4][1] * k5b + _P[5][1] * k6b + _P[6][1] * k7b)
        q2 = (_P[0][2] * k1b + _P[2][2] * k3b + _P[3][2] * k4b
              + _P[4][2] * k5b + _P[5][2] * k6b + _P[6][2] * k7b)
        q3 = (_P[0][3] * k1b + _P[2][3] * k3b + _P[3][3] * k4b
              + _P[4][3] * k5b + _P[5][3] * k6b + _P[6][3] * k7b)

        def beta_dense(s: float) -> float:
            return beta + hs * s * (q0 + s * (q1 + s * (q2 + s * q3)))

        def diss_upto(s_hi: float) -> float:
            acc = 0.0
            for sg, wg in zip(_GAUSS_S, _GAUSS_W):
                s = s_hi * sg
                bd = beta_dense(s)
                acc += wg * bd * bd / (r + s * hs)
            return hs * s_hi * acc

        def state_dense(s: float) -> Tuple[float, float]:
            return (_hermite(psi, psi1, k1p, k7p, hs, s),
                    _hermite(beta, beta1, k1b, k7b, hs, s))

        # event roots on the Hermite interpolant
        hits: List[Tuple[float, EventSpec, float, float]] = []
        if config.events:
            grid_states = None
            for spec in config.events:
                g0 = spec.fn(r, psi, beta)
                g1 = spec.fn(r1, psi1, beta1)
                crossed = ((g0 > 0.0 >= g1 and spec.direction <= 0)
                           or (g0 < 0.0 <= g1 and spec.direction >= 0))
                if not crossed:
                    continue
                if grid_states is None:
                    grid_states = [(k / 10.0,) + state_dense(k / 10.0)
                                   for k in range(11)]
                gv = [(s, spec.fn(r + s * hs, ps, bs))
                      for s, ps, bs in grid_states]
                for j in range(10):
                    sa, ga = gv[j]
                    sb, gb = gv[j + 1]
                    ok = ((ga > 0.0 >= gb and spec.direction <= 0)
                          or (ga < 0.0 <= gb and spec.direction >= 0))
                    if not ok:
                        continue
                    lo_s, hi_s, glo = sa, sb, ga
                    for _ in range(_EVENT_BISECTIONS):
                        mid = 0.5 * (lo_s + hi_s)
                        pm, bm = state_dense(mid)
                        gm = spec.fn(r + mid * hs, pm, bm)
                        if glo * gm <= 0.0:
                            hi_s = mid
                        else:
                            lo_s, glo = mid, gm
                    s_star = 0.5 * (lo_s + hi_s)
                    ps, bs = state_dense(s_star)
                    hits.append((s_star, spec, ps, bs))
                    break
            hits.sort(key=lambda t: t[0])

        # radius minimum: refine inside the step only near the origin
        radius0 = math.hypot(psi, beta)
        radius1 = math.hypot(psi1, beta1)
        origin_s = None
        if min(radius0, radius1) < config.r_watch:
            rgrid = [(k / 10.0, math.hypot(*state_dense(k / 10.0)))
                     for k in range(11)]
            j_min = min(range(11), key=lambda j: rgrid[j][1])
            cand_s, cand_rad = rgrid[j_min]
            if cand_rad < min_state[0] or cand_rad < config.origin_radius:
                lo_s = rgrid[max(0, j_min - 1)][0]
                hi_s = rgrid[min(10, j_min + 1)][0]
                a_s, b_s = lo_s, hi_s
                c_s = b_s - _INVPHI * (b_s - a_s)
                d_s = a_s + _INVPHI * (b_s - a_s)
                fc = math.hypot(*state_dense(c_s))
                fd = math.hypot(*state_dense(d_s))
                for _ in range(_GOLDEN_ITERS):
                    if fc < fd:
                        b_s, d_s, fd = d_s, c_s, fc
                        c_s = b_s - _INVPHI * (b_s - a_s)
                        fc = math.hypot(*state_dense(c_s))
                    else:
                        a_s, c_s, fc = c_s, d_s, fd
                        d_s = a_s + _INVPHI * (b_s - a_s)
                        fd = math.hypot(*state_dense(d_s))
                s_ref = 0.5 * (a_s + b_s)
                rad_ref = math.hypot(*state_dense(s_ref))
                if rad_ref < cand_rad:
                    cand_s, cand_rad = s_ref, rad_ref
                if cand_rad < min_state[0]:
                    min_state[0] = cand_rad
                    min_state[1] = r + cand_s * hs
                if cand_rad < config.origin_radius:
                    origin_s = cand_s
        if radius1 < min_state[0]:
            min_state[0] = radius1
            min_state[1] = r1

        # earliest terminal event versus origin capture
        terminal_hit = next((t for t in hits if t[1].terminal), None)
        if origin_s is not None and (terminal_hit is None
                                     or origin_s < terminal_hit[0]):
            for s_star, spec, ps, bs in hits:
                if s_star <= origin_s:
                    events_out.append(EventRecord(spec.name, r + s_star * hs,
                                                  ps, bs))
            ps, bs = state_dense(origin_s)
            r_star = r + origin_s * hs
            th = math.atan2(bs, ps) if (ps != 0.0 or bs != 0.0) else theta
            th += TWO_PI * round((theta - th) / TWO_PI)
            rows.append((r_star, ps, bs, math.hypot(ps, bs), th,
                         0.5 * bs * bs + F(ps)))
            diss.append(diss_upto(origin_s))
            return Termination.ORIGIN_REACHED
        if terminal_hit is not None:
            s_term = terminal_hit[0]
            for s_star, spec, ps, bs in hits:
                if s_star <= s_term:
                    events_out.append(EventRecord(spec.name, r + s_star * hs,
                                                  ps, bs))
            ps, bs = terminal_hit[2], terminal_hit[3]
            r_star = r + s_term * hs
            th = math.atan2(bs, ps)
            th += TWO_PI * round((theta - th) / TWO_PI)
            rows.append((r_star, ps, bs, math.hypot(ps, bs), th,
                         0.5 * bs * bs + F(ps)))
            diss.append(diss_upto(s_term))
            return Termination.EVENT
        for s_star, spec, ps, bs in hits:
            events_out.append(EventRecord(spec.name, r + s_star * hs, ps, bs))

        rows.append((r1, psi1, beta1, radius1, theta1,
                     0.5 * beta1 * beta1 + F(psi1)))
        diss.append(diss_upto(1.0))
        if radius1 < config.origin_radius:
            return Termination.ORIGIN_REACHED
        if last:
            return Termination.REACHED_RMAX
        r, psi, beta, theta = r1, psi1, beta1, theta1
        k1p, k1b = k7p, k7b
        err = max(err, 1e-10)
        fac = 0.9 * err ** -0.17 * facold ** 0.04
        h *= min(10.0, max(0.2, fac))
        facold = err


def _assemble(model: VorticityModel,
              rows: Sequence[Tuple[float, float, float, float, float, float]],
              diss: Sequence[float], termination: Termination,
              events: List[EventRecord],
              min_state: Sequence[float]) -> Trajectory:
    arr = np.asarray(rows, dtype=float)
    return Trajectory(
        model=model,
        r=arr[:, 0], psi=arr[:, 1], beta=arr[:, 2],
        radius=arr[:, 3], theta=arr[:, 4], E=arr[:, 5],
        dissipation=np.asarray(diss, dtype=float),
        termination=termination,
        events=events,
        min_radius=float(min_state[0]),
        min_radius_r=float(min_state[1]),
    )


def series_start(model: VorticityModel, a: float,
                 config: IntegrationConfig) -> Tuple[np.ndarray, np.ndarray,
                                                     np.ndarray, np.ndarray]:
    """Picard head on [0, r_handoff]: (r, psi, beta, cumulative dissipation)
    on the fine fixed-point grid."""
    from .fixedpoint import beta_from_psi, picard_solve

    grid = picard_solve(model, a, r_end=config.r_handoff, n=config.picard_n,
                        tol=config.picard_tol)
    betas = beta_from_psi(model, grid)
    rs = grid.r
    dens = np.zeros_like(rs)
    dens[1:] = betas.values[1:] ** 2 / rs[1:]
    cum = cumtrapz(dens, float(rs[1] - rs[0]))
    return rs, grid.values, betas.values, cum


def integrate(model: VorticityModel, a: float,
              config: IntegrationConfig) -> Trajectory:
    """Orbit of the admissible profile from psi(0) = a, beta(0) = 0.

    The singular endpoint is covered by the Picard head; event detection
    starts at the handoff radius.
    """
    if a < 1.0:
        raise ParameterDomainError(f"start value a must be >= 1, got {a!r}")
    if config.r_max <= config.r_handoff:
        raise ParameterDomainError("r_max must exceed r_handoff")
    rs, psis, betas, cum = series_start(model, a, config)
    n = len(rs) - 1
    stride = max(1, n // 16)
    idx = list(range(0, n, stride)) + [n]

    rows: List[Tuple[float, float, float, float, float, float]] = []
    diss: List[float] = []
    theta_prev = 0.0
    for j in idx:
        psi_j, beta_j = float(psis[j]), float(betas[j])
        rad = math.hypot(psi_j, beta_j)
        th = math.atan2(beta_j, psi_j)
        th += TWO_PI * round((theta_prev - th) / TWO_PI)
        theta_prev = th
        rows.append((float(rs[j]), psi_j, beta_j, rad, th,
                     0.5 * beta_j * beta_j + model.F(psi_j)))
    for j0, j1 in zip(idx[:-1], idx[1:]):
        diss.append(float(cum[j1] - cum[j0]))

    head_min = float(np.min(np.hypot(psis, betas)))
    head_argmin = int(np.argmin(np.hypot(psis, betas)))
    min_state = [head_min, float(rs[head_argmin])]
    events: List[EventRecord] = []
    term = _integrate_core(model, config.r_handoff, rows[-1][1], rows[-1][2],
                           rows[-1][4], config.r_max, 1.0, config, rows, diss,
                           events, min_state)
    return _assemble(model, rows, diss, term, events, min_state)


def integrate_from(model: VorticityModel, r0: float, psi0: float,
                   beta0: float, config: IntegrationConfig) -> Trajectory:
    """Forward orbit from an interior state (r0 > 0)."""
    if r0 <= 0.0:
        raise ParameterDomainError(f"r0 must be positive, got {r0!r}")
    if config.r_max <= r0:
        raise ParameterDomainError("r_max must exceed r0")
    rad0 = math.hypot(psi0, beta0)
    theta0 = math.atan2(beta0, psi0)
    rows = [(r0, psi0, beta0, rad0, theta0,
             0.5 * beta0 * beta0 + model.F(psi0))]
    diss: List[float] = []
    events: List[EventRecord] = []
    min_state = [rad0, r0]
    term = _integrate_core(model, r0, psi0, beta0, theta0, config.r_max, 1.0,
                           config, rows, diss, events, min_state)
    return _assemble(model, rows, diss, term, events, min_state)


def integrate_backward(model: VorticityModel, T: float, psi_T: float,
                       beta_T: float, r_end: Optional[float] = None,
                       config: Optional[IntegrationConfig] = None) -> Trajectory:
    """Sweep from the anchor (T, psi_T, beta_T) down to r_end < T.

    Results are stored ascending in r like every other trajectory; the
    per-interval dissipation keeps the ascending orientation.
    """
    if r_end is None:
        if T <= 1.0:
            raise ParameterDomainError("default r_end needs T > 1")
        r_end = math.sqrt(T * T - 1.0)
    if not 0.0 < r_end < T:
        raise ParameterDomainError(
            f"need 0 < r_end < T, got r_end={r_end!r}, T={T!r}")
    if config is None:
        config = IntegrationConfig(r_max=T)
    rad0 = math.hypot(psi_T, beta_T)
    theta0 = math.atan2(beta_T, psi_T)
    rows = [(T, psi_T, beta_T, rad0, theta0,
             0.5 * beta_T * beta_T + model.F(psi_T))]
    diss: List[float] = []
    events: List[EventRecord] = []
    min_state = [rad0, T]
    term = _integrate_core(model, T, psi_T, beta_T, theta0, r_end, -1.0,
                           config, rows, diss, events, min_state)
    rows.reverse()
    diss = [-d for d in reversed(diss)]
    return _assemble(model, rows, diss, term, events, min_state)
