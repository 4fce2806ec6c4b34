"""Orbit diagnostics: ring capture, energy-region entry, rotation counting,
and shooting for the origin.

Everything here consumes stored trajectories and refines features on the
cubic Hermite interpolant between accepted steps, so two trajectories with
the same stored points give identical diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (HypothesisViolationError, NoBracketError,
                     ParameterDomainError, ToleranceError)
from .integrator import (EventSpec, IntegrationConfig, Termination,
                         Trajectory, integrate)
from .vorticity import VorticityModel

_BISECTIONS = 60
_INVPHI = 0.6180339887498949
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- features

def _refine_crossing(traj: Trajectory, name: str, level: float,
                     i: int) -> Tuple[float, float]:
    """Root of quantity - level inside segment i of the Hermite interpolant.

    Bisection runs on the local coordinate sigma in [0, 1], whose full
    double resolution places the root far more finely than the nearest
    representable r ever could; returns (r, sigma).
    """
    lo, hi = 0.0, 1.0
    glo = traj.quantity_sigma(name, i, lo) - level
    for _ in range(_BISECTIONS):
        mid = 0.5 * (lo + hi)
        gm = traj.quantity_sigma(name, i, mid) - level
        if gm == 0.0:
            lo = hi = mid
            break
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    return float(traj.r[i]) + s * float(traj.r[i + 1] - traj.r[i]), s


def _first_crossing(traj: Trajectory, name: str, level: float,
                    falling: bool = True,
                    i_from: int = 0) -> Optional[Tuple[float, float, int]]:
    """(r, sigma, segment index) of the first directional level crossing."""
    vals = getattr(traj, name)
    for i in range(i_from, len(vals) - 1):
        a, b = float(vals[i]) - level, float(vals[i + 1]) - level
        hit = (a > 0.0 >= b) if falling else (a < 0.0 <= b)
        if hit:
            r_star, s = _refine_crossing(traj, name, level, i)
            return r_star, s, i
    return None


def _golden_min(traj: Trajectory, name: str, lo: float, hi: float,
                iters: int = 80) -> Tuple[float, float]:
    a_s, b_s = lo, hi
    c_s = b_s - _INVPHI * (b_s - a_s)
    d_s = a_s + _INVPHI * (b_s - a_s)
    fc = traj.quantity_at(name, c_s)
    fd = traj.quantity_at(name, d_s)
    for _ in range(iters):
        if fc < fd:
            b_s, d_s, fd = d_s, c_s, fc
            c_s = b_s - _INVPHI * (b_s - a_s)
            fc = traj.quantity_at(name, c_s)
        else:
            a_s, c_s, fc = c_s, d_s, fd
            d_s = a_s + _INVPHI * (b_s - a_s)
            fd = traj.quantity_at(name, d_s)
    mid = 0.5 * (a_s + b_s)
    return mid, traj.quantity_at(name, mid)


def refined_min_radius(traj: Trajectory,
                       r_from: Optional[float] = None) -> Tuple[float, float]:
    """(r, R) at the closest approach to the origin, combining the node
    minimum, a golden-section pass on the bracketing segments, and the
    minimum the stepper tracked inside its own steps."""
    mask = traj.r >= (traj.r[0] if r_from is None else r_from)
    if not np.any(mask):
        raise ParameterDomainError("r_from beyond the stored range")
    idx = np.flatnonzero(mask)
    j = idx[int(np.argmin(traj.radius[idx]))]
    lo = float(traj.r[max(j - 1, 0)])
    hi = float(traj.r[min(j + 1, len(traj.r) - 1)])
    best_r, best = (float(traj.r[j]), float(traj.radius[j]))
    if hi > lo:
        cand_r, cand = _golden_min(traj, "radius", lo, hi)
        if cand < best:
            best_r, best = cand_r, cand
    if traj.min_radius < best and \
            traj.min_radius_r >= (traj.r[0] if r_from is None else r_from):
        best_r, best = traj.min_radius_r, traj.min_radius
    return best_r, best


# ------------------------------------------------------------------- rings

@dataclass(frozen=True)
class RingSpec:
    """Annulus 1 + eps <= R <= 1 + delta used for capture statements.

    Admissibility of the widths against the model's ring constants:
    delta > eps > (1 + c)^(1/nu) - 1, so the inner circle clears the
    level where the outward flux term could balance the rotation.
    """
    epsilon: float
    delta: float
    c: float
    nu: float

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ParameterDomainError(f"nu must lie in (0, 1], got {self.nu!r}")
        if self.c < 0.0:
            raise ParameterDomainError(f"c must be nonnegative, got {self.c!r}")
        floor = (1.0 + self.c) ** (1.0 / self.nu) - 1.0
        if not self.delta > self.epsilon > floor:
            raise ParameterDomainError(
                f"need delta > epsilon > (1+c)^(1/nu) - 1 = {floor!r}, "
                f"got epsilon={self.epsilon!r}, delta={self.delta!r}")

    @classmethod
    def for_model(cls, model: VorticityModel, epsilon: float,
                  delta: float) -> "RingSpec":
        return cls(epsilon=epsilon, delta=delta, c=model.ledger.c,
                   nu=model.ledger.nu)

    @property
    def liminf_floor(self) -> float:
        return (1.0 + self.c) ** (1.0 / self.nu)

    def rate_eta(self, r_minus: float) -> float:
        """Certified rotation rate eta_hat = 1 - 1/(2 r_minus) - (1+eps)^-nu,
        valid while R >= 1 + eps and r >= r_minus."""
        return 1.0 - 0.5 / r_minus - (1.0 + self.epsilon) ** (-self.nu)


def rate_onset_radius(traj: Trajectory, ring: RingSpec,
                      margin: float = 0.01) -> float:
    """First stored node where the rotation-rate budget clears the margin:
    -1 + 1/(2r) + (1+eps)^-nu <= -margin."""
    s = (1.0 + ring.epsilon) ** (-ring.nu)
    room = 1.0 - s - margin
    if room <= 0.0:
        raise HypothesisViolationError(
            f"ring too tight: no radius gives rotation margin {margin!r}")
    threshold = 0.5 / room
    idx = np.flatnonzero(traj.r >= threshold)
    if len(idx) == 0:
        raise HypothesisViolationError(
            f"trajectory ends before the rate onset radius {threshold!r}")
    return float(traj.r[idx[0]])


@dataclass(frozen=True)
class RingEntry:
    r_entry: float
    psi: float
    beta: float
    min_radius_after: float
    min_radius_r: float
    liminf_floor: float


def ring_entry(traj: Trajectory, ring: RingSpec) -> Optional[RingEntry]:
    """First downward passage of R through 1 + delta, and the closest
    approach afterwards.  Requires the orbit to start well outside:
    R(start) > 8 (1 + delta)."""
    level = 1.0 + ring.delta
    if float(traj.radius[0]) <= 8.0 * level:
        raise HypothesisViolationError(
            f"start radius {float(traj.radius[0])!r} must exceed "
            f"8 (1 + delta) = {8.0 * level!r}")
    hit = _first_crossing(traj, "radius", level, falling=True)
    if hit is None:
        return None
    r_star, s_star, i = hit
    psi_star, beta_star = traj.sample_sigma(i, s_star)
    min_r, min_rad = refined_min_radius(traj, r_from=r_star)
    return RingEntry(r_entry=r_star, psi=psi_star, beta=beta_star,
                     min_radius_after=min_rad, min_radius_r=min_r,
                     liminf_floor=ring.liminf_floor)


# ---------------------------------------------------------- energy region

@dataclass(frozen=True)
class EnergyEntry:
    r_cross: float
    psi: float
    beta: float
    side: str
    rate: float
    transversal: bool
    energy_after: float


def e_region_entry(traj: Trajectory) -> Optional[EnergyEntry]:
    """First downward crossing of E through 0.

    E is nonincreasing along orbits, so there is at most one crossing; the
    entry is transversal when beta stays away from 0 there, in which case
    dE/dr = -beta^2/r < 0 and the orbit genuinely enters {E < 0}.
    """
    if float(traj.E[0]) <= 0.0:
        raise HypothesisViolationError(
            "energy must be positive at the start of the window")
    hit = _first_crossing(traj, "E", 0.0, falling=True)
    if hit is None:
        return None
    r_star, s_star, i = hit
    psi_star, beta_star = traj.sample_sigma(i, s_star)
    rate = -beta_star * beta_star / r_star
    transversal = abs(beta_star) > 1e-8
    return EnergyEntry(r_cross=r_star, psi=psi_star, beta=beta_star,
                       side="right" if psi_star > 0.0 else "left",
                       rate=rate, transversal=transversal,
                       energy_after=float(traj.E[i + 1]))


@dataclass(frozen=True)
class AxisCrossing:
    r: float
    psi: float
    beta: float
    residual: float
    transversal: bool


def transversality_check(traj: Trajectory,
                         r_to: Optional[float] = None) -> List[AxisCrossing]:
    """All psi = 0 crossings while E > 0: each must be transversal
    (|beta| > 1e-8) and satisfy the flow identity beta' + beta/r = -f(psi),
    whose residual at the axis is |f(psi*)| ~ 0."""
    out: List[AxisCrossing] = []
    stop = float(traj.r[-1]) if r_to is None else r_to
    for i in range(len(traj.r) - 1):
        if traj.r[i + 1] > stop:
            break
        a, b = float(traj.psi[i]), float(traj.psi[i + 1])
        if a == 0.0 or a * b >= 0.0:
            continue
        if float(traj.E[i]) <= 0.0 or float(traj.E[i + 1]) <= 0.0:
            continue
        r_star, s_star = _refine_crossing(traj, "psi", 0.0, i)
        psi_star, beta_star = traj.sample_sigma(i, s_star)
        beta_prime = -beta_star / r_star - traj.model.f(psi_star)
        residual = abs(beta_prime + beta_star / r_star)
        out.append(AxisCrossing(r=r_star, psi=psi_star, beta=beta_star,
                                residual=residual,
                                transversal=abs(beta_star) > 1e-8))
    return out


# ------------------------------------------------------- rotation counting

@dataclass(frozen=True)
class CrossingSequence:
    """Radii r_minus[n] / r_plus[n] where the unwrapped angle reaches
    theta_start + theta0 - 2 pi n and theta_start + theta1 - 2 pi n."""
    r_start: float
    r_end: float
    theta_start: float
    theta0: float
    theta1: float
    r_minus: np.ndarray
    r_plus: np.ndarray

    @property
    def count(self) -> int:
        return len(self.r_plus)


def _monotone_theta_crossing(traj: Trajectory, target: float, i_lo: int,
                             i_hi: int) -> float:
    """Radius where the (strictly decreasing) angle reaches target,
    searching nodes i_lo..i_hi."""
    th = traj.theta
    lo, hi = i_lo, i_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if th[mid] >= target:
            lo = mid
        else:
            hi = mid
    return _refine_crossing(traj, "theta", target, lo)[0]


def crossing_sequence(traj: Trajectory,
                      theta0: float = 3.0 * math.pi / 4.0,
                      theta1: float = math.pi / 4.0,
                      r_start: Optional[float] = None,
                      r_end: Optional[float] = None
                      ) -> Optional[CrossingSequence]:
    """Locate the per-rotation window passages, or None when the angle is
    not strictly decreasing across the requested span (e.g. after the orbit
    falls into a potential well and the rotation stalls)."""
    r_lo = float(traj.r[0]) if r_start is None else float(r_start)
    r_hi = float(traj.r[-1]) if r_end is None else float(r_end)
    if not (traj.r[0] <= r_lo < r_hi <= traj.r[-1]):
        raise ParameterDomainError(
            f"window [{r_lo!r}, {r_hi!r}] not inside the stored range")
    i_lo = traj.segment(r_lo)
    i_hi = traj.segment(r_hi) + 1
    if np.any(np.diff(traj.theta[i_lo:i_hi + 1]) >= 0.0):
        return None
    theta_start = traj.theta_at(r_lo)
    theta_end = traj.theta_at(r_hi)
    r_minus: List[float] = []
    r_plus: List[float] = []
    n = 1
    while True:
        tau_minus = theta_start + theta0 - TWO_PI * n
        tau_plus = theta_start + theta1 - TWO_PI * n
        if tau_minus >= theta_start or tau_plus < theta_end:
            if tau_minus >= theta_start:
                raise ParameterDomainError(
                    "theta0 must define a drop below the starting angle")
            break
        r_minus.append(_monotone_theta_crossing(traj, tau_minus, i_lo, i_hi))
        r_plus.append(_monotone_theta_crossing(traj, tau_plus, i_lo, i_hi))
        n += 1
    return CrossingSequence(r_start=r_lo, r_end=r_hi,
                            theta_start=theta_start, theta0=theta0,
                            theta1=theta1,
                            r_minus=np.asarray(r_minus),
                            r_plus=np.asarray(r_plus))


@dataclass(frozen=True)
class CrossingBoundsReport:
    """Numerical audit of the per-rotation estimates on a window where the
    certified rate eta_hat applies."""
    eta_hat: float
    rate_margin: float          # max sampled theta' + eta_hat (<= 0 wanted)
    gap_lower: float
    gap_upper: float
    gaps: np.ndarray
    gaps_ok: bool
    linear_bound_ok: bool       # r_plus[n] <= (2 pi n - theta drop)/eta_hat + r_start
    harmonic_terms: np.ndarray  # t_n = gap_n / (4 r_plus[n])
    harmonic_floors: np.ndarray
    harmonic_ok: bool
    harmonic_sum: float
    chain_ok: bool              # 2 eta_hat < 2 < (3+c)/(1+c) <= 3 - 2c(1+eps)^-nu

    @property
    def ok(self) -> bool:
        return (self.rate_margin <= 1e-9 and self.gaps_ok
                and self.linear_bound_ok and self.harmonic_ok
                and self.chain_ok)


def verify_crossing_bounds(traj: Trajectory, seq: CrossingSequence,
                           ring: RingSpec,
                           slack: float = 1e-9) -> CrossingBoundsReport:
    eta_hat = ring.rate_eta(seq.r_start)
    if eta_hat <= 0.0:
        raise HypothesisViolationError(
            f"nonpositive certified rate eta_hat = {eta_hat!r}")
    s = (1.0 + ring.epsilon) ** (-ring.nu)

    # sampled rotation rate on window nodes where the annulus hypothesis holds
    i_lo = traj.segment(seq.r_start)
    i_hi = traj.segment(seq.r_end) + 1
    margin = -math.inf
    for i in range(i_lo, i_hi + 1):
        if float(traj.radius[i]) < 1.0 + ring.epsilon:
            continue
        if not seq.r_start <= float(traj.r[i]) <= seq.r_end:
            continue
        _, dth = traj._quantity_node("theta", i)
        margin = max(margin, dth + eta_hat)

    gap_upper = 0.5 * math.pi / eta_hat
    gap_lower = math.pi / (3.0 - 2.0 * ring.c * s)
    gaps = seq.r_plus - seq.r_minus
    gaps_ok = bool(np.all(gaps <= gap_upper + slack)
                   and np.all(gaps >= gap_lower - slack))

    ns = np.arange(1, seq.count + 1, dtype=float)
    linear_cap = (TWO_PI * ns - math.pi / 4.0) / eta_hat + seq.r_start
    linear_ok = bool(np.all(seq.r_plus <= linear_cap + slack))

    terms = gaps / (4.0 * seq.r_plus)
    floors = (math.pi * eta_hat / (12.0 - 8.0 * ring.c * s)) \
        / (TWO_PI * ns - math.pi / 4.0 + eta_hat * seq.r_start)
    harmonic_ok = bool(np.all(terms >= floors - slack))

    chain_ok = (2.0 * eta_hat < 2.0 < (3.0 + ring.c) / (1.0 + ring.c)
                <= 3.0 - 2.0 * ring.c * s)

    return CrossingBoundsReport(
        eta_hat=eta_hat, rate_margin=margin,
        gap_lower=gap_lower, gap_upper=gap_upper, gaps=gaps, gaps_ok=gaps_ok,
        linear_bound_ok=linear_ok, harmonic_terms=terms,
        harmonic_floors=floors, harmonic_ok=harmonic_ok,
        harmonic_sum=float(np.sum(terms)), chain_ok=chain_ok)


# ---------------------------------------------------------------- shooting

@dataclass(frozen=True)
class ShotRecord:
    a: float
    outcome: str                # "left" | "right" | "origin"
    r_stop: float
    min_radius: float


@dataclass(frozen=True)
class ShootingResult:
    a_lo: float
    a_hi: float
    a_star: float
    origin_hit: bool
    min_radius_achieved: float
    history: List[ShotRecord] = field(default_factory=list)


def _classification_config(a: float, rel_tol: float,
                           model: VorticityModel) -> IntegrationConfig:
    def e_fn(r: float, psi: float, beta: float) -> float:
        return 0.5 * beta * beta + model.F(psi)

    # the well entry radius grows roughly quadratically in a
    r_max = 50.0 + 0.8 * a * a
    return IntegrationConfig(
        r_max=r_max, rel_tol=rel_tol, abs_tol=1e-12,
        events=(EventSpec("energy_zero", e_fn, direction=-1, terminal=True),))


def classify_shot(model: VorticityModel, a: float,
                  rel_tol: float = 1e-9) -> ShotRecord:
    """Run from psi(0) = a until the orbit either reaches the origin or
    spends its energy and falls toward one side's well."""
    traj = integrate(model, a, _classification_config(a, rel_tol, model))
    _, min_rad = refined_min_radius(traj)
    if traj.termination is Termination.ORIGIN_REACHED:
        return ShotRecord(a=a, outcome="origin", r_stop=float(traj.r[-1]),
                          min_radius=min_rad)
    if traj.termination is Termination.EVENT:
        psi_end = float(traj.psi[-1])
        return ShotRecord(a=a, outcome="right" if psi_end > 0.0 else "left",
                          r_stop=float(traj.r[-1]), min_radius=min_rad)
    raise ToleranceError(
        f"shot a={a!r} did not resolve within r <= "
        f"{_classification_config(a, rel_tol, model).r_max!r} "
        f"(termination {traj.termination.value})")


def scan_for_bracket(model: VorticityModel, a_start: float = 2.0,
                     a_stop: float = 20.0, step: float = 1.0,
                     rel_tol: float = 1e-9
                     ) -> Tuple[float, float, List[ShotRecord]]:
    """Walk start values until two consecutive shots fall on opposite sides."""
    history: List[ShotRecord] = []
    prev: Optional[ShotRecord] = None
    a = a_start
    while a <= a_stop + 1e-12:
        rec = classify_shot(model, a, rel_tol)
        history.append(rec)
        if prev is not None and rec.outcome != prev.outcome:
            return prev.a, rec.a, history
        prev = rec
        a += step
    raise NoBracketError(
        f"no classification change on [{a_start!r}, {a_stop!r}]")


def shoot_for_origin(model: VorticityModel, a_lo: float, a_hi: float,
                     tol: float = 1e-6, rel_tol: float = 1e-9,
                     max_iter: int = 60) -> ShootingResult:
    """Bisect between start values whose orbits fall on opposite sides.

    The orbit through the separating start value reaches the origin; the
    bisection squeezes the bracket to width tol and records the closest
    approach achieved along the way.
    """
    lo = classify_shot(model, a_lo, rel_tol)
    hi = classify_shot(model, a_hi, rel_tol)
    history = [lo, hi]
    if lo.outcome == "origin" or hi.outcome == "origin":
        star = lo if lo.outcome == "origin" else hi
        return ShootingResult(a_lo=a_lo, a_hi=a_hi, a_star=star.a,
                              origin_hit=True,
                              min_radius_achieved=star.min_radius,
                              history=history)
    if lo.outcome == hi.outcome:
        raise NoBracketError(
            f"both endpoints classify as {lo.outcome!r}; no separatrix "
            f"bracketed on [{a_lo!r}, {a_hi!r}]")
    left_a, right_a = a_lo, a_hi
    origin_hit = False
    for _ in range(max_iter):
        if right_a - left_a <= tol:
            break
        mid = 0.5 * (left_a + right_a)
        rec = classify_shot(model, mid, rel_tol)
        history.append(rec)
        if rec.outcome == "origin":
            origin_hit = True
            left_a = right_a = mid
            break
        if rec.outcome == lo.outcome:
            left_a = mid
        else:
            right_a = mid
    return ShootingResult(
        a_lo=left_a, a_hi=right_a, a_star=0.5 * (left_a + right_a),
        origin_hit=origin_hit,
        min_radius_achieved=min(r.min_radius for r in history),
        history=history)
