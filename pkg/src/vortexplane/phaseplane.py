"""Phase-plane quantities for the damped system psi' = beta, beta' = -beta/r - f(psi).

Energy E = beta^2/2 + F(psi) decays like E' = -beta^2/r along orbits.  This
module evaluates E and its first three radial derivatives, the polar angle
dynamics, the zero level set of E (the lobes), and the scaling factor that
projects a phase point onto that level set along its ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import (HypothesisViolationError, NotDifferentiableError,
                     OriginReachedSignal, ParameterDomainError)
from .vorticity import VorticityModel, potential_grid

TWO_PI = 2.0 * math.pi


class PhasePoint(NamedTuple):
    psi: float
    beta: float


class PolarPoint(NamedTuple):
    radius: float
    angle: float


def energy(model: VorticityModel, point: PhasePoint) -> float:
    psi, beta = point
    return 0.5 * beta * beta + model.F(psi)


def energy_rate(point: PhasePoint, r: float) -> float:
    """dE/dr = -beta^2/r; model independent."""
    _, beta = point
    if r <= 0.0:
        raise ParameterDomainError(f"r must be positive, got {r!r}")
    return -beta * beta / r


def energy_second(model: VorticityModel, point: PhasePoint, r: float) -> float:
    """d2E/dr2 = 3 beta^2/r^2 + 2 beta f(psi)/r."""
    psi, beta = point
    if r <= 0.0:
        raise ParameterDomainError(f"r must be positive, got {r!r}")
    return 3.0 * beta * beta / (r * r) + 2.0 * beta * model.f(psi) / r


def _fprime(model: VorticityModel, psi: float) -> float:
    # central difference; the kink of g at 0 makes the stencil meaningless
    # when it straddles the origin
    h = 1e-6 * (1.0 + abs(psi))
    if abs(psi) <= 2.0 * h:
        raise NotDifferentiableError(
            f"f'(psi) requested within {2*h:.2e} of the kink at psi=0")
    return (model.f(psi + h) - model.f(psi - h)) / (2.0 * h)

def energy_third(model: VorticityModel, point: PhasePoint, r: float) -> float:
    """d3E/dr3 via the chain rule; f' by central difference.

    Raises NotDifferentiableError when psi sits on (or numerically at) the
    kink of f, where the one-sided slopes diverge.
    """
    psi, beta = point
    if r <= 0.0:
        raise ParameterDomainError(f"r must be positive, got {r!r}")
    fp = model.f(psi)
    d_beta = -beta / r - fp
    dd_beta = -d_beta / r + beta / (r * r) - _fprime(model, psi) * beta
    return (-2.0 * d_beta * d_beta / r
            + (2.0 * beta / r) * (-dd_beta + 2.0 * d_beta / r - beta / (r * r)))


def energy_second_third(model: VorticityModel, point: PhasePoint,
                        r: float) -> Tuple[float, float]:
    return energy_second(model, point, r), energy_third(model, point, r)


def to_polar(point: PhasePoint, prev_angle: Optional[float] = None) -> PolarPoint:
    """Polar form (R, theta) with psi = R cos(theta), beta = R sin(theta).

    With prev_angle given, the branch of theta is chosen within pi of it
    (continuous unwrapping).  The origin has no angle: OriginReachedSignal.
    """
    psi, beta = point
    radius = math.hypot(psi, beta)
    if radius == 0.0:
        raise OriginReachedSignal("polar angle undefined at the origin")
    theta = math.atan2(beta, psi)
    if prev_angle is not None:
        theta += TWO_PI * round((prev_angle - theta) / TWO_PI)
    return PolarPoint(radius, theta)


def theta_rhs(model: VorticityModel, point: PhasePoint, r: float) -> float:
    """dtheta/dr = -1 - sin(2 theta)/(2r) + psi g(psi)/R^2."""
    psi, beta = point
    if r <= 0.0:
        raise ParameterDomainError(f"r must be positive, got {r!r}")
    rr = psi * psi + beta * beta
    if rr == 0.0:
        raise OriginReachedSignal("angular rate undefined at the origin")
    # psi*beta/(r R^2) is sin(2 theta)/(2r)
    return -1.0 - (psi * beta) / (rr * r) + psi * model.g(psi) / rr


def theta_envelope(lambda_g: float, r: float) -> Tuple[float, float]:
    """Bounds for dtheta/dr while E > 0 and r >= 1:

        -1 - 1/(2r) <= dtheta/dr <= -(1 - lambda_g) + 1/(2r).
    """
    if r < 1.0:
        raise ParameterDomainError(f"envelope requires r >= 1, got {r!r}")
    if not 0.0 < lambda_g < 1.0:
        raise ParameterDomainError(
            f"lambda_g must lie in (0, 1), got {lambda_g!r}")
    return -1.0 - 0.5 / r, -(1.0 - lambda_g) + 0.5 / r


@dataclass(frozen=True)
class LevelSetGeometry:
    """Right lobe of {E = 0}: psi in [0, psi_plus], beta = +-sqrt(-2F)."""
    psi_minus: float
    psi_plus: float
    psi_grid: np.ndarray
    beta_grid: np.ndarray
    peak_curvature: float


def _bisect(fn, lo: float, hi: float, iters: int = 200,
            tol: float = 1e-14) -> float:
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo <= tol * max(1.0, abs(mid)):
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def level_set_geometry(model: VorticityModel, n: int = 1024,
                       scan_hi: float = 16.0) -> LevelSetGeometry:
    """Trace the right lobe of E = 0 and measure its tip.

    psi_plus is the largest positive root of F; psi_minus the smallest.
    For odd f with a single positive zero the two coincide and the lobe is
    the single arc beta^2 = -2 F(psi) over [0, psi_plus].  The tip
    curvature is computed from the graph psi(beta), which stays smooth
    across the tip: kappa = -psi''(beta=0) equals 1/f(psi_plus).
    """
    probes = np.linspace(0.0, scan_hi, 2000)[1:]
    fvals = potential_grid(model, probes)
    roots = []
    for j in range(len(probes) - 1):
        if fvals[j] == 0.0:
            roots.append(float(probes[j]))
        elif fvals[j] * fvals[j + 1] < 0.0:
            roots.append(_bisect(model.F, float(probes[j]), float(probes[j + 1])))
    if not roots:
        raise HypothesisViolationError(
            "F has no positive root on the scan range; level set unbounded")
    psi_minus, psi_plus = roots[0], roots[-1]
    if psi_plus <= model.ledger.u0:
        raise HypothesisViolationError(
            "level set root does not clear the positive equilibrium")

    psis = np.linspace(0.0, psi_plus, n)
    pot = potential_grid(model, psis)
    betas = np.sqrt(np.maximum(0.0, -2.0 * pot))
    betas[-1] = 0.0

    # 5-point second difference of psi(beta) at the tip; psi is even in beta
    def psi_of_beta(b: float) -> float:
        target = -0.5 * b * b
        return _bisect(lambda p: model.F(p) - target,
                       model.ledger.u0, psi_plus + 1.0)

    d = 0.01
    p0 = psi_plus
    p1 = psi_of_beta(d)
    p2 = psi_of_beta(2.0 * d)
    curv = -(-2.0 * p2 + 32.0 * p1 - 30.0 * p0) / (12.0 * d * d)
    return LevelSetGeometry(psi_minus, psi_plus, psis, betas, curv)


def scaled_lobe_peak(eps: float) -> float:
    """Tip abscissa of the reference lobe beta^2 = (4/3)(1+eps)|psi|^{3/2} - psi^2."""
    return (16.0 / 9.0) * (1.0 + eps) ** 2


def scaled_lobe_curve(eps: float, n: int = 512) -> Tuple[np.ndarray, np.ndarray]:
    """Upper branch of the reference lobe with modulation factor 1 + eps."""
    peak = scaled_lobe_peak(eps)
    psis = np.linspace(0.0, peak, n)
    val = (4.0 / 3.0) * (1.0 + eps) * psis ** 1.5 - psis ** 2
    return psis, np.sqrt(np.maximum(0.0, val))


def iota(model: VorticityModel, point: PhasePoint,
         scan_points: int = 400) -> Optional[float]:
    """Ray scaling onto the zero level set: smallest iota > 0 with
    E(iota psi, iota beta) = 0, or None when the ray misses the lobes.

    Points on the beta axis scale to the origin only (E > 0 along the whole
    ray), hence None.  For the square-root model the closed form
    iota = (16/9)|psi|^3 / R^4 is used; it is even in (psi, beta) -> -(psi, beta)
    like the generic answer.
    """
    psi, beta = point
    if psi == 0.0:
        return None
    if model.model_id == "constantin":
        rr = psi * psi + beta * beta
        if rr == 0.0:
            return None
        return (16.0 / 9.0) * abs(psi) ** 3 / (rr * rr)

    def e_ray(t: float) -> float:
        return 0.5 * (t * beta) ** 2 + model.F(t * psi)

    # E(t .) < 0 for small t (the subquadratic well wins), so scan for the
    # first sign change on a log grid
    lo_exp, hi_t = -12.0, (scaled_lobe_peak(1.0) + 2.0) / abs(psi)
    ts = np.logspace(lo_exp, math.log10(hi_t), scan_points)
    prev_t, prev_v = 0.0, -0.0
    for t in ts:
        v = e_ray(float(t))
        if v == 0.0:
            return float(t)
        if prev_v < 0.0 <= v:
            return _bisect(e_ray, prev_t, float(t))
        prev_t, prev_v = float(t), v
    return None


def radius_bound(model: VorticityModel, energy0: float) -> float:
    """Apriori bound on R while E <= energy0: sqrt(psi_max^2 + 2(energy0 - F(u0)))
    where psi_max solves F(psi) = energy0 on [u0, inf)."""
    if energy0 < 0.0:
        raise ParameterDomainError("energy0 must be nonnegative")
    u0 = model.ledger.u0
    hi = max(2.0 * u0, 2.0)
    while model.F(hi) <= energy0:
        hi *= 2.0
        if hi > 1e9:
            raise HypothesisViolationError("potential fails to reach energy0")
    psi_max = _bisect(lambda p: model.F(p) - energy0, u0, hi)
    return math.sqrt(psi_max ** 2 + 2.0 * (energy0 - model.F(u0)))
