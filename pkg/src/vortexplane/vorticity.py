"""Vorticity function models.

A model packages the nonlinearity f of the radial profile equation

    psi'' + psi'/r + f(psi) = 0,        f(u) = u - g(u),

together with its potential F(psi) = int_0^psi f(u) du and a ledger of
certified constants used by the solvers and checks:

    u0        positive zero of f (f vanishes exactly at 0 and +-u0)
    eta       growth constant for the short-range existence ball,
              |f(xi)| <= eta*a on [(1-eta/4)a, (1+eta/4)a], eta in (3, 7/2]
    L         Lipschitz bound for f on the same family of intervals
    lambda_g  flux ratio bound: int_0^psi g >= psi*g(psi)/(2*lambda_g)
    c, nu     ring bound: -c/R^nu <= psi*g(psi)/R^2 <= (1+c)/R^nu for |psi|<=R

All scalar callables accept and return plain floats; the *_arr variants
are vectorized over numpy arrays and exist for grid-based solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import HypothesisViolationError, ParameterDomainError
from .quadrature import adaptive_simpson

# exact admissibility ceiling for the modulated model parameter:
# (3 - 2*sqrt(2)) / (4 + 3*sqrt(2)); the rounded figure 0.02 that gets
# quoted for convenience is strictly below this value
C2_UPPER_BOUND = (3.0 - 2.0 * math.sqrt(2.0)) / (4.0 + 3.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class ConstantsLedger:
    u0: float
    eta: float
    L: float
    lambda_g: float
    c: float
    nu: float
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VorticityModel:
    model_id: str
    f: Callable[[float], float]
    g: Callable[[float], float]
    F: Callable[[float], float]
    ledger: ConstantsLedger
    f_arr: Optional[Callable[[np.ndarray], np.ndarray]] = None
    g_arr: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # True when F itself goes through quadrature, in which case grid
    # evaluations should use potential_grid to amortize the cost
    quadrature_potential: bool = False

    @property
    def u0(self) -> float:
        return self.ledger.u0

    def f_grid(self, u: np.ndarray) -> np.ndarray:
        if self.f_arr is not None:
            return self.f_arr(np.asarray(u, dtype=float))
        return np.array([self.f(float(x)) for x in np.asarray(u).ravel()]).reshape(np.shape(u))

    def g_grid(self, u: np.ndarray) -> np.ndarray:
        if self.g_arr is not None:
            return self.g_arr(np.asarray(u, dtype=float))
        return np.array([self.g(float(x)) for x in np.asarray(u).ravel()]).reshape(np.shape(u))


def constantin_model() -> VorticityModel:
    """f(u) = u - sign(u) sqrt(|u|), the square-root vorticity profile."""

    def f(u: float) -> float:
        if u > 0.0:
            return u - math.sqrt(u)
        if u < 0.0:
            return u + math.sqrt(-u)
        return 0.0

    def g(u: float) -> float:
        if u > 0.0:
            return math.sqrt(u)
        if u < 0.0:
            return -math.sqrt(-u)
        return 0.0

    def F(psi: float) -> float:
        a = abs(psi)
        return 0.5 * psi * psi - (2.0 / 3.0) * a * math.sqrt(a)

    ledger = ConstantsLedger(
        u0=1.0,
        eta=28.0 / 9.0,
        L=1.0 + math.sqrt(2.0),
        lambda_g=0.75,
        c=0.0,
        nu=0.5,
    )
    return VorticityModel(
        model_id="constantin",
        f=f, g=g, F=F, ledger=ledger,
        f_arr=lambda u: u - np.sign(u) * np.sqrt(np.abs(u)),
        g_arr=lambda u: np.sign(u) * np.sqrt(np.abs(u)),
    )


def example_model(c2: float) -> VorticityModel:
    """Sinusoidally modulated square-root profile.

    g(u) = sign(u) sqrt(|u|) (1 + c1 - sin(c2 u^2/(u^2+1))) with
    c1 = sin(c2/2), admissible for 0 < c2 < C2_UPPER_BOUND.  The
    modulation keeps u0 = 1 while breaking the closed-form potential.
    """
    if not 0.0 < c2 < C2_UPPER_BOUND:
        raise ParameterDomainError(
            f"c2 must lie in (0, {C2_UPPER_BOUND!r}), got {c2!r}")
    c1 = math.sin(0.5 * c2)

    def modulation(u: float) -> float:
        uu = u * u
        return 1.0 + c1 - math.sin(c2 * uu / (uu + 1.0))

    def f(u: float) -> float:
        if u == 0.0:
            return 0.0
        s = math.sqrt(abs(u)) * modulation(u)
        return u - s if u > 0.0 else u + s

    def g(u: float) -> float:
        if u == 0.0:
            return 0.0
        s = math.sqrt(abs(u)) * modulation(u)
        return s if u > 0.0 else -s

    def sin_part(u: float) -> float:
        uu = u * u
        return math.sqrt(u) * math.sin(c2 * uu / (uu + 1.0))

    def F(psi: float) -> float:
        x = abs(psi)
        if x == 0.0:
            return 0.0
        tol = 1e-10 * max(1.0, x ** 1.5)
        s = adaptive_simpson(sin_part, 0.0, x, tol=tol)
        return 0.5 * psi * psi - (1.0 + c1) * (2.0 / 3.0) * x ** 1.5 + s

    def f_arr(u: np.ndarray) -> np.ndarray:
        uu = u * u
        mod = 1.0 + c1 - np.sin(c2 * uu / (uu + 1.0))
        return u - np.sign(u) * np.sqrt(np.abs(u)) * mod

    def g_arr(u: np.ndarray) -> np.ndarray:
        uu = u * u
        mod = 1.0 + c1 - np.sin(c2 * uu / (uu + 1.0))
        return np.sign(u) * np.sqrt(np.abs(u)) * mod

    ledger = ConstantsLedger(
        u0=1.0,
        eta=10.0 / 3.0,
        L=2.5,
        lambda_g=0.75 / (1.0 + math.sin(0.5 * c2) - math.sin(c2)),
        c=0.5 * c2,
        nu=0.5,
        params={"c2": c2},
    )
    return VorticityModel(
        model_id="example",
        f=f, g=g, F=F, ledger=ledger,
        f_arr=f_arr, g_arr=g_arr,
        quadrature_potential=True,
    )


def power_law_model(alpha: float) -> VorticityModel:
    """f(u) = u - sign(u) |u|^alpha for an exponent alpha in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ParameterDomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    eta = 28.0 / 9.0

    def f(u: float) -> float:
        if u > 0.0:
            return u - u ** alpha
        if u < 0.0:
            return u + (-u) ** alpha
        return 0.0

    def g(u: float) -> float:
        if u > 0.0:
            return u ** alpha
        if u < 0.0:
            return -((-u) ** alpha)
        return 0.0

    def F(psi: float) -> float:
        a = abs(psi)
        return 0.5 * psi * psi - a ** (1.0 + alpha) / (1.0 + alpha)

    ledger = ConstantsLedger(
        u0=1.0,
        eta=eta,
        # slope ceiling attained at the left edge of the smallest window,
        # xi = (1 - eta/4) * a with a = 1
        L=1.0 + alpha * (1.0 - 0.25 * eta) ** (alpha - 1.0),
        lambda_g=0.5 * (1.0 + alpha),
        c=0.0,
        nu=1.0 - alpha,
        params={"alpha": alpha},
    )
    return VorticityModel(
        model_id="powerlaw",
        f=f, g=g, F=F, ledger=ledger,
        f_arr=lambda u: u - np.sign(u) * np.abs(u) ** alpha,
        g_arr=lambda u: np.sign(u) * np.abs(u) ** alpha,
    )


def make_model(model_id: str, c2: Optional[float] = None,
               alpha: Optional[float] = None) -> VorticityModel:
    """Build a model from its string id plus numeric parameters."""
    if model_id == "constantin":
        return constantin_model()
    if model_id == "example":
        return example_model(0.02 if c2 is None else c2)
    if model_id == "powerlaw":
        return power_law_model(0.5 if alpha is None else alpha)
    raise ParameterDomainError(f"unknown model id {model_id!r}")


def potential(model: VorticityModel, psi: float) -> float:
    """F(psi) through the model's own evaluator."""
    return model.F(psi)


def potential_by_quadrature(model: VorticityModel, psi: float,
                            tol: float = 1e-12) -> float:
    """F(psi) by direct adaptive quadrature of f; the independent route."""
    if psi == 0.0:
        return 0.0
    return adaptive_simpson(model.f, 0.0, psi, tol=tol)


def potential_grid(model: VorticityModel, psis: np.ndarray) -> np.ndarray:
    """Evaluate F on an ascending nonnegative grid.

    Closed-form models map directly; quadrature-backed models integrate f
    segment by segment so the grid costs one sweep instead of one full
    integral per node.
    """
    psis = np.asarray(psis, dtype=float)
    if psis.ndim != 1 or len(psis) == 0:
        raise ValueError("psis must be a nonempty 1-d array")
    if np.any(np.diff(psis) < 0.0) or psis[0] < 0.0:
        raise ValueError("psis must be ascending and nonnegative")
    if not model.quadrature_potential:
        return np.array([model.F(float(p)) for p in psis])
    out = np.empty(len(psis))
    acc = adaptive_simpson(model.f, 0.0, float(psis[0]), tol=1e-12) \
        if psis[0] > 0.0 else 0.0
    out[0] = acc
    for j in range(1, len(psis)):
        seg = adaptive_simpson(model.f, float(psis[j - 1]), float(psis[j]),
                               tol=1e-13 * max(1.0, float(psis[j])))
        acc += seg
        out[j] = acc
    return out


def find_positive_zero(model: VorticityModel, hi: float = 2.0,
                       probes: int = 200, tol: float = 1e-13) -> float:
    """Locate the positive zero of f by probing (0, hi] and bisecting.

    Raises HypothesisViolationError when no sign change (or exact zero)
    shows up among the probes, e.g. for f(u) = u.
    """
    us = [hi * (k + 1) / probes for k in range(probes)]
    vals = [model.f(u) for u in us]
    for u, v in zip(us, vals):
        if v == 0.0:
            return u
    lo_u = None
    for j in range(len(us) - 1):
        if vals[j] * vals[j + 1] < 0.0:
            lo_u, hi_u = us[j], us[j + 1]
            flo = vals[j]
            break
    if lo_u is None:
        raise HypothesisViolationError(
            "f has no sign change on the probe grid; no positive zero found")
    for _ in range(200):
        mid = 0.5 * (lo_u + hi_u)
        fm = model.f(mid)
        if fm == 0.0 or hi_u - lo_u <= tol * max(1.0, mid):
            return mid
        if flo * fm < 0.0:
            hi_u = mid
        else:
            lo_u, flo = mid, fm
    return 0.5 * (lo_u + hi_u)
