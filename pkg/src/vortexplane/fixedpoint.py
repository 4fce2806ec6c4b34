"""Fixed-point solvers for the profile equation near its two delicate spots.

Near r = 0 the equation is singular and the orbit through psi(0) = a,
beta(0) = 0 is the fixed point of

    (T psi)(r) = a - int_0^r (1/xi) int_0^xi tau f(psi(tau)) dtau dxi,

contractive on [0, r_end] for r_end <= 1 once f is Lipschitz on the
invariant ball |psi - a| <= eta a / 4.  Far out, anchoring at r = T and
sweeping back to sqrt(T^2 - 1) gives the system

    psi(r) = psi_T - int_r^T beta(s) ds,
    beta(r) = beta_T T / r + (1/r) int_r^T s f(psi(s)) ds,

a contraction in the weighted sup metric  sup max(|dpsi|, |dbeta|) e^{-kr}
for a window of rates k derived below.  Grid operators use the trapezoid
rule; the Simpson re-evaluation serves as an independent residual oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (FixedPointFailureError, InfeasibleConstantsError,
                     ParameterDomainError)
from .quadrature import cumsimpson, cumtrapz
from .vorticity import VorticityModel

_PHI_AT_3 = 44.0 * math.log(3.0) / (15.0 * math.log(3.0) + 2.0)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a scalar function on an ascending uniform grid."""
    r: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        return np.interp(x, self.r, self.values)

    @property
    def h(self) -> float:
        return float(self.r[1] - self.r[0])

    def __len__(self) -> int:
        return len(self.r)


def picard_solve(model: VorticityModel, a: float, r_end: float = 0.0625,
                 n: int = 512, tol: float = 1e-13,
                 max_iter: int = 200) -> GridFunction:
    """Iterate the short-range operator to its fixed point on [0, r_end].

    Every iterate must stay in the ball |psi - a| <= eta a / 4 (which in
    particular keeps psi >= a/8 > 0); escape or failure to converge within
    max_iter raises FixedPointFailureError.
    """
    if a < 1.0:
        raise ParameterDomainError(f"start value a must be >= 1, got {a!r}")
    if not 0.0 < r_end <= 1.0:
        raise ParameterDomainError(
            f"contraction certified for 0 < r_end <= 1, got {r_end!r}")
    if n < 8:
        raise ParameterDomainError("need at least 8 intervals")
    eta = model.ledger.eta
    rs = np.linspace(0.0, r_end, n + 1)
    h = float(rs[1] - rs[0])
    ball = eta * a / 4.0
    psi = np.full(n + 1, float(a))
    for _ in range(max_iter):
        w = rs * model.f_grid(psi)
        inner = cumtrapz(w, h)
        integrand = np.zeros(n + 1)
        integrand[1:] = inner[1:] / rs[1:]
        new = a - cumtrapz(integrand, h)
        dev = float(np.max(np.abs(new - a)))
        if dev > ball * (1.0 + 1e-12):
            raise FixedPointFailureError(
                f"iterate left the ball: |psi - a| reached {dev!r} "
                f"against radius {ball!r}")
        change = float(np.max(np.abs(new - psi)))
        psi = new
        if change <= tol * a:
            return GridFunction(rs, psi)
    raise FixedPointFailureError(
        f"no convergence within {max_iter} sweeps (last change {change!r})")


def picard_residual(model: VorticityModel, grid: GridFunction) -> float:
    """Sup distance between the grid and the operator re-applied with the
    Simpson rule; an oracle the trapezoid iteration never saw."""
    rs, psi = grid.r, grid.values
    a = float(psi[0])
    h = grid.h
    w = rs * model.f_grid(psi)
    inner = cumsimpson(w, h)
    integrand = np.zeros(len(rs))
    integrand[1:] = inner[1:] / rs[1:]
    outer = cumsimpson(integrand, h)
    return float(np.max(np.abs((a - outer) - psi)))


def beta_from_psi(model: VorticityModel, grid: GridFunction) -> GridFunction:
    """beta = -(1/r) int_0^r tau f(psi) dtau on the same grid (beta(0) = 0)."""
    rs, psi = grid.r, grid.values
    w = rs * model.f_grid(psi)
    inner = cumsimpson(w, grid.h)
    beta = np.zeros(len(rs))
    beta[1:] = -inner[1:] / rs[1:]
    return GridFunction(rs, beta)


def rate_transform(lam: float) -> float:
    """phi(lambda) = 44 ln(lambda) / (15 ln(lambda) + 2), increasing on
    (1, infty); its value at 3 caps the Lipschitz bounds this construction
    can absorb."""
    if lam <= 1.0:
        raise ParameterDomainError("rate transform needs lambda > 1")
    ln = math.log(lam)
    return 44.0 * ln / (15.0 * ln + 2.0)


@dataclass(frozen=True)
class ContractionConstants:
    """Certified rate window for the backward weighted metric."""
    T: float
    L: float
    lam_star: float
    lam_mid: float
    k_lo: float
    k_hi: float
    k: float
    zeta: float


def select_contraction_constants(T: float = 6.0,
                                 L: float = 1.0 + math.sqrt(2.0)
                                 ) -> ContractionConstants:
    """Pick the metric rate k and contraction bound zeta for anchor T.

    lam_star solves rate_transform(lam) = L; the midpoint toward 3 gives
    slack, k_lo collects the ball and Lipschitz requirements, k_hi is the
    ceiling (T + sqrt(T^2 - 1)) ln(lam_mid) coming from the exponential
    comparison e^x <= 1 + lam x on [0, ln lam].  Geometric mean k keeps
    zeta = k_lo / k strictly below 1.
    """
    if T < 6.0:
        raise ParameterDomainError(f"anchor radius must be >= 6, got {T!r}")
    if L >= _PHI_AT_3:
        raise InfeasibleConstantsError(
            f"Lipschitz bound {L!r} is not below the rate-transform "
            f"ceiling {_PHI_AT_3!r}")
    if L <= 0.0:
        raise ParameterDomainError("Lipschitz bound must be positive")
    lo, hi = 1.0 + 1e-12, 3.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rate_transform(mid) < L:
            lo = mid
        else:
            hi = mid
    lam_star = 0.5 * (lo + hi)
    lam_mid = 0.5 * (lam_star + 3.0)
    mll = lam_mid * math.log(lam_mid)
    k_lo = max(mll, L * (1.25 * mll + 0.5))
    k_hi = (T + math.sqrt(T * T - 1.0)) * math.log(lam_mid)
    if not k_lo < k_hi:
        raise InfeasibleConstantsError(
            f"rate window empty: k_lo={k_lo!r} >= k_hi={k_hi!r}")
    k = math.sqrt(k_lo * k_hi)
    return ContractionConstants(T=T, L=L, lam_star=lam_star, lam_mid=lam_mid,
                                k_lo=k_lo, k_hi=k_hi, k=k, zeta=k_lo / k)


def _tail(values: np.ndarray, h: float) -> np.ndarray:
    """int_r^T of grid samples via the trapezoid rule."""
    cum = cumtrapz(values, h)
    return cum[-1] - cum


def banach_solve(model: VorticityModel, T: float, psi_T: float, beta_T: float,
                 n: int = 2048, tol: float = 1e-12, max_iter: int = 400,
                 constants: Optional[ContractionConstants] = None
                 ) -> Tuple[GridFunction, GridFunction, float]:
    """Backward fixed point on [sqrt(T^2 - 1), T] anchored at (psi_T, beta_T).

    Returns the psi and beta grids plus the largest observed contraction
    ratio of successive weighted distances, which must stay below the
    certified zeta.  Iterates are confined to the domain
    |psi - psi_T| <= eta psi_T / 4, |beta| <= 2 |beta_T| + eta psi_T.
    """
    if constants is None:
        constants = select_contraction_constants(
            T=T, L=min(model.ledger.L, 2.5))
    if psi_T < 1.0:
        raise ParameterDomainError(
            f"anchor value psi_T must be >= 1, got {psi_T!r}")
    eta = model.ledger.eta
    if abs(beta_T) > eta * psi_T / 8.0:
        raise ParameterDomainError(
            f"anchor slope too steep: |beta_T| must be <= eta psi_T / 8 "
            f"= {eta * psi_T / 8.0!r}")
    r_lo = math.sqrt(T * T - 1.0)
    rs = np.linspace(r_lo, T, n + 1)
    h = float(rs[1] - rs[0])
    weight = np.exp(-constants.k * (rs - r_lo))
    psi_ball = eta * psi_T / 4.0
    beta_ball = 2.0 * abs(beta_T) + eta * psi_T

    psi = np.full(n + 1, float(psi_T))
    beta = beta_T * T / rs
    prev_wdist = None
    factor = 0.0
    floor = 1e3 * np.finfo(float).eps * max(1.0, psi_T)
    for _ in range(max_iter):
        new_psi = psi_T - _tail(beta, h)
        new_beta = beta_T * T / rs + _tail(rs * model.f_grid(psi), h) / rs
        dev_psi = float(np.max(np.abs(new_psi - psi_T)))
        dev_beta = float(np.max(np.abs(new_beta)))
        if dev_psi > psi_ball * (1.0 + 1e-12) \
                or dev_beta > beta_ball * (1.0 + 1e-12):
            raise FixedPointFailureError(
                f"iterate left the domain: |psi-psi_T|={dev_psi!r} "
                f"(ball {psi_ball!r}), |beta|={dev_beta!r} "
                f"(ball {beta_ball!r})")
        gap = np.maximum(np.abs(new_psi - psi), np.abs(new_beta - beta))
        wdist = float(np.max(gap * weight))
        change = float(np.max(gap))
        psi, beta = new_psi, new_beta
        if prev_wdist is not None and prev_wdist > floor:
            factor = max(factor, wdist / prev_wdist)
        prev_wdist = wdist
        if change <= tol * max(1.0, psi_T):
            return GridFunction(rs, psi), GridFunction(rs, beta), factor
    raise FixedPointFailureError(
        f"no convergence within {max_iter} sweeps (last change {change!r})")


@dataclass(frozen=True)
class DichotomyCertificate:
    """Numerical witness that (u0, 0) is reached only by the constant orbit.

    Uniqueness of the backward fixed point forces any orbit passing through
    (psi, beta) = (u0, 0) at some radius in the window to coincide with the
    equilibrium there, and then everywhere by continuation; the certificate
    records how far the computed fixed point and a forward sweep actually
    stray from the constant.
    """
    anchor_psi: float
    T: float
    backward_psi_dev: float
    backward_beta_dev: float
    contraction_factor: float
    zeta: float
    forward_psi_dev: float
    forward_beta_dev: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return (max(self.backward_psi_dev, self.backward_beta_dev,
                    self.forward_psi_dev, self.forward_beta_dev)
                <= self.tolerance
                and self.contraction_factor <= self.zeta)


def equilibrium_dichotomy_certificate(model: VorticityModel, T: float = 6.0,
                                      tolerance: float = 1e-10
                                      ) -> DichotomyCertificate:
    from .integrator import IntegrationConfig, integrate_from

    u0 = model.ledger.u0
    constants = select_contraction_constants(T=T, L=min(model.ledger.L, 2.5))
    psi_g, beta_g, factor = banach_solve(model, T, u0, 0.0,
                                         constants=constants)
    r_lo = math.sqrt(T * T - 1.0)
    config = IntegrationConfig(r_max=T, rel_tol=1e-12, abs_tol=1e-14)
    traj = integrate_from(model, r_lo, u0, 0.0, config)
    return DichotomyCertificate(
        anchor_psi=u0,
        T=T,
        backward_psi_dev=float(np.max(np.abs(psi_g.values - u0))),
        backward_beta_dev=float(np.max(np.abs(beta_g.values))),
        contraction_factor=factor,
        zeta=constants.zeta,
        forward_psi_dev=float(np.max(np.abs(traj.psi - u0))),
        forward_beta_dev=float(np.max(np.abs(traj.beta))),
        tolerance=tolerance,
    )
