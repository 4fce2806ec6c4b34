"""Admissibility audit for vorticity models.

Each check samples a stated inequality with low-discrepancy points and
reports a CheckRecord: pass/fail, the tolerance used, and the witnesses
(extremal sample, location, certified constant) a reader needs to audit
the verdict.  A record with passed=None marks a check that does not apply
to the model at hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .sequences import kronecker, sample_interval, sample_loglin
from .vorticity import C2_UPPER_BOUND, VorticityModel, find_positive_zero

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CheckRecord:
    name: str
    passed: Optional[bool]
    tolerance: float
    witnesses: dict
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "witnesses": {k: v for k, v in sorted(self.witnesses.items())},
            "note": self.note,
        }


@dataclass
class AdmissibilityReport:
    model_id: str
    params: dict
    seed: int
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "model": self.model_id,
            "params": {k: v for k, v in sorted(self.params.items())},
            "seed": self.seed,
            "overall": self.overall,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def check_zero(model: VorticityModel, tol: float = 1e-9) -> CheckRecord:
    """The located positive zero of f agrees with the ledger value u0."""
    root = find_positive_zero(model)
    dev = abs(root - model.ledger.u0)
    return CheckRecord(
        name="positive_zero", passed=dev <= tol, tolerance=tol,
        witnesses={"root": root, "u0": model.ledger.u0, "deviation": dev})


def check_oddness(model: VorticityModel, n: int = 10_000, seed: int = 0,
                  tol: float = 1e-12) -> CheckRecord:
    """f(-u) = -f(u) on samples of [-100, 100]."""
    us = sample_interval(n, -100.0, 100.0, seed=seed)
    fv = model.f_grid(us)
    fm = model.f_grid(-us)
    dev = np.abs(fm + fv) / (1.0 + np.abs(fv))
    j = int(np.argmax(dev))
    return CheckRecord(
        name="oddness", passed=bool(dev[j] <= tol), tolerance=tol,
        witnesses={"max_relative_deviation": float(dev[j]),
                   "argmax": float(us[j])})


def check_decomposition(model: VorticityModel, n: int = 10_000, seed: int = 0,
                        tol: float = 1e-12) -> CheckRecord:
    """f(u) = u - g(u) exactly, sampled."""
    us = sample_interval(n, -100.0, 100.0, seed=seed)
    dev = np.abs(model.f_grid(us) - (us - model.g_grid(us))) \
        / (1.0 + np.abs(us))
    j = int(np.argmax(dev))
    return CheckRecord(
        name="decomposition", passed=bool(dev[j] <= tol), tolerance=tol,
        witnesses={"max_relative_deviation": float(dev[j]),
                   "argmax": float(us[j])})


def check_growth(model: VorticityModel, a: float, n: int = 10_000,
                 seed: int = 0, tol: float = 1e-12) -> CheckRecord:
    """eta lies in (3, 7/2] and |f| <= eta a on [(1-eta/4)a, (1+eta/4)a]."""
    eta = model.ledger.eta
    range_ok = 3.0 < eta <= 3.5
    lo, hi = (1.0 - eta / 4.0) * a, (1.0 + eta / 4.0) * a
    xs = sample_interval(n, lo, hi, seed=seed)
    fv = np.abs(model.f_grid(xs))
    j = int(np.argmax(fv))
    bound = eta * a
    bound_ok = bool(fv[j] <= bound * (1.0 + tol))
    return CheckRecord(
        name=f"growth_a_{a:g}", passed=range_ok and bound_ok, tolerance=tol,
        witnesses={"eta": eta, "max_abs_f": float(fv[j]),
                   "argmax": float(xs[j]), "bound": bound,
                   "interval": [lo, hi], "eta_in_range": range_ok})


def check_lipschitz(model: VorticityModel, a: float, n: int = 10_000,
                    seed: int = 0, tol: float = 1e-12) -> CheckRecord:
    """Adjacent-pair slopes on the growth interval stay within the ledger's
    Lipschitz constant, which itself sits at or below the 5/2 ceiling."""
    eta, L = model.ledger.eta, model.ledger.L
    lo, hi = (1.0 - eta / 4.0) * a, (1.0 + eta / 4.0) * a
    xs = np.sort(sample_interval(n, lo, hi, seed=seed))
    fv = model.f_grid(xs)
    dx = np.diff(xs)
    keep = dx > 1e-13 * max(1.0, hi)
    slopes = np.abs(np.diff(fv)[keep] / dx[keep])
    j = int(np.argmax(slopes))
    worst = float(slopes[j])
    return CheckRecord(
        name=f"lipschitz_a_{a:g}",
        passed=bool(worst <= L * (1.0 + tol) and L <= 2.5),
        tolerance=tol,
        witnesses={"max_slope": worst, "L": L, "ceiling": 2.5,
                   "interval": [lo, hi]})


def check_lambda(model: VorticityModel, n: int = 1000,
                 tol: float = 1e-10) -> CheckRecord:
    """Flux ratio: psi g(psi) >= 0 and
    int_0^psi g >= psi g(psi) / (2 lambda_g), sampled on a log grid."""
    lam = model.ledger.lambda_g
    psis = sample_loglin(n, 1e-3, 1e3, seed=0)
    flux = psis * model.g_grid(psis)
    # int_0^psi g = psi^2/2 - F(psi)
    gints = np.array([0.5 * p * p - model.F(float(p)) for p in psis])
    lhs_ok = bool(np.all(flux >= -tol * (1.0 + np.abs(flux))))
    margin = gints - flux / (2.0 * lam)
    scale = 1.0 + np.abs(flux)
    j = int(np.argmin(margin / scale))
    ratio_ok = bool(margin[j] / scale[j] >= -tol)
    return CheckRecord(
        name="flux_ratio", passed=lhs_ok and ratio_ok, tolerance=tol,
        witnesses={"lambda_g": lam,
                   "worst_margin": float(margin[j]),
                   "arg_worst": float(psis[j]),
                   "flux_nonnegative": lhs_ok,
                   "in_range": bool(0.0 < lam < 1.0)})


def check_ring_bound(model: VorticityModel, n: int = 10_000, seed: int = 0,
                     tol: float = 1e-9) -> CheckRecord:
    """-c/R^nu <= psi g(psi)/R^2 <= (1+c)/R^nu for |psi| <= R, sampled over
    radii and ray positions."""
    c, nu = model.ledger.c, model.ledger.nu
    pts = kronecker(n, dim=2, seed=seed)
    radii = 10.0 ** (-2.0 + 5.0 * pts[:, 0])
    ts = 2.0 * pts[:, 1] - 1.0
    psis = ts * radii
    vals = psis * model.g_grid(psis) / radii ** 2
    upper = (1.0 + c) * radii ** (-nu)
    lower = -c * radii ** (-nu)
    scale = np.maximum(1.0, radii ** (-nu))
    up_dev = np.max((vals - upper) / scale)
    lo_dev = np.max((lower - vals) / scale)
    return CheckRecord(
        name="ring_bound",
        passed=bool(up_dev <= tol and lo_dev <= tol), tolerance=tol,
        witnesses={"c": c, "nu": nu,
                   "upper_violation": float(up_dev),
                   "lower_violation": float(lo_dev)})


def check_level_set_sandwich(model: VorticityModel, n: int = 200,
                             tol: float = 1e-9) -> CheckRecord:
    """Modulated models only: the energy sits between the two reference
    surfaces R^2/2 - kappa (2/3)|psi|^{3/2} for kappa = 1+c1 (below) and
    kappa = 1-(c2-c1) (above)."""
    c2 = model.ledger.params.get("c2")
    if c2 is None:
        return CheckRecord(
            name="level_set_sandwich", passed=None, tolerance=tol,
            witnesses={}, note="needs the modulated model")
    c1 = math.sin(0.5 * c2)
    psis = np.linspace(-4.0, 4.0, n)
    betas = np.linspace(-4.0, 4.0, n)
    pot = np.array([model.F(float(p)) for p in psis])
    cubic = (2.0 / 3.0) * np.abs(psis) ** 1.5
    worst_lo, worst_hi = math.inf, math.inf
    for b in betas:
        e = 0.5 * b * b + pot
        base = 0.5 * (psis ** 2 + b * b)
        lower = base - (1.0 + c1) * cubic
        upper = base - (1.0 - (c2 - c1)) * cubic
        scale = 1.0 + np.abs(psis) ** 1.5
        worst_lo = min(worst_lo, float(np.min((e - lower) / scale)))
        worst_hi = min(worst_hi, float(np.min((upper - e) / scale)))
    return CheckRecord(
        name="level_set_sandwich",
        passed=bool(worst_lo >= -tol and worst_hi >= -tol), tolerance=tol,
        witnesses={"c1": c1, "c2": c2,
                   "lower_margin": worst_lo, "upper_margin": worst_hi})


def check_coercivity(model: VorticityModel) -> CheckRecord:
    """F(psi)/psi grows along 10^2, 10^3, 10^4: the quadratic part wins."""
    probes = [1e2, 1e3, 1e4]
    ratios = [model.F(p) / p for p in probes]
    ok = ratios[0] < ratios[1] < ratios[2] and ratios[-1] > 10.0
    return CheckRecord(
        name="coercivity", passed=ok, tolerance=0.0,
        witnesses={"probes": probes, "ratios": ratios})


def check_equilibrium_energy(model: VorticityModel) -> CheckRecord:
    """The nontrivial equilibrium sits strictly inside {E < 0}."""
    val = model.F(model.ledger.u0)
    return CheckRecord(
        name="equilibrium_energy", passed=val < 0.0, tolerance=0.0,
        witnesses={"u0": model.ledger.u0, "F_u0": val})


def check_parameter_bound(model: VorticityModel) -> Optional[CheckRecord]:
    """Modulated models only: c2 below the exact admissibility ceiling.

    The ceiling (3 - 2 sqrt 2)/(4 + 3 sqrt 2) = 0.02081528... is slightly
    above the convenient round figure 0.02, so c2 = 0.02 is admissible but
    the round figure is not itself a valid ceiling.
    """
    c2 = model.ledger.params.get("c2")
    if c2 is None:
        return None
    return CheckRecord(
        name="parameter_bound", passed=bool(0.0 < c2 < C2_UPPER_BOUND),
        tolerance=0.0,
        witnesses={"c2": c2, "exact_bound": C2_UPPER_BOUND,
                   "below_round_two_percent": bool(c2 < 0.02),
                   "round_figure_is_safe": bool(0.02 <= C2_UPPER_BOUND)})


def full_report(model: VorticityModel, a_values=(1.0, 10.0, 100.0),
                seed: int = 0) -> AdmissibilityReport:
    report = AdmissibilityReport(model_id=model.model_id,
                                 params=dict(model.ledger.params), seed=seed)
    report.checks.append(check_zero(model))
    report.checks.append(check_oddness(model, seed=seed))
    report.checks.append(check_decomposition(model, seed=seed))
    report.checks.append(check_lambda(model))
    report.checks.append(check_ring_bound(model, seed=seed))
    report.checks.append(check_coercivity(model))
    report.checks.append(check_equilibrium_energy(model))
    report.checks.append(check_level_set_sandwich(model))
    pb = check_parameter_bound(model)
    if pb is not None:
        report.checks.append(pb)
    for a in a_values:
        report.checks.append(check_growth(model, a, seed=seed))
        report.checks.append(check_lipschitz(model, a, seed=seed))
    return report
