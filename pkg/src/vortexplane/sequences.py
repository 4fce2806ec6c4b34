"""Deterministic low-discrepancy sampling.

All admissibility checks sample with additive (Kronecker) sequences so a
report is reproducible byte for byte given the same seed.  The 1-d
generator steps by the inverse golden ratio, the 2-d one by the inverse
powers of the plastic number; both are standard equidistributed choices.
"""

from __future__ import annotations

import numpy as np

# 1/phi and the 2-d generalization via the plastic number.
_GOLDEN_STEP = 0.6180339887498949
_PLASTIC = 1.3247179572447460


def kronecker(n: int, dim: int = 1, seed: int = 0) -> np.ndarray:
    """Return an (n, dim) array of quasi-random points in [0, 1).

    The seed only shifts the starting phase, so any seed gives the same
    equidistribution quality.
    """
    if n <= 0 or dim <= 0:
        raise ValueError("n and dim must be positive")
    if dim == 1:
        alphas = np.array([_GOLDEN_STEP])
    else:
        alphas = np.array([_PLASTIC ** -(j + 1) for j in range(dim)])
    phase = (seed * _GOLDEN_STEP + 0.5) % 1.0
    idx = np.arange(1, n + 1)[:, None]
    return (phase + idx * alphas[None, :]) % 1.0


def sample_interval(n: int, lo: float, hi: float, seed: int = 0) -> np.ndarray:
    """Quasi-random points of [lo, hi], endpoints included."""
    pts = lo + (hi - lo) * kronecker(n, 1, seed)[:, 0]
    pts[0] = lo
    if n > 1:
        pts[-1] = hi
    return pts


def sample_loglin(n: int, lo: float, hi: float, seed: int = 0) -> np.ndarray:
    """Quasi-random points that equidistribute in log scale on [lo, hi]."""
    if lo <= 0 or hi <= lo:
        raise ValueError("need 0 < lo < hi")
    return np.exp(sample_interval(n, np.log(lo), np.log(hi), seed))
