"""Seeded random generators for profiles, frames, and directions.

Everything takes an explicit numpy Generator so callers own determinism.
"""

from __future__ import annotations

import math

import numpy as np

from .tensor import ExtremumTag, PinchingProfile, UnitaryFrameChange


def random_min_profile(
    rng: np.random.Generator, a_range: tuple[float, float] = (-10.0, 0.0)
) -> PinchingProfile:
    """Min-direction profile with a, b in ``a_range`` and |B| uniform in [0, A].

    Rejection-samples the A = 2b - a > 0 constraint so the minimum really
    sits at the first frame vector.
    """
    lo, hi = a_range
    while True:
        a = rng.uniform(lo, hi)
        b = rng.uniform(lo, hi)
        big_a = 2.0 * b - a
        if big_a > 1e-6 * max(1.0, abs(lo), abs(hi)):
            bmod = rng.uniform(0.0, big_a)
            return PinchingProfile(a, b, bmod, ExtremumTag.MIN_DIRECTION)


def haar_unitary(rng: np.random.Generator) -> UnitaryFrameChange:
    """Haar-distributed 2x2 unitary via QR of a complex Ginibre matrix."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryFrameChange(q)


def random_phase(rng: np.random.Generator) -> float:
    return float(rng.uniform(0.0, 2.0 * math.pi))
