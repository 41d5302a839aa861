"""Holomorphic sectional curvature over directions.

Closed forms for the extrema and the Gaussian average of the sectional
curvature, independent brute-force/Monte-Carlo oracles for both, the
critical-direction test, extremal-locus classification, and recovery of
the critical normal form from a tensor given in an arbitrary frame.

In a min-direction normal form with A = 2b - a, sigma = A + |B| and
tau = A - |B|, the curvature along a unit direction z is

    H(z) = a + 2*(sigma*u^2 + tau*v^2),   u + i v = z1 * conj(z2) * e^{i theta/2},

which pins K_min = a, K_max = a + sigma/2 and K_av = (2/3)(a + b).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .tensor import (
    DOWNSTREAM_TOL,
    SYMMETRY_TOL,
    CurvatureTensor,
    ExtremumTag,
    PinchingProfile,
    UnitaryFrameChange,
    build_tensor,
    frame_change,
    validate,
)

UNIT_NORM_TOL = 1e-12
_REFINE_STEP_FLOOR = 1e-12


class Locus(enum.Enum):
    """Shape of an extremal set in the projective line of directions."""

    TWO_POINTS = "two-points"
    CIRCLE = "circle"
    ALL_DIRECTIONS = "all-directions"


@dataclass(frozen=True)
class Direction:
    """Unit tangent direction z1*e1 + z2*e2."""

    z1: complex
    z2: complex

    def __post_init__(self):
        n = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if not math.isfinite(n) or abs(n - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"direction must be unit (|z|^2 = {n})")

    @classmethod
    def normalized(cls, z1: complex, z2: complex) -> "Direction":
        n = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(z1 / n, z2 / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2], dtype=complex)

    def canonical(self) -> "Direction":
        """Projective representative whose first nonzero coordinate is real
        and positive."""
        pivot = self.z1 if abs(self.z1) > 1e-12 else self.z2
        phase = pivot / abs(pivot)
        z1, z2 = self.z1 / phase, self.z2 / phase
        # +0.0 folds any -0.0 parts so canonical output is byte-stable
        return Direction(
            complex(z1.real + 0.0, z1.imag + 0.0), complex(z2.real + 0.0, z2.imag + 0.0)
        )

    def sort_key(self) -> tuple[float, float, float, float]:
        return (self.z1.real, self.z1.imag, self.z2.real, self.z2.imag)

    def to_json(self) -> list[list[float]]:
        return [[self.z1.real, self.z1.imag], [self.z2.real, self.z2.imag]]


@dataclass(frozen=True)
class CurvatureSummary:
    k_min: float
    k_max: float
    k_av: float
    sigma: float
    tau: float
    argmin_dirs: tuple[Direction, ...]
    argmax_dirs: tuple[Direction, ...]
    locus_min: Locus
    locus_max: Locus

    def __post_init__(self):
        slack = 1e-9 * max(1.0, abs(self.k_min), abs(self.k_max))
        if not (self.k_min <= self.k_av + slack and self.k_av <= self.k_max + slack):
            raise ValueError("summary must satisfy k_min <= k_av <= k_max")


class BruteExtrema(NamedTuple):
    k_min: float
    k_max: float
    argmin: Direction
    argmax: Direction


class MonteCarloAverage(NamedTuple):
    estimate: float
    stderr: float


def _pair_matrix(tensor: CurvatureTensor) -> np.ndarray:
    # H(z) = w . M . conj(w) with w = z (x) z flattened; indices grouped as
    # (unbarred pair, barred pair).
    return np.ascontiguousarray(
        np.transpose(tensor.components, (0, 2, 1, 3)).reshape(4, 4)
    )


def _quartic_batch(pair: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Raw quartic form sum R z z̄ z z̄ (no normalization)."""
    w = (zs[:, :, None] * zs[:, None, :]).reshape(len(zs), 4)
    return np.einsum("ni,ij,nj->n", w, pair, np.conj(w))


def _sec_batch(pair: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Projective sectional values (w.M.w̄)/(w.w̄), complex.

    Dividing by the squared norm computed from the same product vector
    makes constant-curvature tensors evaluate bit-exactly and removes the
    normalization noise of approximately-unit directions.
    """
    w = (zs[:, :, None] * zs[:, None, :]).reshape(len(zs), 4)
    mw = np.conj(w) @ pair.T
    num = (w * mw).sum(axis=1)
    den = (w * np.conj(w)).sum(axis=1).real
    return num / den


def holo_sec(tensor: CurvatureTensor, zeta: Direction) -> float:
    """Sectional curvature sum R_{a b̄ g d̄} z^a conj(z)^b z^g conj(z)^d."""
    z = zeta.as_array()
    value = complex(_sec_batch(_pair_matrix(tensor), z[None, :])[0])
    if abs(value.imag) > SYMMETRY_TOL * max(1.0, tensor.scale()):
        raise ValueError(
            f"sectional curvature came out non-real (imag {value.imag:.3e}); "
            "the tensor is probably not symmetric"
        )
    return value.real


def _degeneracy_tol(profile: PinchingProfile, tol: float | None) -> float:
    if tol is not None:
        return tol
    return 1e-8 * max(1.0, abs(profile.sigma))


def extremal_locus(
    profile: PinchingProfile, tol: float | None = None
) -> tuple[Locus, Locus]:
    """Classify where K_min and K_max live in the projective line.

    tau > 0 isolates the minimum at the two frame points; tau = 0 < sigma
    spreads the minimum over a circle while the maximum stays at two
    points; sigma = tau = 0 is the constant-curvature case.
    """
    if profile.tag is not ExtremumTag.MIN_DIRECTION:
        raise ValueError("extremal locus expects a min-direction profile")
    eps = _degeneracy_tol(profile, tol)
    if profile.tau > eps:
        return (Locus.TWO_POINTS, Locus.TWO_POINTS)
    if profile.sigma > eps:
        return (Locus.CIRCLE, Locus.TWO_POINTS)
    return (Locus.ALL_DIRECTIONS, Locus.ALL_DIRECTIONS)


_SQ2 = 1.0 / math.sqrt(2.0)


def curvature_summary(profile: PinchingProfile) -> CurvatureSummary:
    """Closed-form extrema and Gaussian average for a normal-form profile.

    For a max-direction profile the mirrored formulas apply with the roles
    of minimum and maximum exchanged.
    """
    if profile.tag is ExtremumTag.MAX_DIRECTION:
        # Mirror trick: negating a and b flips the sign of every curvature,
        # but also of the off-diagonal component, which shifts the extremal
        # phase by pi/2: the minimizing pair sits at (1/sqrt2, +-i/sqrt2).
        mirrored = curvature_summary(
            PinchingProfile(-profile.a, -profile.b, profile.bmod, ExtremumTag.MIN_DIRECTION)
        )
        if mirrored.locus_max is Locus.ALL_DIRECTIONS:
            argmin: tuple[Direction, ...] = mirrored.argmax_dirs
        else:
            argmin = (Direction(_SQ2, -1j * _SQ2), Direction(_SQ2, 1j * _SQ2))
        return CurvatureSummary(
            k_min=-mirrored.k_max,
            k_max=-mirrored.k_min,
            k_av=-mirrored.k_av,
            sigma=profile.sigma,
            tau=profile.tau,
            argmin_dirs=argmin,
            argmax_dirs=mirrored.argmin_dirs,
            locus_min=mirrored.locus_max,
            locus_max=mirrored.locus_min,
        )
    if profile.tag is not ExtremumTag.MIN_DIRECTION:
        raise ValueError("curvature summary expects a min- or max-direction profile")

    locus_min, locus_max = extremal_locus(profile)
    frame_points = (Direction(1.0, 0.0), Direction(0.0, 1.0))
    balanced = (Direction(_SQ2, -_SQ2), Direction(_SQ2, _SQ2))
    if locus_min is Locus.ALL_DIRECTIONS:
        argmin: tuple[Direction, ...] = frame_points
        argmax: tuple[Direction, ...] = frame_points
    else:
        argmin = frame_points
        argmax = balanced
    return CurvatureSummary(
        k_min=profile.a,
        k_max=profile.a + profile.sigma / 2.0,
        k_av=(2.0 / 3.0) * (profile.a + profile.b),
        sigma=profile.sigma,
        tau=profile.tau,
        argmin_dirs=argmin,
        argmax_dirs=argmax,
        locus_min=locus_min,
        locus_max=locus_max,
    )


def _hemisphere_grid(grid_n: int) -> np.ndarray:
    # Phase gauge: z1 real >= 0 covers every projective direction once.
    theta = np.linspace(0.0, math.pi / 2.0, grid_n)
    phi = np.linspace(0.0, 2.0 * math.pi, grid_n, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    z1 = np.cos(tt).ravel().astype(complex)
    z2 = (np.sin(tt) * np.exp(1j * pp)).ravel()
    return np.stack([z1, z2], axis=1)


def _orthogonal_complement(z: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(z[1]), np.conj(z[0])])


_POLL_PHASES = np.exp(0.25j * math.pi * np.arange(8))


def _pattern_search(
    pair: np.ndarray, z0: np.ndarray, sign: float, step: float, iters: int
) -> tuple[np.ndarray, float]:
    """Derivative-free descent of sign*H on the direction sphere.

    Each iteration polls eight tangent moves step*e^{ik pi/4}*w around the
    current point; a successful direction is ridden with doubling pattern
    moves (this is what tracks the nearly-flat circular valleys of small
    |B| tensors), and the step halves when a full poll fails.
    """
    z = z0 / np.linalg.norm(z0)
    best = sign * float(_sec_batch(pair, z[None, :])[0].real)
    for _ in range(iters):
        if step < _REFINE_STEP_FLOOR:
            break
        w = _orthogonal_complement(z)
        cand = z[None, :] + step * _POLL_PHASES[:, None] * w[None, :]
        cand /= np.linalg.norm(cand, axis=1)[:, None]
        vals = sign * _sec_batch(pair, cand).real
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            z = cand[k]
            phase = _POLL_PHASES[k]
            ride = 2.0 * step
            for _ in range(60):
                w = _orthogonal_complement(z)
                nxt = z + ride * phase * w
                nxt /= np.linalg.norm(nxt)
                val = sign * float(_sec_batch(pair, nxt[None, :])[0].real)
                if val < best:
                    best = val
                    z = nxt
                    ride *= 2.0
                else:
                    break
        else:
            step *= 0.5
    return z, sign * best


def brute_extrema(
    tensor: CurvatureTensor, grid_n: int = 64, refine_iters: int = 200
) -> BruteExtrema:
    """Grid scan plus local refinement; the independent extremum oracle.

    Works on any symmetric tensor through the full contraction, never
    through the closed forms it is meant to check.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    pair = _pair_matrix(tensor)
    zs = _hemisphere_grid(grid_n)
    vals = _sec_batch(pair, zs).real
    step0 = min(0.25, math.pi / grid_n)

    z_min, k_min = _pattern_search(pair, zs[int(np.argmin(vals))], 1.0, step0, refine_iters)
    z_max, k_max = _pattern_search(pair, zs[int(np.argmax(vals))], -1.0, step0, refine_iters)
    return BruteExtrema(
        k_min=k_min,
        k_max=k_max,
        argmin=Direction.normalized(z_min[0], z_min[1]).canonical(),
        argmax=Direction.normalized(z_max[0], z_max[1]).canonical(),
    )


def gauss_moment(p: int, q: int) -> float:
    """Exact Gaussian moment: integral of |z1|^{2p} |z2|^{2q} e^{-r^2}
    over C^2 equals pi^2 * p! * q!."""
    if p < 0 or q < 0:
        raise ValueError("moment orders must be nonnegative")
    if p + q > 20:
        raise ValueError("moment order too large (overflow guard: p + q <= 20)")
    return math.pi**2 * math.factorial(p) * math.factorial(q)


def average_exact(tensor: CurvatureTensor) -> float:
    """Gaussian average of the sectional curvature by exact moment expansion.

    Each contraction term z^a conj(z)^b z^g conj(z)^d integrates to a
    factorial moment when the unbarred indices match the barred ones as
    multisets, and to zero otherwise (the phase integral kills it).  The
    normalizer is the same expansion applied to r^4.
    """
    total = 0.0 + 0.0j
    r = tensor.components
    for a, b, g, d in np.ndindex(2, 2, 2, 2):
        p_un = (a == 0) + (g == 0)
        p_bar = (b == 0) + (d == 0)
        if p_un == p_bar:
            total += r[a, b, g, d] * gauss_moment(p_un, 2 - p_un)
    mass = gauss_moment(2, 0) + 2.0 * gauss_moment(1, 1) + gauss_moment(0, 2)
    value = total / mass
    if abs(value.imag) > SYMMETRY_TOL * max(1.0, tensor.scale()):
        raise ValueError("exact average came out non-real; tensor is not symmetric")
    return value.real


_MC_SHARD = 1 << 16


def average_mc(tensor: CurvatureTensor, n: int, seed: int) -> MonteCarloAverage:
    """Monte Carlo check of the Gaussian average.

    Draws z from four independent real Gaussians of variance 1/2 (density
    e^{-r^2} / pi^2), evaluates the unnormalized quartic form and divides
    by 6: the r^4 mass is 6 pi^2 while the Gaussian mass is pi^2.  Sharded
    with sub-seeds (seed, shard) so parallel evaluation stays reproducible.
    """
    if n < 100:
        raise ValueError("need at least 100 samples")
    pair = _pair_matrix(tensor)
    values = []
    start = 0
    shard = 0
    while start < n:
        m = min(_MC_SHARD, n - start)
        rng = np.random.default_rng([seed, shard])
        x = rng.normal(0.0, math.sqrt(0.5), size=(m, 4))
        zs = x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]
        values.append(_quartic_batch(pair, np.stack(zs, axis=1)).real)
        start += m
        shard += 1
    sample = np.concatenate(values)
    estimate = float(sample.mean()) / 6.0
    stderr = float(sample.std(ddof=1)) / math.sqrt(n) / 6.0
    return MonteCarloAverage(estimate, stderr)


def critical_gradient(tensor: CurvatureTensor, zeta: Direction, h: float = 1e-5) -> float:
    """Finite-difference gradient norm of the sectional curvature at ``zeta``.

    The direction is rotated to (1, 0) and the sphere is charted by the
    three remaining real coordinates (xi2, eta1, eta2) with xi1 eliminated
    by the unit constraint; central differences of step ``h`` in each chart
    coordinate give the gradient.  A critical direction returns ~0.
    """
    if not (1e-9 < h < 1e-2):
        raise ValueError("step must lie in (1e-9, 1e-2)")
    rotated = frame_change(tensor, UnitaryFrameChange.from_first_vector(zeta.as_array()))
    pair = _pair_matrix(rotated)

    def value(xi2: float, eta1: float, eta2: float) -> float:
        xi1 = math.sqrt(1.0 - xi2 * xi2 - eta1 * eta1 - eta2 * eta2)
        z = np.array([complex(xi1, eta1), complex(xi2, eta2)])
        return float(_sec_batch(pair, z[None, :])[0].real)

    grads = [
        (value(h, 0.0, 0.0) - value(-h, 0.0, 0.0)) / (2.0 * h),
        (value(0.0, h, 0.0) - value(0.0, -h, 0.0)) / (2.0 * h),
        (value(0.0, 0.0, h) - value(0.0, 0.0, -h)) / (2.0 * h),
    ]
    return float(math.hypot(*grads))


def _chart_gradient(pair: np.ndarray, z: np.ndarray, w: np.ndarray, c: complex) -> complex:
    """Wirtinger derivative d/d(conj c) of H((z + c w)/|z + c w|) at c.

    H is a bidegree-(2,2) polynomial, so the derivative is exact algebra:
    with v = z + c w and N = 1 + |c|^2,
    dH~/dc̄ = (v⊗v)·M·conj(w⊗v + v⊗w) / N^2 - 2 c H(v) / N^3.
    """
    v = z + c * w
    vv = (v[:, None] * v[None, :]).reshape(4)
    wv = (w[:, None] * v[None, :] + v[:, None] * w[None, :]).reshape(4)
    norm2 = 1.0 + abs(c) ** 2
    h_raw = complex(vv @ pair @ np.conj(vv))
    d_raw = complex(vv @ pair @ np.conj(wv))
    return d_raw / norm2**2 - 2.0 * c * h_raw / norm2**3


def _polish_critical(
    pair: np.ndarray, z0: np.ndarray, scale: float, max_iters: int = 60
) -> np.ndarray:
    """Newton iteration on the first-order criticality condition.

    Uses the exact chart gradient and a finite-difference Jacobian; the
    least-squares solve keeps the tau = 0 case (a whole circle of minima,
    rank-deficient Hessian) convergent.
    """
    z = z0 / np.linalg.norm(z0)
    g_tol = 1e-13 * max(1.0, scale)
    fd = 1e-6
    for _ in range(max_iters):
        w = _orthogonal_complement(z)
        g = _chart_gradient(pair, z, w, 0.0)
        if abs(g) <= g_tol:
            return z
        jac = np.empty((2, 2))
        for j, dc in enumerate((fd, 1j * fd)):
            gp = _chart_gradient(pair, z, w, dc)
            gm = _chart_gradient(pair, z, w, -dc)
            col = (gp - gm) / (2.0 * fd)
            jac[0, j] = col.real
            jac[1, j] = col.imag
        rhs = -np.array([g.real, g.imag])
        sol, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
        c = complex(sol[0], sol[1])
        if abs(c) > 0.5:
            c *= 0.5 / abs(c)
        z = z + c * w
        z /= np.linalg.norm(z)
    w = _orthogonal_complement(z)
    if abs(_chart_gradient(pair, z, w, 0.0)) > 1e4 * g_tol:
        raise RuntimeError("critical-direction polish did not converge")
    return z


def recover_profile(
    tensor: CurvatureTensor, tol: float = DOWNSTREAM_TOL
) -> tuple[PinchingProfile, UnitaryFrameChange]:
    """Rotate an arbitrary valid tensor back to the critical normal form.

    Finds a minimizing critical direction (brute scan, pattern search,
    Newton polish), makes it the first frame vector and normalizes the
    phase of the off-diagonal component.  The returned change of frame
    satisfies frame_change(T, U) == build_tensor(profile, 0) up to 10*tol.
    """
    problems = validate(tensor, tol)
    if problems:
        names = ", ".join(v.name for v in problems)
        raise ValueError(f"tensor failed validation: {names}")

    scale = max(1.0, tensor.scale())
    coarse = brute_extrema(tensor, grid_n=48, refine_iters=200)
    z_min = _polish_critical(_pair_matrix(tensor), coarse.argmin.as_array(), scale)

    change = UnitaryFrameChange.from_first_vector(z_min)
    rotated = frame_change(tensor, change)
    off = rotated.components[0, 1, 0, 1]
    if abs(off) > 1e-14 * scale:
        half = cmath.phase(off) / 2.0
        phase_fix = UnitaryFrameChange(np.diag([1.0, cmath.exp(1j * half)]))
        change = phase_fix.compose(change)
        rotated = frame_change(tensor, change)

    a = float(rotated.components[0, 0, 0, 0].real)
    b = float(rotated.components[0, 0, 1, 1].real)
    bmod = float(rotated.components[0, 1, 0, 1].real)
    bmod = max(bmod, 0.0)
    big_a = 2.0 * b - a
    if bmod > big_a:
        if bmod - big_a > 10.0 * tol * scale:
            raise RuntimeError(
                "recovered frame is not minimizing (tau < 0 beyond tolerance)"
            )
        bmod = big_a
    profile = PinchingProfile(a, b, bmod, ExtremumTag.MIN_DIRECTION)

    residual = float(
        np.max(np.abs(rotated.components - build_tensor(profile, 0.0).components))
    )
    if residual > 10.0 * tol * scale:
        raise RuntimeError(
            f"normal-form residual {residual:.3e} exceeds tolerance; "
            "optimization did not converge"
        )
    return profile, change


def sampled_range_check(
    tensor: CurvatureTensor,
    k_min: float,
    k_max: float,
    n: int,
    seed: int,
) -> float:
    """Worst signed excursion of sampled curvatures outside [k_min, k_max];
    <= 0 means every sample respected the closed-form bounds."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 4))
    zs = x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]
    z = np.stack(zs, axis=1)
    z /= np.linalg.norm(z, axis=1)[:, None]
    vals = _sec_batch(_pair_matrix(tensor), z).real
    return float(max(vals.max() - k_max, k_min - vals.min()))
