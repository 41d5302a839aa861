"""Laplacian/gradient formulas, test functions, and sampling certification.

Everything here happens at a single point in the phase-normalized frame:
the off-diagonal component B is real and nonnegative, and the gauge
choices grad(xi1) = grad(eta2) = 0 leave the first-order frame
derivatives of xi2 as the only free parameters.

The test function is Phi = 6 B^2 - A^2.  Its Laplacian, gradient, and the
quantity Q = Phi * lap(Phi) - (1 - lambda) * |grad(Phi)|^2 decide the sign
of lap(Phi^lambda); the certifier samples the pinched regime and records
any failure of the inequality chain as a falsification, not a crash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .regimes import t_of_ratio
from .tensor import ExtremumTag, PinchingProfile


@dataclass(frozen=True)
class FrameDerivatives:
    """First-order frame/curvature derivatives entering the variational formulas.

    ``d1_xi2`` .. ``d2bar_xi2`` are the covariant derivatives of the second
    frame component of the extremal field along the two holomorphic and two
    antiholomorphic directions.  ``d1_r1212`` is the independent curvature
    derivative input.  ``d2bar_r1212`` defaults to None, meaning "derived
    from the Bianchi-type relation A*d1bar_xi2 + B*conj(d1_xi2)"; give an
    explicit complex value to override.
    """

    d1_xi2: complex = 0.0
    d2_xi2: complex = 0.0
    d1bar_xi2: complex = 0.0
    d2bar_xi2: complex = 0.0
    d1_r1212: complex = 0.0
    d2bar_r1212: complex | None = None

    def __post_init__(self):
        for name in ("d1_xi2", "d2_xi2", "d1bar_xi2", "d2bar_xi2", "d1_r1212"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"frame derivative {name!r} must be finite")
        if self.d2bar_r1212 is not None:
            z = complex(self.d2bar_r1212)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError("explicit d2bar_r1212 must be finite")

    def d2bar_r1212_value(self, profile: PinchingProfile) -> complex:
        if self.d2bar_r1212 is not None:
            return complex(self.d2bar_r1212)
        return profile.A * complex(self.d1bar_xi2) + profile.bmod * complex(
            self.d1_xi2
        ).conjugate()

    def scaled(self, s: float) -> "FrameDerivatives":
        explicit = None if self.d2bar_r1212 is None else s * complex(self.d2bar_r1212)
        return FrameDerivatives(
            s * complex(self.d1_xi2),
            s * complex(self.d2_xi2),
            s * complex(self.d1bar_xi2),
            s * complex(self.d2bar_xi2),
            s * complex(self.d1_r1212),
            explicit,
        )


class LaplacianPair(NamedTuple):
    lap_r1111: float
    lap_r1212: float


class CurvatureGradients(NamedTuple):
    """The six curvature derivatives determined by the frame derivatives."""

    d1_r1111: complex
    d2_r1111: complex
    d1bar_r1212: complex
    d2bar_r1212: complex
    d1_r1112: complex
    d2_r1112: complex


@dataclass(frozen=True)
class CertificationViolation:
    profile: PinchingProfile
    fd: FrameDerivatives
    check: str
    margin: float


@dataclass(frozen=True)
class CertificationReport:
    chi: float
    lam: float
    samples: int
    seed: int
    violations: tuple[CertificationViolation, ...]
    min_margin: float
    product_range: tuple[float, float]

    def __post_init__(self):
        if not self.violations and self.min_margin <= 0.0:
            raise ValueError("a clean certification must have a positive margin")

    def violation_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for v in self.violations:
            counts[v.check] = counts.get(v.check, 0) + 1
        return counts


def laplacian_point(profile: PinchingProfile) -> LaplacianPair:
    """Laplacians of the two independent curvature components:
    lap R_{11̄11̄} = -A*b + B^2 and lap R_{12̄12̄} = 3*(b - A)*B."""
    a_big, b, bb = profile.A, profile.b, profile.bmod
    return LaplacianPair(-a_big * b + bb * bb, 3.0 * (b - a_big) * bb)


def nabla_relations(profile: PinchingProfile, fd: FrameDerivatives) -> CurvatureGradients:
    """Curvature derivatives expressed through the frame derivatives.

    Uses conj(d_t xi2-bar) = d_tbar xi2 to eliminate barred copies of the
    frame field, so every output is linear in the six stored inputs.
    """
    a_big, bb = profile.A, profile.bmod
    d1, d2 = complex(fd.d1_xi2), complex(fd.d2_xi2)
    d1b, d2b = complex(fd.d1bar_xi2), complex(fd.d2bar_xi2)
    return CurvatureGradients(
        d1_r1111=a_big * d2 + bb * d2b.conjugate(),
        d2_r1111=-a_big * d1b.conjugate() - bb * d1,
        d1bar_r1212=-a_big * d2b - bb * d2.conjugate(),
        d2bar_r1212=fd.d2bar_r1212_value(profile),
        d1_r1112=-a_big * d1 - bb * d1b.conjugate(),
        d2_r1112=-a_big * d2 - bb * d2b.conjugate(),
    )


def _derivative_sums(fd: FrameDerivatives) -> tuple[float, float]:
    # sum over s of |d_s xi2|^2 + |d_sbar xi2|^2, and Re sum (d_s xi2)(d_sbar xi2)
    d1, d2 = complex(fd.d1_xi2), complex(fd.d2_xi2)
    d1b, d2b = complex(fd.d1bar_xi2), complex(fd.d2bar_xi2)
    quad = abs(d1) ** 2 + abs(d2) ** 2 + abs(d1b) ** 2 + abs(d2b) ** 2
    cross = (d1 * d1b + d2 * d2b).real
    return quad, cross


def delta_s(profile: PinchingProfile, fd: FrameDerivatives) -> LaplacianPair:
    """Laplacians of the curvature along the extremal field.

    Reduces to laplacian_point exactly when all frame derivatives vanish.
    """
    a_big, b, bb = profile.A, profile.b, profile.bmod
    quad, cross = _derivative_sums(fd)
    lap_s1111 = -2.0 * a_big * quad - 4.0 * bb * cross + (-a_big * b + bb * bb)
    lap_s1212 = 4.0 * a_big * cross + 2.0 * bb * quad + 3.0 * (b - a_big) * bb
    return LaplacianPair(lap_s1111, lap_s1212)


def phi_and_c(profile: PinchingProfile) -> tuple[float, float]:
    """Test-function value Phi = 6B^2 - A^2 and the constant
    C = -6*(6B^2 - A^2)*b + 30*A*B^2 that keeps lap(Phi) strictly signed."""
    a_big, b, bb = profile.A, profile.b, profile.bmod
    phi = 6.0 * bb * bb - a_big * a_big
    c_const = -6.0 * phi * b + 30.0 * a_big * bb * bb
    return phi, c_const


def delta_phi(profile: PinchingProfile, fd: FrameDerivatives) -> float:
    """Simplified Laplacian of the test function Phi."""
    a_big, bb = profile.A, profile.bmod
    diff = a_big * a_big - bb * bb
    _, c_const = phi_and_c(profile)
    d2r = fd.d2bar_r1212_value(profile)
    return (
        -30.0 * diff * (abs(complex(fd.d2_xi2)) ** 2 + abs(complex(fd.d1bar_xi2)) ** 2)
        - 6.0 * diff * (abs(complex(fd.d1_xi2)) ** 2 + abs(complex(fd.d2bar_xi2)) ** 2)
        - c_const
        + 6.0 * abs(complex(fd.d1_r1212)) ** 2
        + 6.0 * abs(d2r) ** 2
    )


def grad_phi(profile: PinchingProfile, fd: FrameDerivatives) -> tuple[complex, complex]:
    """Both components of grad(Phi); the second realizes the derivative of
    the conjugate component as conj(d2bar_r1212)."""
    a_big, bb = profile.A, profile.bmod
    diff = a_big * a_big - bb * bb
    g1 = 6.0 * bb * complex(fd.d1_r1212) + 6.0 * diff * complex(fd.d2_xi2)
    g2 = 6.0 * bb * fd.d2bar_r1212_value(profile).conjugate() - 6.0 * diff * complex(
        fd.d1bar_xi2
    )
    return g1, g2


def q_value(profile: PinchingProfile, fd: FrameDerivatives, lam: float) -> float:
    """Q = Phi*lap(Phi) - (1 - lambda)*|grad(Phi)|^2.

    The sign of lap(Phi^lambda) equals the sign of Q whenever Phi > 0,
    because the omitted prefactor lambda * Phi^(lambda - 2) is positive;
    power_prefactor reports that factor separately.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    phi, _ = phi_and_c(profile)
    g1, g2 = grad_phi(profile, fd)
    return phi * delta_phi(profile, fd) - (1.0 - lam) * (abs(g1) ** 2 + abs(g2) ** 2)


def power_prefactor(profile: PinchingProfile, lam: float) -> float:
    """The positive factor lambda * Phi^(lambda - 2) relating Q to lap(Phi^lambda)."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    phi, _ = phi_and_c(profile)
    if phi <= 0.0:
        raise ValueError("prefactor requires Phi > 0")
    return lam * phi ** (lam - 2.0)


def amgm_product_exact(a_big, bmod, lam):
    """Both sides of the product identity on plain numbers.

    Polymorphic over float and Fraction; with Fraction inputs the equality
    of the two forms is exact, which is the whole point of the identity
    (6(1-lam)B^2/(6B^2-A^2) - 1)(5B^2/(A^2-B^2) - 1) = (A^2-6*lam*B^2)/(A^2-B^2).
    """
    a2 = a_big * a_big
    b2 = bmod * bmod
    denom_outer = a2 - b2
    denom_inner = 6 * b2 - a2
    if denom_outer == 0:
        raise ZeroDivisionError("product is degenerate when A^2 = B^2")
    if denom_inner == 0:
        raise ZeroDivisionError("factored form is degenerate when 6B^2 = A^2")
    factored = (6 * (1 - lam) * b2 / denom_inner - 1) * (5 * b2 / denom_outer - 1)
    closed = (a2 - 6 * lam * b2) / denom_outer
    return factored, closed


def amgm_product(profile: PinchingProfile, lam: float) -> tuple[float, float]:
    """Factored and closed forms of the product driving the admissible
    lambda range; they agree identically, and both equal 1 at lambda = 1/6."""
    return amgm_product_exact(profile.A, profile.bmod, lam)


def guan_yang_values(profile: PinchingProfile) -> tuple[float | None, float]:
    """Pointwise values of the two alternative test functions:
    Phi1 = B^2 / A^2 (None when A = 0) and f = cbrt(3B - A).

    The cube root is the real odd root, defined on all of R, since 3B - A
    is negative outside the half-ratio regime and f must still evaluate.
    """
    a_big, bb = profile.A, profile.bmod
    phi1 = None if a_big == 0.0 else (bb * bb) / (a_big * a_big)
    arg = 3.0 * bb - a_big
    f = math.copysign(abs(arg) ** (1.0 / 3.0), arg)
    return phi1, f


_CERT_SHARD = 8192


def _dominance_margins(
    lam: float,
    phi: np.ndarray,
    diff: np.ndarray,
    bb: np.ndarray,
    z1: np.ndarray,
    w2: np.ndarray,
    z2: np.ndarray,
    w1: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    # The two displayed bounds that feed the AM-GM step; margin = rhs - lhs.
    m1 = (
        (1.0 - lam) * 36.0 * np.abs(bb * z1 + diff * w2) ** 2
        + 30.0 * phi * diff * np.abs(w2) ** 2
        - 6.0 * phi * np.abs(z1) ** 2
    )
    m2 = (
        (1.0 - lam) * 36.0 * np.abs(bb * z2 - diff * w1) ** 2
        + 30.0 * phi * diff * np.abs(w1) ** 2
        - 6.0 * phi * np.abs(z2) ** 2
    )
    return m1, m2


def certify_regime(
    chi: float,
    lam: float,
    n: int,
    seed: int,
    bounds: tuple[float, float] = (-2.0, 2.0),
    t_margin: float = 1e-3,
) -> CertificationReport:
    """Randomized certification of the superharmonicity inequality chain.

    Samples profiles strictly inside the chi-pinched regime (a <= 0,
    b <= 0, 0 < |B| < A, t >= t*(chi) + t_margin) together with frame
    derivatives uniform in the bounds box, and checks per sample:

      dominance-1 / dominance-2: the two displayed bounds,
      q-negative:                Q < 0,
      c-positive:                C > 0,
      product-ge-one:            closed-form product >= 1 (ties inside).

    Every failure is recorded with its margin.  min_margin tracks the four
    strict inequalities; the product margin is reported via product_range
    because it sits exactly at 0 for lambda = 1/6.  Deterministic given
    (seed, n): sampling is sharded with sub-seeds (seed, shard).
    """
    if not (1.0 / 3.0) < chi < (2.0 / 3.0):
        raise ValueError("chi must lie strictly inside (1/3, 2/3)")
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if n < 1:
        raise ValueError("need at least one sample")
    lo, hi = bounds
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("bounds box must be a finite (lo, hi) with lo < hi")
    t_lo = t_of_ratio(chi) + t_margin
    t_hi = 1.0 - t_margin
    if t_lo >= t_hi:
        raise ValueError("chi leaves no room strictly inside the regime")

    violations: list[CertificationViolation] = []
    min_margin = math.inf
    prod_min, prod_max = math.inf, -math.inf

    start = 0
    shard = 0
    while start < n:
        m = min(_CERT_SHARD, n - start)
        rng = np.random.default_rng([seed, shard])
        a_big = rng.uniform(0.5, 10.0, m)
        b = rng.uniform(-5.0, 0.0, m)
        a = 2.0 * b - a_big
        t = rng.uniform(t_lo, t_hi, m)
        bb = t * a_big
        box = rng.uniform(lo, hi, size=(m, 10))
        d1 = box[:, 0] + 1j * box[:, 1]
        d2 = box[:, 2] + 1j * box[:, 3]
        d1b = box[:, 4] + 1j * box[:, 5]
        d2b = box[:, 6] + 1j * box[:, 7]
        z1 = box[:, 8] + 1j * box[:, 9]
        z2 = a_big * d1b + bb * np.conj(d1)

        phi = 6.0 * bb * bb - a_big * a_big
        diff = a_big * a_big - bb * bb
        c_const = -6.0 * phi * b + 30.0 * a_big * bb * bb
        dphi = (
            -30.0 * diff * (np.abs(d2) ** 2 + np.abs(d1b) ** 2)
            - 6.0 * diff * (np.abs(d1) ** 2 + np.abs(d2b) ** 2)
            - c_const
            + 6.0 * np.abs(z1) ** 2
            + 6.0 * np.abs(z2) ** 2
        )
        g1 = 6.0 * bb * z1 + 6.0 * diff * d2
        g2 = 6.0 * bb * np.conj(z2) - 6.0 * diff * d1b
        q = phi * dphi - (1.0 - lam) * (np.abs(g1) ** 2 + np.abs(g2) ** 2)
        m1, m2 = _dominance_margins(lam, phi, diff, bb, z1, d2, z2, d1b)
        product = (a_big * a_big - 6.0 * lam * bb * bb) / diff

        prod_min = min(prod_min, float(product.min()))
        prod_max = max(prod_max, float(product.max()))
        strict = np.minimum(np.minimum(m1, m2), np.minimum(-q, c_const))
        min_margin = min(min_margin, float(strict.min()))

        checks = (
            ("dominance-1", m1, m1 < 0.0),
            ("dominance-2", m2, m2 < 0.0),
            ("q-negative", -q, q >= 0.0),
            ("c-positive", c_const, c_const <= 0.0),
            ("product-ge-one", product - 1.0, product < 1.0 - 1e-12),
        )
        for name, margin, failed in checks:
            for i in np.flatnonzero(failed):
                violations.append(
                    CertificationViolation(
                        profile=PinchingProfile(
                            float(a[i]), float(b[i]), float(bb[i]), ExtremumTag.MIN_DIRECTION
                        ),
                        fd=FrameDerivatives(
                            complex(d1[i]),
                            complex(d2[i]),
                            complex(d1b[i]),
                            complex(d2b[i]),
                            complex(z1[i]),
                        ),
                        check=name,
                        margin=float(margin[i]),
                    )
                )
        start += m
        shard += 1

    return CertificationReport(
        chi=chi,
        lam=lam,
        samples=n,
        seed=seed,
        violations=tuple(violations),
        min_margin=min_margin,
        product_range=(prod_min, prod_max),
    )


_CSV_HEADER = (
    "check,margin,a,b,bmod,"
    "d1_xi2_re,d1_xi2_im,d2_xi2_re,d2_xi2_im,"
    "d1bar_xi2_re,d1bar_xi2_im,d2bar_xi2_re,d2bar_xi2_im,"
    "d1_r1212_re,d1_r1212_im"
)


def violations_csv(report: CertificationReport) -> str:
    """One CSV row per recorded violation, full inputs included."""
    lines = [_CSV_HEADER]
    for v in report.violations:
        fd = v.fd
        cells = [v.check, repr(v.margin), repr(v.profile.a), repr(v.profile.b), repr(v.profile.bmod)]
        for z in (fd.d1_xi2, fd.d2_xi2, fd.d1bar_xi2, fd.d2bar_xi2, fd.d1_r1212):
            zc = complex(z)
            cells.extend([repr(zc.real), repr(zc.imag)])
        lines.append(",".join(cells))
    return "\r\n".join(lines) + "\r\n"
