"""Pinching ratio, threshold ladder, and regime classification.

The closeness of the average to the extremal sectional curvatures is
measured by (K_av - K_min) / (K_max - K_min).  In the normal form this is
2A / (3(A + |B|)) = 2 / (3(1 + t)) with t = |B|/A, so the ratio always
lies in [1/3, 2/3] and every classical pinching hypothesis becomes an
algebraic condition on t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sectional import Locus, extremal_locus
from .tensor import ExtremumTag, PinchingProfile

BOUNDARY_TOL = 1e-12

# t* coefficients of the classical constants; chi = 2 / (3 (1 + t*)).
_T_STAR_LOWER = 1.0
_T_STAR_SIU_YANG = math.sqrt(6.0 / 11.0)
_T_STAR_IMPROVED = math.sqrt(1.0 / 6.0)
_T_STAR_GUAN = 1.0 / 3.0
_T_STAR_UPPER = 0.0


@dataclass(frozen=True)
class Threshold:
    name: str
    chi: float
    t_star: float


@dataclass(frozen=True)
class ThresholdTable:
    """The five rungs of the pinching ladder, each with its t* coefficient."""

    lower: Threshold
    chi_siu_yang: Threshold
    chi_improved: Threshold
    chi_guan: Threshold
    upper: Threshold

    def __post_init__(self):
        chis = [t.chi for t in self.rows()]
        if not all(x < y for x, y in zip(chis, chis[1:])):
            raise ValueError("threshold ladder must be strictly increasing")

    def rows(self) -> tuple[Threshold, ...]:
        return (self.lower, self.chi_siu_yang, self.chi_improved, self.chi_guan, self.upper)

    def by_name(self, name: str) -> Threshold:
        for row in self.rows():
            if row.name == name:
                return row
        raise KeyError(name)


@dataclass(frozen=True)
class RegimeReport:
    """Which pinching hypotheses a pointwise profile satisfies."""

    ratio: float | None
    t: float | None
    ball_like: bool
    nonpositive_bisectional: bool
    in_siu_yang: bool
    in_improved: bool
    in_guan: bool
    locus_min: Locus
    locus_max: Locus

    def __post_init__(self):
        if self.ball_like and self.ratio is not None:
            raise ValueError("ball-like points have no defined ratio")
        if (self.in_siu_yang and not self.in_improved) or (
            self.in_improved and not self.in_guan
        ):
            raise ValueError("regime memberships must be nested")


def ratio_t_map(t: float) -> float:
    """Pinching ratio as a function of t = |B|/A: 2 / (3 (1 + t))."""
    if not -BOUNDARY_TOL <= t <= 1.0 + BOUNDARY_TOL:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return 2.0 / (3.0 * (1.0 + t))


def t_of_ratio(chi: float) -> float:
    """Inverse of ratio_t_map: t = 2 / (3 chi) - 1."""
    if not (1.0 / 3.0) - BOUNDARY_TOL <= chi <= (2.0 / 3.0) + BOUNDARY_TOL:
        raise ValueError(f"ratio must lie in [1/3, 2/3], got {chi}")
    return 2.0 / (3.0 * chi) - 1.0


def thresholds() -> ThresholdTable:
    """Numeric values of the five ladder constants and their t* coefficients."""

    def rung(name: str, t_star: float) -> Threshold:
        return Threshold(name=name, chi=2.0 / (3.0 * (1.0 + t_star)), t_star=t_star)

    return ThresholdTable(
        lower=rung("lower", _T_STAR_LOWER),
        chi_siu_yang=rung("siu-yang", _T_STAR_SIU_YANG),
        chi_improved=rung("improved", _T_STAR_IMPROVED),
        chi_guan=rung("guan", _T_STAR_GUAN),
        upper=rung("upper", _T_STAR_UPPER),
    )


def _require_min_direction(profile: PinchingProfile) -> None:
    if profile.tag is not ExtremumTag.MIN_DIRECTION:
        raise ValueError("operation expects a min-direction profile")


def is_ball_like(profile: PinchingProfile) -> bool:
    """K_max equals K_min, i.e. sigma vanishes relative to the profile scale."""
    _require_min_direction(profile)
    return profile.sigma <= 1e-9 * profile.scale()


def pinching_ratio(profile: PinchingProfile) -> float | None:
    """(K_av - K_min) / (K_max - K_min) = 2A / (3 (A + |B|)).

    None (an explicit "undefined", never a NaN) when K_max = K_min: those
    are the ball-like points, a meaningful class of their own.
    """
    _require_min_direction(profile)
    if is_ball_like(profile):
        return None
    return 2.0 * profile.A / (3.0 * profile.sigma)


def classify_regimes(profile: PinchingProfile) -> RegimeReport:
    """Populate the full regime report for a min-direction profile.

    Memberships are t >= t* comparisons with ties (within 1e-12) counted
    inside the regime.  Ball-like points satisfy every pinching hypothesis
    vacuously.
    """
    _require_min_direction(profile)
    locus_min, locus_max = extremal_locus(profile)
    nonpos = profile.a <= 0.0 and profile.b <= 0.0
    if is_ball_like(profile):
        return RegimeReport(
            ratio=None,
            t=None,
            ball_like=True,
            nonpositive_bisectional=nonpos,
            in_siu_yang=True,
            in_improved=True,
            in_guan=True,
            locus_min=locus_min,
            locus_max=locus_max,
        )
    t = profile.t
    table = thresholds()
    return RegimeReport(
        ratio=pinching_ratio(profile),
        t=t,
        ball_like=False,
        nonpositive_bisectional=nonpos,
        in_siu_yang=t >= table.chi_siu_yang.t_star - BOUNDARY_TOL,
        in_improved=t >= table.chi_improved.t_star - BOUNDARY_TOL,
        in_guan=t >= table.chi_guan.t_star - BOUNDARY_TOL,
        locus_min=locus_min,
        locus_max=locus_max,
    )
