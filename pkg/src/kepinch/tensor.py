"""Curvature tensors of a Kähler-Einstein surface point.

A point of a Kähler-Einstein surface carries, in a unitary frame (e1, e2)
chosen so that e1 is a critical direction of the holomorphic sectional
curvature, a curvature tensor with only two independent components beyond
the diagonal one.  This module stores the full 16-entry component table
R[a, b, g, d] = R_{a b̄ g d̄} so that symmetry validation and unitary frame
changes stay generic; the two-parameter normal form is a constructor, not
the representation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SYMMETRY_TOL = 1e-12          # algebraic identity checks
DOWNSTREAM_TOL = 1e-9         # anything that went through optimization
NORMAL_FORM_LABEL = "critical-normal-form"

# Index patterns (0-based) where exactly three of the four indices agree.
# In a frame whose first vector is critical these components must vanish.
THREE_EQUAL_INDEX_PATTERNS = tuple(
    idx
    for idx in np.ndindex(2, 2, 2, 2)
    if sorted((idx.count(0), idx.count(1))) == [1, 3]
)


class ExtremumTag(enum.Enum):
    """Which sectional-curvature extremum the first frame vector realizes."""

    MIN_DIRECTION = "min-direction"
    MAX_DIRECTION = "max-direction"
    UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class PinchingProfile:
    """Two-parameter pointwise curvature state (a, b, |B|).

    ``a`` is the diagonal component R_{11̄11̄}, ``b`` the mixed component
    R_{11̄22̄} and ``bmod`` the modulus of the off-diagonal component
    R_{12̄12̄}.  Everything downstream (extrema, averages, regime
    thresholds, test-function values) is a closed form in these three
    numbers.
    """

    a: float
    b: float
    bmod: float
    tag: ExtremumTag = ExtremumTag.MIN_DIRECTION

    def __post_init__(self):
        for name in ("a", "b", "bmod"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"profile field {name!r} must be finite")
        if self.bmod < 0:
            raise ValueError("bmod is a modulus and must be >= 0")
        if self.tag is ExtremumTag.MIN_DIRECTION and self.tau < 0:
            raise ValueError(
                "min-direction profile requires tau = A - |B| >= 0 "
                f"(got tau = {self.tau})"
            )
        if self.tag is ExtremumTag.MAX_DIRECTION and self.sigma > 0:
            raise ValueError(
                "max-direction profile requires sigma = A + |B| <= 0 "
                f"(got sigma = {self.sigma})"
            )

    @property
    def A(self) -> float:
        return 2.0 * self.b - self.a

    @property
    def sigma(self) -> float:
        return self.A + self.bmod

    @property
    def tau(self) -> float:
        return self.A - self.bmod

    @property
    def rho(self) -> float:
        """Einstein contraction constant a + b (the trace eigenvalue)."""
        return self.a + self.b

    @property
    def t(self) -> float:
        """Shape parameter |B| / A, defined for A > 0."""
        if self.A <= 0.0:
            raise ValueError("t = |B|/A requires A > 0")
        return self.bmod / self.A

    def scale(self) -> float:
        return max(abs(self.a), abs(self.b), self.bmod)

    def scaled(self, c: float) -> "PinchingProfile":
        if c <= 0:
            raise ValueError("scaling factor must be positive")
        return PinchingProfile(c * self.a, c * self.b, c * self.bmod, self.tag)


@dataclass(frozen=True)
class CurvatureTensor:
    """Full component table R_{a b̄ g d̄}, indices 1-based in the math, 0-based here."""

    components: np.ndarray
    frame_label: str = "unlabeled"

    def __post_init__(self):
        arr = np.asarray(self.components, dtype=complex)
        if arr.shape != (2, 2, 2, 2):
            raise ValueError(f"expected shape (2, 2, 2, 2), got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "components", arr)

    def component(self, a: int, b: int, g: int, d: int) -> complex:
        """Entry R_{a b̄ g d̄} with 1-based indices, as in the usual notation."""
        return complex(self.components[a - 1, b - 1, g - 1, d - 1])

    def scale(self) -> float:
        return float(np.max(np.abs(self.components)))

    def scaled(self, c: float) -> "CurvatureTensor":
        return CurvatureTensor(c * self.components, self.frame_label)

    def to_json_dict(self) -> dict:
        """16 complex entries as [re, im] pairs, row-major in (a, b, g, d)."""
        flat = self.components.reshape(-1)
        return {
            "frame_label": self.frame_label,
            "components": [[z.real, z.imag] for z in flat],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CurvatureTensor":
        entries = doc["components"]
        if len(entries) != 16:
            raise ValueError("tensor document must carry 16 entries")
        flat = np.array([complex(re, im) for re, im in entries])
        return cls(flat.reshape(2, 2, 2, 2), doc.get("frame_label", "unlabeled"))


@dataclass(frozen=True)
class UnitaryFrameChange:
    """Unitary change of frame; the rows of ``u`` are the new frame vectors
    written in the old frame."""

    u: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.u, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {mat.shape}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "u", mat)
        if self.unitarity_residual() > SYMMETRY_TOL:
            raise ValueError(
                f"matrix is not unitary (residual {self.unitarity_residual():.3e})"
            )

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(self.u.conj().T @ self.u - np.eye(2))))

    def compose(self, other: "UnitaryFrameChange") -> "UnitaryFrameChange":
        return UnitaryFrameChange(self.u @ other.u)

    def apply(self, zeta: np.ndarray) -> np.ndarray:
        """Old-frame components of the direction whose new-frame components
        are ``zeta``; the binding contract is
        holo_sec(frame_change(T, U), z) == holo_sec(T, U.apply(z))."""
        return self.u.T @ np.asarray(zeta, dtype=complex)

    @classmethod
    def identity(cls) -> "UnitaryFrameChange":
        return cls(np.eye(2, dtype=complex))

    @classmethod
    def from_first_vector(cls, zeta: np.ndarray) -> "UnitaryFrameChange":
        """Frame whose first vector is ``zeta`` (must be unit) and whose second
        is the canonical orthogonal complement."""
        z = np.asarray(zeta, dtype=complex)
        w = np.array([-np.conj(z[1]), np.conj(z[0])])
        return cls(np.array([z, w]))


class SymmetryViolation(NamedTuple):
    name: str
    residual: float


class RicciTrace(NamedTuple):
    rho: float
    off_diag_residual: float
    anisotropy_residual: float


def build_tensor(profile: PinchingProfile, phase: float = 0.0) -> CurvatureTensor:
    """Assemble the full tensor from the normal form.

    R_{11̄11̄} = R_{22̄22̄} = a, the four mixed components equal b,
    R_{12̄12̄} = |B| e^{i phase} with R_{21̄21̄} its conjugate, and every
    component with exactly three equal indices is zero.
    """
    if not math.isfinite(phase):
        raise ValueError("phase must be finite")
    a, b = profile.a, profile.b
    off = profile.bmod * complex(math.cos(phase), math.sin(phase))
    comps = np.zeros((2, 2, 2, 2), dtype=complex)
    comps[0, 0, 0, 0] = a
    comps[1, 1, 1, 1] = a
    comps[0, 0, 1, 1] = b
    comps[1, 1, 0, 0] = b
    comps[0, 1, 1, 0] = b
    comps[1, 0, 0, 1] = b
    comps[0, 1, 0, 1] = off
    comps[1, 0, 1, 0] = np.conj(off)
    return CurvatureTensor(comps, NORMAL_FORM_LABEL)


def validate(tensor: CurvatureTensor, tol: float = SYMMETRY_TOL) -> list[SymmetryViolation]:
    """Check every structural invariant; one entry per violated invariant.

    Diagnostics only: an empty list means valid.  The critical-frame
    vanishing of three-equal-index components is checked only for tensors
    labeled as built in the critical normal form, since a generic rotated
    frame has no reason to satisfy it.
    """
    r = tensor.components
    out: list[SymmetryViolation] = []

    if not (np.all(np.isfinite(r.real)) and np.all(np.isfinite(r.imag))):
        out.append(SymmetryViolation("finite-components", math.inf))
        return out

    # R_{a b̄ g d̄} = conj(R_{b ā d ḡ})
    herm = float(np.max(np.abs(r - np.conj(np.transpose(r, (1, 0, 3, 2))))))
    if herm > tol:
        out.append(SymmetryViolation("hermitian-pair-symmetry", herm))

    # R_{a b̄ g d̄} = R_{g b̄ a d̄} = R_{a d̄ g b̄}
    exch = max(
        float(np.max(np.abs(r - np.transpose(r, (2, 1, 0, 3))))),
        float(np.max(np.abs(r - np.transpose(r, (0, 3, 2, 1))))),
    )
    if exch > tol:
        out.append(SymmetryViolation("kahler-exchange-symmetry", exch))

    # sum_a R_{a ā g d̄} = rho * delta_{g d} for a single real constant rho
    trace = np.einsum("aagd->gd", r)
    einstein = max(
        float(abs(trace[0, 1])),
        float(abs(trace[1, 0])),
        float(abs(trace[0, 0] - trace[1, 1])),
        float(abs(trace[0, 0].imag)),
        float(abs(trace[1, 1].imag)),
    )
    if einstein > tol:
        out.append(SymmetryViolation("einstein-trace", einstein))

    if tensor.frame_label == NORMAL_FORM_LABEL:
        three = float(max(abs(r[idx]) for idx in THREE_EQUAL_INDEX_PATTERNS))
        if three > tol:
            out.append(SymmetryViolation("three-equal-index-vanishing", three))

    return out


def frame_change(tensor: CurvatureTensor, change: UnitaryFrameChange) -> CurvatureTensor:
    """Components of the same curvature in the rotated frame.

    Contravariance contract: for every direction z,
    holo_sec(frame_change(T, U), z) == holo_sec(T, U.apply(z)), and
    frame_change(T, U @ V) == frame_change(frame_change(T, V), U).
    """
    if change.unitarity_residual() > DOWNSTREAM_TOL:
        raise ValueError("frame change matrix is not unitary")
    u = change.u
    rotated = np.einsum(
        "ma,nb,rg,sd,abgd->mnrs", u, np.conj(u), u, np.conj(u), tensor.components
    )
    return CurvatureTensor(rotated, f"rotated({tensor.frame_label})")


def ricci_trace(tensor: CurvatureTensor) -> RicciTrace:
    """Einstein contraction sum_a R_{a ā g d̄} and how far it is from rho*I."""
    trace = np.einsum("aagd->gd", tensor.components)
    diag = trace.diagonal().real
    rho = float(diag.mean())
    off = float(max(abs(trace[0, 1]), abs(trace[1, 0])))
    aniso = float(
        max(abs(diag[0] - diag[1]), abs(trace[0, 0].imag), abs(trace[1, 1].imag))
    )
    return RicciTrace(rho, off, aniso)


def three_index_residual(tensor: CurvatureTensor) -> float:
    """Largest modulus among components with exactly three equal indices."""
    r = tensor.components
    return float(max(abs(r[idx]) for idx in THREE_EQUAL_INDEX_PATTERNS))
