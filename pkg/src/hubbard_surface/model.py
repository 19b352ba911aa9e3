"""Physical parameters, derived constants and ground-state region classification.

Hopping is fixed to t = 1 and both boundary fields are required to have a
positive scalar product (the ``epsilon = +1`` branch).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

# relative tolerance for "on a critical line"
CRITICAL_RTOL = 1e-9


class CriticalLineError(ValueError):
    """Field magnitude sits on one of the critical lines |h| = h0 or |h| = 1."""


class Region(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"

    def __str__(self) -> str:
        return self.value


class BoundaryClass(enum.Enum):
    """Pattern of a single boundary, fixed by its own field magnitude."""

    WEAK = "weak"  # 0 < h < h0: no boundary string
    INTERMEDIATE = "intermediate"  # h0 < h < 1: one spin string
    STRONG = "strong"  # h > 1: one charge string bound to one spin string


@dataclass(frozen=True)
class ModelParams:
    U: float
    h1: tuple[float, float, float]
    hN: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "h1", tuple(float(x) for x in self.h1))
        object.__setattr__(self, "hN", tuple(float(x) for x in self.hN))
        if len(self.h1) != 3 or len(self.hN) != 3:
            raise ValueError("boundary fields must be 3-vectors")
        if not self.U > 0:
            raise ValueError(f"U must be positive, got {self.U}")
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("boundary fields must be nonzero")
        if np.dot(self.h1, self.hN) <= 0:
            raise ValueError("h1 . hN must be positive (only the epsilon = +1 branch is supported)")

    @property
    def alpha(self) -> float:
        return float(np.linalg.norm(self.h1))

    @property
    def beta(self) -> float:
        return float(np.linalg.norm(self.hN))

    @classmethod
    def parallel(cls, U: float, alpha: float, beta: float) -> "ModelParams":
        """Fields along +z with the given magnitudes."""
        return cls(U, (0.0, 0.0, alpha), (0.0, 0.0, beta))


def critical_field(U: float) -> float:
    """Positive root of (1 - h^2)/(2h) = U/4."""
    if not U > 0:
        raise ValueError(f"U must be positive, got {U}")
    # rationalised form of (-U + sqrt(U^2 + 16))/4, stable for large U
    return 4.0 / (U + math.sqrt(U * U + 16.0))


def string_offset(h: float, U: float) -> float:
    """(1 - h^2)/(2h) - U/4; zero at h = h0, -U/4 at h = 1."""
    return (1.0 - h * h) / (2.0 * h) - U / 4.0


def boundary_class(h: float, U: float) -> BoundaryClass:
    h0 = critical_field(U)
    for line, name in ((h0, "h0"), (1.0, "1")):
        if abs(h - line) <= CRITICAL_RTOL * line:
            raise CriticalLineError(f"|h| = {h!r} lies on the critical line |h| = {name} ({line:.12g})")
    if h < h0:
        return BoundaryClass.WEAK
    if h < 1.0:
        return BoundaryClass.INTERMEDIATE
    return BoundaryClass.STRONG


_REGION_OF = {
    (BoundaryClass.WEAK, BoundaryClass.WEAK): Region.I,
    (BoundaryClass.WEAK, BoundaryClass.INTERMEDIATE): Region.II,
    (BoundaryClass.INTERMEDIATE, BoundaryClass.INTERMEDIATE): Region.III,
    (BoundaryClass.WEAK, BoundaryClass.STRONG): Region.IV,
    (BoundaryClass.INTERMEDIATE, BoundaryClass.STRONG): Region.IV,
    (BoundaryClass.STRONG, BoundaryClass.STRONG): Region.V,
}


def classify_region(alpha: float, beta: float, U: float) -> Region:
    """Region tag from the two field magnitudes.

    The tag depends only on the unordered pair of boundary classes; which
    boundary carries which string is tracked separately by
    :func:`boundary_string_values`.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("field magnitudes must be positive")
    ca, cb = boundary_class(alpha, U), boundary_class(beta, U)
    order = list(BoundaryClass)
    key = tuple(sorted((ca, cb), key=order.index))
    return _REGION_OF[key]


@dataclass(frozen=True)
class BoundaryString:
    """One pinned boundary root.

    ``kind`` is ``"lambda"`` for a spin rapidity ``i * value`` or ``"k"`` for
    a charge momentum with ``sin k = i * value``.
    """

    kind: str
    value: float
    side: str  # "left" (h1) or "right" (hN)


@dataclass(frozen=True)
class BoundaryStringSet:
    strings: tuple[BoundaryString, ...] = ()

    @property
    def lambda_strings(self) -> list[float]:
        return [s.value for s in self.strings if s.kind == "lambda"]

    @property
    def k_strings(self) -> list[float]:
        return [s.value for s in self.strings if s.kind == "k"]

    def __len__(self) -> int:
        return len(self.strings)


def _side_strings(h: float, U: float, side: str) -> list[BoundaryString]:
    cls = boundary_class(h, U)
    if cls is BoundaryClass.WEAK:
        return []
    if cls is BoundaryClass.INTERMEDIATE:
        return [BoundaryString("lambda", string_offset(h, U), side)]
    x = (h * h - 1.0) / (2.0 * h)
    return [BoundaryString("lambda", x + U / 4.0, side), BoundaryString("k", x, side)]


def boundary_string_values(alpha: float, beta: float, U: float) -> BoundaryStringSet:
    """Exact boundary-string positions for the ground state.

    Each boundary contributes independently: nothing below h0, a spin string
    ``i[(1-h^2)/(2h) - U/4]`` between h0 and 1, and above 1 a spin string
    ``i[(h^2-1)/(2h) + U/4]`` together with a charge string
    ``k = arcsin(i (h^2-1)/(2h))``.
    """
    return BoundaryStringSet(tuple(_side_strings(alpha, U, "left") + _side_strings(beta, U, "right")))


@dataclass(frozen=True)
class DerivedConstants:
    U: float
    alpha: float
    beta: float
    eta: complex
    p: complex
    q: complex
    epsilon: int
    c: float
    h0: float
    region: Region
    strings: BoundaryStringSet = field(repr=False)

    @property
    def p_alpha(self) -> float:
        return string_offset(self.alpha, self.U)

    @property
    def p_beta(self) -> float:
        return string_offset(self.beta, self.U)

    @property
    def left_class(self) -> BoundaryClass:
        return boundary_class(self.alpha, self.U)

    @property
    def right_class(self) -> BoundaryClass:
        return boundary_class(self.beta, self.U)


def derive_constants(params: ModelParams) -> DerivedConstants:
    U, a, b = params.U, params.alpha, params.beta
    c = 2.0 * (a * b - float(np.dot(params.h1, params.hN)))
    # rounding can leave c at -1e-17 for parallel fields
    c = max(c, 0.0)
    return DerivedConstants(
        U=U,
        alpha=a,
        beta=b,
        eta=-0.5j * U,
        p=0.5j * (b * b - 1.0),
        q=0.5j * (1.0 - a * a),
        epsilon=1,
        c=c,
        h0=critical_field(U),
        region=classify_region(a, b, U),
        strings=boundary_string_values(a, b, U),
    )


def constants_from_magnitudes(U: float, alpha: float, beta: float) -> DerivedConstants:
    """Derived constants for parallel fields of the given magnitudes."""
    return derive_constants(ModelParams.parallel(U, alpha, beta))
