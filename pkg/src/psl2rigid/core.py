"""PSL(2,R) elements: arithmetic, classification, fixed points, rotation numbers.

Elements act on the upper half-plane by z -> (az + b)/(cz + d).  The boundary
circle is coordinatized by the disk-model angle of w = (z - i)/(z + i); with
this orientation the rotation [[cos t, sin t], [-sin t, cos t]] acts on the
circle as phi -> phi + 2t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DeterminantOutOfTolerance, NonPositiveDeterminant, NotElliptic

TWO_PI = 2.0 * math.pi

DET_TOL = 1e-9
TRACE_ZERO_TOL = 1e-12
CLASSIFY_TOL = 1e-9


def reduce_angle(x: float) -> float:
    """Reduce to [0, 2pi)."""
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


def circle_distance(x: float, y: float) -> float:
    r = reduce_angle(x - y)
    return min(r, TWO_PI - r)


def _canonical_sign(a, b, c, d):
    tr = a + d
    if abs(tr) > TRACE_ZERO_TOL:
        return 1.0 if tr > 0 else -1.0
    for entry in (a, b, c):
        if entry != 0.0:
            return 1.0 if entry > 0 else -1.0
    return 1.0


@dataclass(frozen=True)
class ProjectiveElement:
    """An element of PSL(2,R), stored as its canonical SL(2,R) representative.

    Build instances with `from_entries`; the constructor assumes its
    arguments are already unimodular and canonically signed.
    """

    a: float
    b: float
    c: float
    d: float

    @property
    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "ProjectiveElement") -> "ProjectiveElement":
        return compose(self, other)

    def __invert__(self) -> "ProjectiveElement":
        return inverse(self)

    def __repr__(self):
        return f"PSL2([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"


def _make(a, b, c, d) -> ProjectiveElement:
    s = _canonical_sign(a, b, c, d)
    if s < 0:
        a, b, c, d = -a, -b, -c, -d
    # avoid -0.0 so that M and -M give bit-identical representatives
    return ProjectiveElement(a + 0.0, b + 0.0, c + 0.0, d + 0.0)


def from_entries(a, b, c, d, renormalize: bool = False) -> ProjectiveElement:
    a, b, c, d = float(a), float(b), float(c), float(d)
    det = a * d - b * c
    if not det > 0.0:
        raise NonPositiveDeterminant(f"determinant {det!r} is not positive")
    if renormalize:
        s = math.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
    elif abs(det - 1.0) > DET_TOL:
        raise DeterminantOutOfTolerance(
            f"determinant {det!r} deviates from 1 by more than {DET_TOL}"
        )
    else:
        # exact renormalization, a no-op up to rounding for unimodular input
        s = math.sqrt(det)
        if s != 1.0:
            a, b, c, d = a / s, b / s, c / s, d / s
    return _make(a, b, c, d)


def from_matrix(m, renormalize: bool = False) -> ProjectiveElement:
    m = np.asarray(m, dtype=float)
    return from_entries(m[0, 0], m[0, 1], m[1, 0], m[1, 1], renormalize=renormalize)


IDENTITY = ProjectiveElement(1.0, 0.0, 0.0, 1.0)


def rotation(theta: float) -> ProjectiveElement:
    """The standard elliptic [[cos t, sin t], [-sin t, cos t]]; fixes i, rotation number 2t."""
    c, s = math.cos(theta), math.sin(theta)
    return _make(c, s, -s, c)


def compose(g: ProjectiveElement, h: ProjectiveElement) -> ProjectiveElement:
    return _make(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def inverse(g: ProjectiveElement) -> ProjectiveElement:
    return _make(g.d, -g.b, -g.c, g.a)


def conjugate(h: ProjectiveElement, g: ProjectiveElement) -> ProjectiveElement:
    """h g h^-1."""
    return compose(compose(h, g), inverse(h))


def power(g: ProjectiveElement, n: int) -> ProjectiveElement:
    if n < 0:
        g, n = inverse(g), -n
    result = IDENTITY
    while n:
        if n & 1:
            result = compose(result, g)
        n >>= 1
        if n:
            g = compose(g, g)
    return result


def abs_trace(g: ProjectiveElement) -> float:
    return abs(g.a + g.d)


def distance(g: ProjectiveElement, h: ProjectiveElement) -> float:
    """Max-entry distance between g and h as PSL elements (minimum over the sign)."""
    plus = max(abs(x - y) for x, y in zip(g.entries, h.entries))
    minus = max(abs(x + y) for x, y in zip(g.entries, h.entries))
    return min(plus, minus)


# -- classification ---------------------------------------------------------


class Classification:
    kind = ""


@dataclass(frozen=True)
class Identity(Classification):
    kind = "identity"


@dataclass(frozen=True)
class Elliptic(Classification):
    angle: float
    kind = "elliptic"


@dataclass(frozen=True)
class Parabolic(Classification):
    kind = "parabolic"


@dataclass(frozen=True)
class Hyperbolic(Classification):
    translation_length: float
    kind = "hyperbolic"


def is_identity(g: ProjectiveElement, tol: float = CLASSIFY_TOL) -> bool:
    return distance(g, IDENTITY) <= tol


def classify(g: ProjectiveElement, tol: float = CLASSIFY_TOL) -> Classification:
    if is_identity(g, tol):
        return Identity()
    t = abs_trace(g)
    if t < 2.0 - tol:
        return Elliptic(_elliptic_angle(g))
    if t > 2.0 + tol:
        return Hyperbolic(2.0 * math.acosh(t / 2.0))
    return Parabolic()


# -- points ------------------------------------------------------------------


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise ValueError(f"half-plane point needs y > 0, got {self.y!r}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def to_disk(self) -> complex:
        z = self.z
        return (z - 1j) / (z + 1j)


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity, by its disk-model angle in [0, 2pi)."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", reduce_angle(self.angle))

    @classmethod
    def from_projective(cls, u: float, v: float) -> "BoundaryPoint":
        """The boundary point u/v of the real line (v = 0 is infinity)."""
        return cls(-2.0 * math.atan2(v, u))

    @classmethod
    def from_real(cls, x: float) -> "BoundaryPoint":
        return cls.from_projective(x, 1.0)

    def to_projective(self) -> tuple[float, float]:
        half = self.angle / 2.0
        return math.cos(half), -math.sin(half)

    def to_real(self) -> float:
        u, v = self.to_projective()
        return math.inf if v == 0.0 else u / v


INFINITY = BoundaryPoint(0.0)


def _elliptic_fixed_point(g: ProjectiveElement) -> HalfPlanePoint:
    # root of c z^2 + (d - a) z - b = 0 with positive imaginary part
    t = g.a + g.d
    im = math.sqrt(max(4.0 - t * t, 0.0)) / (2.0 * abs(g.c))
    return HalfPlanePoint((g.a - g.d) / (2.0 * g.c), im)


def _elliptic_angle(g: ProjectiveElement) -> float:
    z0 = _elliptic_fixed_point(g).z
    w = g.c * z0 + g.d
    return reduce_angle(-2.0 * math.atan2(w.imag, w.real))


def rotation_number(g: ProjectiveElement, tol: float = CLASSIFY_TOL) -> float:
    cls = classify(g, tol)
    if isinstance(cls, Elliptic):
        return cls.angle
    return 0.0


@dataclass(frozen=True)
class EllipticFix:
    point: HalfPlanePoint


@dataclass(frozen=True)
class ParabolicFix:
    point: BoundaryPoint


@dataclass(frozen=True)
class HyperbolicFix:
    attracting: BoundaryPoint
    repelling: BoundaryPoint


@dataclass(frozen=True)
class AllPoints:
    pass


FixedPoints = Union[EllipticFix, ParabolicFix, HyperbolicFix, AllPoints]


def fixed_points(g: ProjectiveElement, tol: float = CLASSIFY_TOL) -> FixedPoints:
    cls = classify(g, tol)
    if isinstance(cls, Identity):
        return AllPoints()
    if isinstance(cls, Elliptic):
        return EllipticFix(_elliptic_fixed_point(g))
    a, b, c, d = g.entries
    if isinstance(cls, Parabolic):
        # canonical trace is ~ +2, so the fixed direction is ker(M - I)
        r1 = (b, 1.0 - a)
        r2 = (1.0 - d, c)
        u, v = r1 if math.hypot(*r1) >= math.hypot(*r2) else r2
        return ParabolicFix(BoundaryPoint.from_projective(u, v))
    t = a + d
    disc = math.sqrt(t * t - 4.0)
    big = (t + disc) / 2.0
    small = 1.0 / big
    return HyperbolicFix(_eigen_boundary(g, big), _eigen_boundary(g, small))


def _eigen_boundary(g: ProjectiveElement, lam: float) -> BoundaryPoint:
    a, b, c, d = g.entries
    r1 = (b, lam - a)
    r2 = (lam - d, c)
    u, v = r1 if math.hypot(*r1) >= math.hypot(*r2) else r2
    return BoundaryPoint.from_projective(u, v)


def mobius_act(g: ProjectiveElement, p: HalfPlanePoint) -> HalfPlanePoint:
    z = p.z
    w = (g.a * z + g.b) / (g.c * z + g.d)
    return HalfPlanePoint(w.real, w.imag)


def boundary_act(g: ProjectiveElement, p: BoundaryPoint) -> BoundaryPoint:
    u, v = p.to_projective()
    return BoundaryPoint.from_projective(g.a * u + g.b * v, g.c * u + g.d * v)


def conjugate_to_rotation(
    g: ProjectiveElement, tol: float = CLASSIFY_TOL
) -> tuple[ProjectiveElement, float]:
    """Return (h, theta) with h g h^-1 = +-rotation(theta), theta in (0, pi).

    h is the affine map z -> (z - x0)/y0 sending the fixed point of g to i.
    """
    cls = classify(g, tol)
    if not isinstance(cls, Elliptic):
        raise NotElliptic(f"expected an elliptic element, got {cls.kind}")
    p = _elliptic_fixed_point(g)
    s = math.sqrt(p.y)
    h = _make(1.0 / s, -p.x / s, 0.0, s)
    return h, cls.angle / 2.0
