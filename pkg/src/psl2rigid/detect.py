"""Checks of the hypotheses of the rigidity theorem.

Non-elementarity is decided heuristically from fixed-point sets, and
non-discreteness is witnessed constructively by an elliptic element whose
angle is not a small-denominator rational multiple of pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import core
from .core import (
    CLASSIFY_TOL,
    AllPoints,
    BoundaryPoint,
    Elliptic,
    EllipticFix,
    HyperbolicFix,
    ParabolicFix,
    ProjectiveElement,
)
from .errors import NotFound
from .words import Representation, Word, enumerate_ball, evaluate

DEFAULT_Q = 10**4
DEFAULT_DELTA = 1e-9


def _mul(x, y):
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def commutator_trace(A: ProjectiveElement, B: ProjectiveElement) -> float:
    """tr(A B A^-1 B^-1) on SL(2,R) representatives; independent of their signs."""
    a, b, c, d = A.entries
    e, f, g, h = B.entries
    m = _mul(_mul(A.entries, B.entries), _mul((d, -b, -c, a), (h, -f, -g, e)))
    return m[0] + m[3]


def jorgensen_value(A: ProjectiveElement, B: ProjectiveElement) -> float:
    """|tr^2 A - 4| + |tr [A, B] - 2|.

    A value below 1 means <A, B> cannot be both discrete and non-elementary.
    """
    t = A.trace
    return abs(t * t - 4.0) + abs(commutator_trace(A, B) - 2.0)


# -- irrationality ---------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    p: int
    q: int


@dataclass(frozen=True)
class NumericallyIrrational:
    pass


@dataclass(frozen=True)
class IrrationalityReport:
    theta_over_pi: float
    verdict: Union[Rational, NumericallyIrrational]
    convergents: tuple[tuple[int, int], ...]

    @property
    def irrational(self) -> bool:
        return isinstance(self.verdict, NumericallyIrrational)


def continued_fraction_convergents(x: float, max_q: int) -> list[tuple[int, int]]:
    """Convergents p/q of the exact binary value of x, for q <= max_q."""
    frac = Fraction(x)
    p_prev, q_prev = 1, 0
    p, q = math.floor(frac), 1
    out = [(p, q)]
    rest = frac - p
    while rest != 0:
        frac = 1 / rest
        a = math.floor(frac)
        rest = frac - a
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > max_q:
            break
        out.append((p, q))
    return out


def _semiconvergents(convergents, max_q):
    """Intermediate fractions (p_{k-1} + j p_k)/(q_{k-1} + j q_k) with q <= max_q."""
    out = []
    prev = (1, 0)
    for k, (p_k, q_k) in enumerate(convergents):
        nxt = convergents[k + 1] if k + 1 < len(convergents) else None
        j = 1
        while prev[1] + j * q_k <= max_q:
            cand = (prev[0] + j * p_k, prev[1] + j * q_k)
            if cand == nxt:
                break
            out.append(cand)
            j += 1
        prev = (p_k, q_k)
    return out


def irrationality_test(
    theta: float, Q: int = DEFAULT_Q, delta: float = DEFAULT_DELTA
) -> IrrationalityReport:
    x = theta / math.pi
    convergents = continued_fraction_convergents(x, Q)
    hit = None
    for p, q in convergents:
        if abs(x - p / q) <= delta:
            hit = (p, q)
            break
    if hit is None:
        # semiconvergents only matter when delta is loose compared with 1/(2 Q^2)
        if delta >= 1.0 / (2.0 * Q * Q):
            for p, q in sorted(_semiconvergents(convergents, Q), key=lambda t: t[1]):
                if abs(x - p / q) <= delta:
                    g = math.gcd(p, q)
                    hit = (p // g, q // g)
                    break
    verdict = Rational(*hit) if hit else NumericallyIrrational()
    return IrrationalityReport(x, verdict, tuple(convergents))


# -- elliptic search ---------------------------------------------------------


@dataclass(frozen=True)
class EllipticSearchResult:
    word: Word
    theta: float
    report: IrrationalityReport
    element: ProjectiveElement


def find_infinite_order_elliptic(
    rho: Representation,
    max_radius: int = 3,
    Q: int = DEFAULT_Q,
    delta: float = DEFAULT_DELTA,
    tol: float = CLASSIFY_TOL,
) -> EllipticSearchResult:
    """First word in ball order whose image is elliptic with a numerically irrational angle."""
    if max_radius < 1:
        raise ValueError("max_radius must be at least 1")
    for w in enumerate_ball(len(rho), max_radius):
        if not w:
            continue
        g = evaluate(rho, w)
        cls = core.classify(g, tol)
        if not isinstance(cls, Elliptic):
            continue
        theta = cls.angle / 2.0
        report = irrationality_test(theta, Q, delta)
        if report.irrational:
            return EllipticSearchResult(w, theta, report, g)
    raise NotFound(max_radius)


# -- elementarity ------------------------------------------------------------


@dataclass(frozen=True)
class Elementary:
    reason: str


@dataclass(frozen=True)
class NonElementary:
    witness: tuple[Word, Word]


@dataclass(frozen=True)
class Unknown:
    pass


def _same_interior(p, q, tol):
    return abs(p.to_disk() - q.to_disk()) <= tol


def _same_boundary(p: BoundaryPoint, q: BoundaryPoint, tol):
    return core.circle_distance(p.angle, q.angle) <= tol


def _boundary_set(fix):
    if isinstance(fix, ParabolicFix):
        return [fix.point]
    if isinstance(fix, HyperbolicFix):
        return [fix.attracting, fix.repelling]
    return []


def _disjoint(f1, f2, tol) -> bool:
    if isinstance(f1, AllPoints) or isinstance(f2, AllPoints):
        return False
    if isinstance(f1, EllipticFix) and isinstance(f2, EllipticFix):
        return not _same_interior(f1.point, f2.point, tol)
    if isinstance(f1, EllipticFix) or isinstance(f2, EllipticFix):
        return True
    return not any(
        _same_boundary(p, q, tol) for p in _boundary_set(f1) for q in _boundary_set(f2)
    )


def _is_half_turn(g, fix, tol):
    return isinstance(fix, EllipticFix) and core.abs_trace(g) <= tol


def _on_geodesic(point, ends, tol):
    # after moving the point to the disk centre the geodesic must be a diameter
    w = point.to_disk()
    e1 = complex(math.cos(ends[0].angle), math.sin(ends[0].angle))
    e2 = complex(math.cos(ends[1].angle), math.sin(ends[1].angle))

    def move(z):
        return (z - w) / (1 - w.conjugate() * z)

    m1, m2 = move(e1), move(e2)
    return abs(m1 + m2) <= max(tol, 1e-12) * 10


def _common_elementary(fixes, elements, tol) -> Optional[str]:
    active = [(g, f) for g, f in zip(elements, fixes) if not isinstance(f, AllPoints)]
    if not active:
        return "all generators are trivial"
    interior = [f.point for _, f in active if isinstance(f, EllipticFix)]
    if len(interior) == len(active):
        p0 = interior[0]
        if all(_same_interior(p0, p, tol) for p in interior[1:]):
            return f"common fixed point in H^2 at ({p0.x + 0.0!r}, {p0.y!r})"
        return None
    if not interior:
        candidates = _boundary_set(active[0][1])
        for c in candidates:
            if all(any(_same_boundary(c, q, tol) for q in _boundary_set(f)) for _, f in active):
                label = "infinity" if _same_boundary(c, core.INFINITY, tol) else f"angle {c.angle!r}"
                return f"common boundary fixed point at {label}"
    # a common invariant pair: hyperbolics sharing an axis, half-turns centred on it
    hyps = [f for _, f in active if isinstance(f, HyperbolicFix)]
    if hyps and not any(isinstance(f, ParabolicFix) for _, f in active):
        axis = (hyps[0].attracting, hyps[0].repelling)
        same_axis = all(
            any(_same_boundary(axis[0], q, tol) for q in _boundary_set(f))
            and any(_same_boundary(axis[1], q, tol) for q in _boundary_set(f))
            for f in hyps
        )
        turns_ok = all(
            _is_half_turn(g, f, tol) and _on_geodesic(f.point, axis, tol)
            for g, f in active
            if isinstance(f, EllipticFix)
        )
        if same_axis and turns_ok:
            return "common invariant boundary pair"
    return None


def is_elementary(
    rho: Representation, tol: float = CLASSIFY_TOL, witness_radius: int = 2
) -> Union[Elementary, NonElementary, Unknown]:
    """Three-valued elementarity check.

    Elementary when the generators share a fixed point or an invariant
    boundary pair.  NonElementary when two words have disjoint fixed sets,
    a nontrivial commutator, and neither is a half-turn; such a pair cannot
    have a common finite orbit in the closed disk.
    """
    gens = list(rho.generators)
    fixes = [core.fixed_points(g, tol) for g in gens]
    reason = _common_elementary(fixes, gens, tol)
    if reason is not None:
        return Elementary(reason)

    words = [w for w in enumerate_ball(len(rho), witness_radius) if w]
    images = [evaluate(rho, w) for w in words]
    wfix = [core.fixed_points(g, tol) for g in images]
    for i in range(len(words)):
        if isinstance(wfix[i], AllPoints) or _is_half_turn(images[i], wfix[i], tol):
            continue
        for j in range(i + 1, len(words)):
            if isinstance(wfix[j], AllPoints) or _is_half_turn(images[j], wfix[j], tol):
                continue
            if abs(commutator_trace(images[i], images[j]) - 2.0) <= tol:
                continue
            if _disjoint(wfix[i], wfix[j], tol):
                return NonElementary((words[i], words[j]))
    return Unknown()
