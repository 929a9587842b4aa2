"""Rotation numbers from circle dynamics, independent of the trace formulas.

Lifts are numpy-vectorized callables R -> R.  A lift built from several
group elements acts componentwise: entry k of the input array is moved by
element k, so one orbit loop estimates many rotation numbers at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import core
from .core import TWO_PI, ProjectiveElement
from .errors import NotDegreeOne, NotMonotone

GRID_POINTS = 1000


@dataclass(frozen=True)
class CircleLift:
    """A nondecreasing degree-one map F of the line, F(x + 2pi) = F(x) + 2pi."""

    fn: Callable[[np.ndarray], np.ndarray]
    description: str = ""
    right_inverse: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, x):
        return self.fn(x)

    def validate(self, n_grid: int = GRID_POINTS, tol: float = 1e-10) -> None:
        x = np.linspace(0.0, TWO_PI, n_grid + 1)
        y = np.asarray(self.fn(x), dtype=float)
        if np.any(np.diff(y) < -tol):
            raise NotMonotone(f"{self.description or 'lift'} decreases on the sample grid")
        shifted = np.asarray(self.fn(x + TWO_PI), dtype=float)
        if np.max(np.abs(shifted - y - TWO_PI)) > tol:
            raise NotDegreeOne(f"{self.description or 'lift'} is not degree one")


@dataclass(frozen=True)
class RotationEstimate:
    value: float
    n_iterations: int
    error_bound: float


def _su11_coefficients(elements: Sequence[ProjectiveElement]):
    # w -> (alpha w + beta)/(conj(beta) w + conj(alpha)) is the element in the disk model
    m = np.array([g.entries for g in elements], dtype=float)
    a, b, c, d = m.T
    alpha = 0.5 * ((a + d) + 1j * (b - c))
    beta = 0.5 * ((a - d) - 1j * (b + c))
    return alpha, beta


def _lift_fn(elements: Sequence[ProjectiveElement]):
    alpha, beta = _su11_coefficients(elements)
    ratio = beta / alpha
    base = 2.0 * np.angle(alpha)
    # F(x) = x + 2 arg(alpha + beta e^{-ix}); |beta/alpha| < 1 keeps the branch continuous
    f0 = base + 2.0 * np.angle(1.0 + ratio)
    base = base - TWO_PI * np.floor(f0 / TWO_PI)

    def fn(x):
        x = np.asarray(x, dtype=float)
        return x + base + 2.0 * np.angle(1.0 + ratio * np.exp(-1j * x))

    return fn


def lift_of_element(g: ProjectiveElement) -> CircleLift:
    """Lift of the boundary action of g, with F(0) in [0, 2pi)."""
    fn = _lift_fn([g])

    def single(x):
        out = fn(x)
        return out if np.ndim(x) else float(out[0])

    return CircleLift(single, f"boundary lift of {g!r}")


def lift_of_elements(elements: Sequence[ProjectiveElement]) -> CircleLift:
    """Batched lift: input entry k is moved by elements[k]."""
    return CircleLift(_lift_fn(list(elements)), f"boundary lifts of {len(elements)} elements")


def _orbit_displacement(F, x0: np.ndarray, n: int) -> np.ndarray:
    # F^n(x0) - x0, iterating on reduced points so magnitudes stay small
    x = np.array(x0, dtype=float)
    total = np.zeros_like(x)
    for _ in range(n):
        y = F(x)
        total += y - x
        x = np.mod(y, TWO_PI)
    return total


def poincare_rotation_number(F: CircleLift, x0: float = 0.0, n: int = 10**5) -> RotationEstimate:
    """(F^n(x0) - x0)/n reduced mod 2pi; within 2pi/n of the rotation number."""
    if n < 1:
        raise ValueError("n must be positive")
    disp = _orbit_displacement(F, np.asarray(x0, dtype=float), n)
    return RotationEstimate(core.reduce_angle(float(disp) / n), n, TWO_PI / n)


def poincare_rotation_numbers(
    F: CircleLift, x0: Union[float, np.ndarray], n: int = 10**5, size: Optional[int] = None
) -> list[RotationEstimate]:
    """Estimates for a batched lift, one per component."""
    if n < 1:
        raise ValueError("n must be positive")
    x0 = np.asarray(x0, dtype=float)
    if size is not None:
        x0 = np.broadcast_to(x0, (size,)).copy()
    disp = _orbit_displacement(F, x0, n)
    return [RotationEstimate(core.reduce_angle(float(v) / n), n, TWO_PI / n) for v in disp]


# -- monotone degree-one maps ---------------------------------------------------


def identity_map() -> CircleLift:
    return CircleLift(lambda x: np.asarray(x, dtype=float), "identity", lambda x: np.asarray(x, dtype=float))


def sine_map(eps: float, k: int = 1) -> CircleLift:
    """x -> x + eps sin(kx); a diffeomorphism when |eps k| < 1."""
    if abs(eps * k) >= 1.0:
        raise NotMonotone(f"x + {eps} sin({k}x) is not monotone")

    def fn(x):
        x = np.asarray(x, dtype=float)
        return x + eps * np.sin(k * x)

    # h(0) = 0 and h is increasing, so [0, 2pi) maps onto itself
    table_x = np.linspace(0.0, TWO_PI, 2**16 + 1)
    table_y = fn(table_x)

    def newton(y, iterations):
        turns = np.floor(y / TWO_PI)
        x = np.interp(y - TWO_PI * turns, table_y, table_x) + TWO_PI * turns
        for _ in range(iterations):
            x = x - (x + eps * np.sin(k * x) - y) / (1.0 + eps * k * np.cos(k * x))
        return x

    # fix the iteration count once on a dense grid so each call is branch-free
    grid = np.linspace(0.0, TWO_PI, 10 * GRID_POINTS + 1)
    iterations = 0
    while iterations < 60 and np.max(np.abs(fn(newton(grid, iterations)) - grid)) > 1e-14:
        iterations += 1
    iterations += 1

    def inv(y):
        return newton(np.asarray(y, dtype=float), iterations)

    return CircleLift(fn, f"x + {eps} sin({k}x)", inv)


def piecewise_linear_map(knots_x: Sequence[float], knots_y: Sequence[float]) -> CircleLift:
    """Degree-one lift interpolating (knots_x, knots_y) on [0, 2pi).

    Knots must start at (0, y0) with nondecreasing y; the map is extended by
    F(2pi) = y0 + 2pi.  Equal consecutive y values give a plateau.  The right
    inverse picks the left endpoint of each preimage interval.
    """
    xs = np.append(np.asarray(knots_x, dtype=float), TWO_PI)
    ys = np.asarray(knots_y, dtype=float)
    ys = np.append(ys, ys[0] + TWO_PI)
    if xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
        raise ValueError("knots_x must start at 0 and increase inside [0, 2pi)")
    if np.any(np.diff(ys) < 0):
        raise NotMonotone("knots_y must be nondecreasing")
    y0 = ys[0]
    # rising segments; r on a plateau value falls to the segment ending there,
    # whose right knot is the left end of the plateau
    rising = np.flatnonzero(np.diff(ys) > 0)
    seg_y, seg_x = ys[rising], xs[rising]
    seg_slope = (xs[rising + 1] - seg_x) / (ys[rising + 1] - seg_y)

    def fn(x):
        x = np.asarray(x, dtype=float)
        turns = np.floor(x / TWO_PI)
        return np.interp(x - TWO_PI * turns, xs, ys) + TWO_PI * turns

    def inv(y):
        y = np.asarray(y, dtype=float)
        turns = np.floor((y - y0) / TWO_PI)
        r = y - TWO_PI * turns
        k = np.maximum(np.searchsorted(seg_y, r, side="left") - 1, 0)
        x = seg_x[k] + (r - seg_y[k]) * seg_slope[k]
        x = np.where(r <= y0, xs[0], x)
        return x + TWO_PI * turns

    return CircleLift(fn, "piecewise linear", inv)


def plateau_map(start: float, end: float) -> CircleLift:
    """Collapse the arc [start, end] to a point, stretching the rest linearly."""
    if not 0.0 < start < end < TWO_PI:
        raise ValueError("need 0 < start < end < 2pi")
    scale = TWO_PI / (TWO_PI - (end - start))
    ys = [0.0, start * scale, start * scale]
    return piecewise_linear_map([0.0, start, end], ys)


def bisect_right_inverse(h: CircleLift, iterations: int = 64) -> Callable[[np.ndarray], np.ndarray]:
    """Smallest x with h(x) >= y, by vectorized bisection."""
    grid = np.linspace(0.0, TWO_PI, GRID_POINTS + 1)
    spread = float(np.max(np.abs(np.asarray(h(grid)) - grid))) + TWO_PI

    def inv(y):
        y = np.asarray(y, dtype=float)
        lo = y - spread - 1.0
        hi = y + spread + 1.0
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            above = np.asarray(h(mid)) >= y
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return hi

    return inv


@dataclass(frozen=True)
class SemiconjugacyReport:
    rot_original: float
    rot_conjugated: float
    difference: float


def semiconjugated_lift(F: CircleLift, h: CircleLift) -> CircleLift:
    """The lift h+ o F o h, where h+ is a right inverse of h.

    h o (h+ o F o h) = F o h, so h semi-conjugates the new map onto F.
    """
    inv = h.right_inverse or bisect_right_inverse(h)

    def fn(x):
        return inv(F(h(x)))

    return CircleLift(fn, f"semi-conjugate of {F.description} by {h.description}")


def semiconjugacy_invariance_check(
    g: Union[ProjectiveElement, Sequence[ProjectiveElement]],
    h: CircleLift,
    n: int = 10**5,
    x0: float = 0.0,
) -> Union[SemiconjugacyReport, list[SemiconjugacyReport]]:
    """Compare Poincare rotation numbers of g and of its semi-conjugate by h.

    Passing a sequence of elements batches the orbit loops and returns one
    report per element.
    """
    h.validate()
    single = isinstance(g, ProjectiveElement)
    elements = [g] if single else list(g)
    F = lift_of_elements(elements)
    G = semiconjugated_lift(F, h)
    size = len(elements)
    before = poincare_rotation_numbers(F, x0, n, size=size)
    after = poincare_rotation_numbers(G, x0, n, size=size)
    reports = [
        SemiconjugacyReport(b.value, a.value, core.circle_distance(a.value, b.value))
        for b, a in zip(before, after)
    ]
    return reports[0] if single else reports


def semiconjugacy_invariance_table(
    elements: Sequence[ProjectiveElement],
    maps: dict,
    n: int = 10**5,
    x0: float = 0.0,
) -> dict:
    """semiconjugacy_invariance_check for several maps, sharing the unconjugated orbits."""
    elements = list(elements)
    F = lift_of_elements(elements)
    before = poincare_rotation_numbers(F, x0, n, size=len(elements))
    table = {}
    for name, h in maps.items():
        h.validate()
        after = poincare_rotation_numbers(semiconjugated_lift(F, h), x0, n, size=len(elements))
        table[name] = [
            SemiconjugacyReport(b.value, a.value, core.circle_distance(a.value, b.value))
            for b, a in zip(before, after)
        ]
    return table


def oracle_check(g: ProjectiveElement, n: int = 10**5, tol: float = core.CLASSIFY_TOL) -> dict:
    """Closed-form rotation number next to the Poincare estimate."""
    closed = core.rotation_number(g, tol)
    est = poincare_rotation_number(lift_of_element(g), 0.0, n)
    return {
        "closed_form": closed,
        "poincare": est.value,
        "error_bound": est.error_bound,
        "difference": core.circle_distance(closed, est.value),
        "n_iterations": n,
    }

