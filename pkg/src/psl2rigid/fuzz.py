"""Seeded random elements, representations and planted conjugate pairs.

The planted family is kept at desk scale: the hyperbolic generator has a
short translation length and an axis passing close to the fixed point of
the elliptic one, so words of length <= 5 stay moderately sized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core, detect
from .core import ProjectiveElement
from .errors import OrientationReversing, PSL2Error
from .rigidity import (
    Certificate,
    RigidityParams,
    RigidityVerdict,
    recover_conjugator,
    run_rigidity_check,
)
from .words import Representation, Word, reduce

MODES = ("planted", "perturbed", "reflected")


def affine(x: float, y: float) -> ProjectiveElement:
    """z -> y z + x, which sends i to x + iy."""
    s = math.sqrt(y)
    return core.from_entries(s, x / s, 0.0, 1.0 / s)


def diagonal(lam: float) -> ProjectiveElement:
    return core.from_entries(lam, 0.0, 0.0, 1.0 / lam)


def boost(delta: float) -> ProjectiveElement:
    """Translation by delta along the geodesic from -1 to 1."""
    return core.from_entries(math.cosh(delta / 2), math.sinh(delta / 2), math.sinh(delta / 2), math.cosh(delta / 2))


def random_conjugator(rng: np.random.Generator, spread: float = 1.0) -> ProjectiveElement:
    phi = rng.uniform(0.0, math.pi)
    t = rng.uniform(-spread, spread)
    s = rng.uniform(-2.0 * spread, 2.0 * spread)
    return core.compose(core.compose(core.rotation(phi), diagonal(math.exp(t))), core.from_entries(1, s, 0, 1))


def random_point_mover(rng: np.random.Generator) -> ProjectiveElement:
    return affine(rng.uniform(-3.0, 3.0), math.exp(rng.uniform(-1.5, 1.5)))


def random_irrational_theta(rng, low=0.3, high=math.pi - 0.3, Q=detect.DEFAULT_Q, delta=detect.DEFAULT_DELTA):
    while True:
        theta = rng.uniform(low, high)
        if detect.irrationality_test(theta, Q, delta).irrational:
            return theta


def random_elliptic(rng: np.random.Generator) -> ProjectiveElement:
    theta = rng.uniform(0.05, math.pi - 0.05)
    return core.conjugate(random_point_mover(rng), core.rotation(theta))


def random_parabolic(rng: np.random.Generator) -> ProjectiveElement:
    t = rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])
    return core.conjugate(random_conjugator(rng), core.from_entries(1.0, t, 0.0, 1.0))


def random_hyperbolic(rng: np.random.Generator) -> ProjectiveElement:
    return core.conjugate(random_conjugator(rng), diagonal(rng.uniform(1.05, 5.0)))


RANDOM_ELEMENT = {
    "elliptic": random_elliptic,
    "parabolic": random_parabolic,
    "hyperbolic": random_hyperbolic,
}


def planted_representation(rng: np.random.Generator) -> Representation:
    """{irrational elliptic, hyperbolic} with the axis near the elliptic's centre."""
    mover = random_point_mover(rng)
    elliptic = core.conjugate(mover, core.rotation(random_irrational_theta(rng)))
    ell = rng.uniform(0.3, 0.6)
    frame = core.compose(mover, core.compose(core.rotation(rng.uniform(0.0, math.pi)), boost(rng.uniform(0.0, 0.2))))
    hyperbolic = core.conjugate(frame, diagonal(math.exp(ell / 2)))
    return Representation((elliptic, hyperbolic))


def reflect(g: ProjectiveElement) -> ProjectiveElement:
    return core.from_entries(g.a, -g.b, -g.c, g.d)


def perturb(rng: np.random.Generator, g: ProjectiveElement, size: float = 1e-3) -> ProjectiveElement:
    """Move g by at least `size` in max-entry distance, keeping det = 1."""
    while True:
        step = rng.uniform(-1.0, 1.0, size=4)
        step *= size * rng.uniform(1.0, 2.0) / np.abs(step).max()
        try:
            moved = core.from_entries(*(np.array(g.entries) + step), renormalize=True)
        except PSL2Error:
            continue
        if core.distance(moved, g) >= size:
            return moved


@dataclass(frozen=True)
class PlantedPair:
    rho1: Representation
    rho2: Representation
    k: ProjectiveElement
    mode: str
    perturbed_index: int = -1


def make_pair(rng: np.random.Generator, mode: str = "planted") -> PlantedPair:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    rho1 = planted_representation(rng)
    k = random_conjugator(rng)
    rho2 = rho1.conjugated(k)
    index = -1
    if mode == "perturbed":
        index = int(rng.integers(len(rho2)))
        gens = list(rho2.generators)
        gens[index] = perturb(rng, gens[index])
        rho2 = Representation(tuple(gens))
    elif mode == "reflected":
        rho2 = Representation(tuple(reflect(g) for g in rho2.generators))
    return PlantedPair(rho1, rho2, k, mode, index)


def random_word(rng: np.random.Generator, n_generators: int, max_length: int) -> Word:
    """Uniform length in [1, max_length], then a uniform reduced word of that length."""
    length = int(rng.integers(1, max_length + 1))
    letters: list[tuple[int, int]] = []
    while len(letters) < length:
        letter = (int(rng.integers(n_generators)), int(rng.choice([1, -1])))
        if letters and letters[-1] == (letter[0], -letter[1]):
            continue
        letters.append(letter)
    return reduce(letters)


def trial_seeds(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def run_trial(pair: PlantedPair, params: RigidityParams) -> tuple[RigidityVerdict, dict]:
    """Run the pipeline on one pair; returns the verdict and mode-specific facts."""
    verdict, prov = run_rigidity_check(pair.rho1, pair.rho2, params)
    facts = {"gamma0": prov.gamma0, "theta": prov.theta}
    if pair.mode == "planted":
        facts["expected"] = isinstance(verdict, Certificate)
        if isinstance(verdict, Certificate):
            facts["planted_distance"] = core.distance(verdict.g, pair.k)
    elif pair.mode == "perturbed":
        facts["expected"] = not isinstance(verdict, Certificate)
    else:
        try:
            recover_conjugator(pair.rho1, pair.rho2, params.tol)
            solver = "Certificate"
        except OrientationReversing:
            solver = "OrientationReversing"
        except PSL2Error as exc:
            solver = type(exc).__name__
        facts["solver"] = solver
        facts["expected"] = not isinstance(verdict, Certificate) and solver == "OrientationReversing"
    return verdict, facts
