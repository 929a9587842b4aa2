"""Conjugacy of PSL(2,R) representations with equal rotation numbers.

The pipeline checks the hypotheses (non-elementary, an elliptic of
irrational angle), scans a word ball for rotation-number mismatches, puts
both representations in the frame where the elliptic is a standard
rotation, solves the linear intertwining system for the conjugator, and
validates it on generators and on the abs-trace corpus.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import core, detect
from .core import ProjectiveElement
from .errors import (
    AmbiguousNullspace,
    NotElliptic,
    NotFound,
    OrientationReversing,
    PSL2Error,
    ResidualTooLarge,
    RotationMismatch,
)
from .words import Representation, Word, enumerate_ball, evaluate

NULLSPACE_GAP = 1e-6
SIGN_COMBINATION_CAP = 12


@dataclass(frozen=True)
class RigidityParams:
    search_radius: int = 3
    corpus_radius: int = 4
    Q: int = detect.DEFAULT_Q
    delta: float = detect.DEFAULT_DELTA
    tol: float = 1e-8


@dataclass(frozen=True)
class NormalizedPair:
    rho1: Representation
    rho2: Representation
    gamma0: Word
    theta: float
    h1: ProjectiveElement
    h2: ProjectiveElement


@dataclass(frozen=True)
class Certificate:
    g: ProjectiveElement
    max_generator_residual: float
    max_corpus_trace_deviation: float
    corpus_radius: int


@dataclass(frozen=True)
class Witness:
    word: Word
    rot1: float
    rot2: float


@dataclass(frozen=True)
class Inconclusive:
    reason: str


RigidityVerdict = Union[Certificate, Witness, Inconclusive]


@dataclass(frozen=True)
class Provenance:
    params: RigidityParams
    gamma0: Optional[Word] = None
    theta: Optional[float] = None


def normalize_pair(
    rho1: Representation, rho2: Representation, gamma0: Word, tol: float = 1e-8
) -> NormalizedPair:
    g1 = evaluate(rho1, gamma0)
    g2 = evaluate(rho2, gamma0)
    for g in (g1, g2):
        cls = core.classify(g)
        if not isinstance(cls, core.Elliptic):
            raise NotElliptic(f"gamma0 maps to a {cls.kind} element")
    r1, r2 = core.rotation_number(g1), core.rotation_number(g2)
    if core.circle_distance(r1, r2) > tol:
        raise RotationMismatch(r1, r2)
    h1, theta = core.conjugate_to_rotation(g1)
    h2, _ = core.conjugate_to_rotation(g2)
    return NormalizedPair(rho1.conjugated(h1), rho2.conjugated(h2), gamma0, theta, h1, h2)


def trace_sequence(
    rho: Representation, gamma: Word, gamma0: Word, n_values: Sequence[int]
) -> list[float]:
    """|tr rho(gamma gamma0^n)| by direct matrix products."""
    g = evaluate(rho, gamma)
    g0 = evaluate(rho, gamma0)
    return [core.abs_trace(core.compose(g, core.power(g0, n))) for n in n_values]


def closed_form_trace_sequence(
    rho: Representation, gamma: Word, theta: float, n_values: Sequence[int]
) -> list[float]:
    """|(a+d) cos(n theta) + (c-b) sin(n theta)| for rho(gamma) = [[a, b], [c, d]]."""
    a, b, c, d = evaluate(rho, gamma).entries
    return [abs((a + d) * math.cos(n * theta) + (c - b) * math.sin(n * theta)) for n in n_values]


@dataclass(frozen=True)
class TraceReport:
    max_deviation: float
    worst_word: Word
    n_words: int


def abs_trace_deviation(
    rho1: Representation, rho2: Representation, corpus_radius: int
) -> TraceReport:
    worst, worst_word = 0.0, Word()
    words = enumerate_ball(len(rho1), corpus_radius)
    for w in words:
        dev = abs(core.abs_trace(evaluate(rho1, w)) - core.abs_trace(evaluate(rho2, w)))
        if dev > worst:
            worst, worst_word = dev, w
    return TraceReport(worst, worst_word, len(words))


def verify_abs_trace_equality(
    pair: NormalizedPair, corpus_radius: int = 4, tol: float = 1e-8
) -> TraceReport:
    return abs_trace_deviation(pair.rho1, pair.rho2, corpus_radius)


def rotation_spectrum(rho: Representation, corpus_radius: int) -> list[tuple[Word, float]]:
    return [(w, core.rotation_number(evaluate(rho, w))) for w in enumerate_ball(len(rho), corpus_radius)]


def first_rotation_mismatch(
    rho1: Representation, rho2: Representation, corpus_radius: int, tol: float
) -> Optional[Witness]:
    for w in enumerate_ball(len(rho1), corpus_radius):
        r1 = core.rotation_number(evaluate(rho1, w))
        r2 = core.rotation_number(evaluate(rho2, w))
        if core.circle_distance(r1, r2) > tol:
            return Witness(w, r1, r2)
    return None


# -- conjugator solve ----------------------------------------------------------


def _intertwining_block(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # row-major vec(B X - X A) = (B kron I - I kron A^T) vec(X)
    eye = np.eye(2)
    return np.kron(B, eye) - np.kron(eye, A.T)


def _smallest_singular(blocks):
    M = np.vstack(blocks)
    _, s, vt = np.linalg.svd(M)
    return s, vt[-1]


def conjugation_residual(
    rho1: Representation, rho2: Representation, g: ProjectiveElement
) -> float:
    """max_k distance(rho2(gen_k), g rho1(gen_k) g^-1)."""
    return max(
        core.distance(b, core.conjugate(g, a)) for a, b in zip(rho1.generators, rho2.generators)
    )


def _choose_signs(As, Bs):
    """Sign of each rho2 representative: try both, keep the one with the smaller block residual."""
    signs, ambiguous = [], []
    for k, (A, B) in enumerate(zip(As, Bs)):
        s_plus = np.linalg.svd(_intertwining_block(A, B), compute_uv=False)[-1]
        s_minus = np.linalg.svd(_intertwining_block(A, -B), compute_uv=False)[-1]
        signs.append(1.0 if s_plus <= s_minus else -1.0)
        scale = max(np.abs(A).max(), np.abs(B).max())
        if abs(s_plus - s_minus) <= 1e-6 * scale:
            ambiguous.append(k)
    if not ambiguous:
        return signs
    # traceless generators: both signs fit on their own, so decide jointly
    ambiguous = ambiguous[:SIGN_COMBINATION_CAP]
    best, best_signs = math.inf, signs
    for combo in itertools.product((1.0, -1.0), repeat=len(ambiguous)):
        trial = list(signs)
        for k, s in zip(ambiguous, combo):
            trial[k] = s
        sv, _ = _smallest_singular([_intertwining_block(A, s * B) for A, B, s in zip(As, Bs, trial)])
        if sv[-1] < best:
            best, best_signs = sv[-1], trial
    return best_signs


def recover_conjugator(
    rho1: Representation, rho2: Representation, tol: float = 1e-8
) -> ProjectiveElement:
    """Find g in PSL(2,R) with rho2 = g rho1 g^-1 on every generator.

    Solves rho2(gen_k) X = X rho1(gen_k) in the least-squares sense via the
    smallest right singular vector of the stacked system.
    """
    if len(rho1) != len(rho2) or len(rho1) < 1:
        raise ValueError("representations must have the same positive number of generators")
    As = [g.matrix for g in rho1.generators]
    Bs = [g.matrix for g in rho2.generators]
    signs = _choose_signs(As, Bs)
    sv, x = _smallest_singular([_intertwining_block(A, s * B) for A, B, s in zip(As, Bs, signs)])
    if sv[-2] - sv[-1] <= NULLSPACE_GAP:
        raise AmbiguousNullspace(
            f"two smallest singular values {sv[-2]:.3e}, {sv[-1]:.3e} are not separated"
        )
    X = x.reshape(2, 2)
    det = float(np.linalg.det(X))
    if det == 0.0:
        raise ResidualTooLarge(math.inf)
    X = X / math.sqrt(abs(det))
    Xinv = np.linalg.inv(X)
    residual = max(
        min(np.abs(B - X @ A @ Xinv).max(), np.abs(B + X @ A @ Xinv).max())
        for A, B in zip(As, Bs)
    )
    if residual > tol:
        raise ResidualTooLarge(float(residual))
    if det < 0:
        raise OrientationReversing(
            "the intertwiner reverses orientation; rotation numbers of rho1 and rho2 are opposite"
        )
    return core.from_matrix(X)


# -- end to end ----------------------------------------------------------------


def run_rigidity_check(
    rho1: Representation, rho2: Representation, params: RigidityParams = RigidityParams()
) -> tuple[RigidityVerdict, Provenance]:
    if len(rho1) != len(rho2):
        return Inconclusive("representations have different numbers of generators"), Provenance(params)
    tol = params.tol

    elem = detect.is_elementary(rho1, tol)
    if isinstance(elem, detect.Elementary):
        return Inconclusive(f"rho1 is elementary: {elem.reason}"), Provenance(params)

    try:
        found = detect.find_infinite_order_elliptic(
            rho1, params.search_radius, params.Q, params.delta
        )
    except NotFound as exc:
        return Inconclusive(f"no elliptic element of infinite order found: {exc}"), Provenance(params)
    prov = Provenance(params, found.word, found.theta)

    witness = first_rotation_mismatch(rho1, rho2, params.corpus_radius, tol)
    if witness is not None:
        return witness, prov

    try:
        pair = normalize_pair(rho1, rho2, found.word, tol)
        x = recover_conjugator(pair.rho1, pair.rho2, tol)
    except (PSL2Error, np.linalg.LinAlgError) as exc:
        return Inconclusive(f"{type(exc).__name__}: {exc}"), prov

    # rho2' = x rho1' x^-1 with rhoi' = hi rhoi hi^-1, so g = h2^-1 x h1
    g = core.compose(core.compose(core.inverse(pair.h2), x), pair.h1)
    residual = conjugation_residual(rho1, rho2, g)
    if residual > tol:
        return Inconclusive(f"certificate residual {residual:.3e} exceeds tolerance"), prov
    traces = abs_trace_deviation(rho1, rho2, params.corpus_radius)
    if traces.max_deviation > tol:
        return (
            Inconclusive(
                f"abs-trace deviation {traces.max_deviation:.3e} at {traces.worst_word} exceeds tolerance"
            ),
            prov,
        )
    return Certificate(g, residual, traces.max_deviation, params.corpus_radius), prov


def check_rigidity(
    rho1: Representation, rho2: Representation, params: RigidityParams = RigidityParams()
) -> RigidityVerdict:
    return run_rigidity_check(rho1, rho2, params)[0]

