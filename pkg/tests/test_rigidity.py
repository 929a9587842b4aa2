import math

import numpy as np
import pytest

from psl2rigid import core, detect, fuzz, rigidity
from psl2rigid.errors import (
    AmbiguousNullspace,
    NotElliptic,
    OrientationReversing,
    ResidualTooLarge,
    RotationMismatch,
)
from psl2rigid.rigidity import (
    Certificate,
    Inconclusive,
    Witness,
    check_rigidity,
    closed_form_trace_sequence,
    normalize_pair,
    recover_conjugator,
    rotation_spectrum,
    trace_sequence,
    verify_abs_trace_equality,
)
from psl2rigid.words import EMPTY, Representation, enumerate_ball, evaluate, parse_word

from conftest import assert_entries_close

R1 = core.rotation(1.0)
HYP = core.from_entries(2, 1, 1, 1)
RHO = Representation((R1, HYP))
K = core.from_entries(1, 1, 0, 1)
A = parse_word("a")


def test_normalize_pair_examples(rng):
    pair = normalize_pair(RHO, RHO, A)
    assert pair.theta == pytest.approx(1.0, abs=1e-12)
    for g, h in zip(pair.rho1.generators, RHO.generators):
        assert core.distance(g, h) <= 1e-12

    for _ in range(20):
        k = fuzz.random_conjugator(rng)
        pair = normalize_pair(RHO, RHO.conjugated(k), A)
        g1, g2 = evaluate(pair.rho1, A), evaluate(pair.rho2, A)
        assert core.distance(g1, g2) <= 1e-8
        assert core.distance(g1, core.rotation(pair.theta)) <= 1e-8

    with pytest.raises(NotElliptic):
        normalize_pair(RHO, Representation((HYP, HYP)), A)
    with pytest.raises(RotationMismatch):
        normalize_pair(RHO, Representation((core.rotation(1.2), HYP)), A)


def test_trace_sequence_examples():
    rho = Representation((R1, HYP))
    ns = list(range(-5, 6))
    assert trace_sequence(rho, EMPTY, A, ns) == pytest.approx([abs(2 * math.cos(n)) for n in ns], abs=1e-12)
    assert trace_sequence(rho, parse_word("b"), A, [1]) == pytest.approx([3 * math.cos(1)], abs=1e-12)
    assert 3 * math.cos(1) == pytest.approx(1.6209, abs=1e-4)
    phi = 0.7
    rho = Representation((R1, core.rotation(phi)))
    assert trace_sequence(rho, parse_word("b"), A, [2]) == pytest.approx([abs(2 * math.cos(phi + 2))], abs=1e-12)


def test_trace_sequence_closed_form(rng):
    for _ in range(20):
        rho = fuzz.planted_representation(rng)
        found = detect.find_infinite_order_elliptic(rho)
        pair = normalize_pair(rho, rho, found.word)
        gamma = fuzz.random_word(rng, 2, 5)
        ns = list(range(-100, 101))
        direct = trace_sequence(pair.rho1, gamma, found.word, ns)
        closed = closed_form_trace_sequence(pair.rho1, gamma, pair.theta, ns)
        assert np.max(np.abs(np.array(direct) - np.array(closed))) <= 1e-9
        # the vector (a+d, c-b) never vanishes for an SL2 matrix
        assert max(closed) > 0


def test_verify_abs_trace_equality_examples(rng):
    k = fuzz.random_conjugator(rng)
    pair = normalize_pair(RHO, RHO.conjugated(k), A)
    assert verify_abs_trace_equality(pair, 4).max_deviation <= 1e-8

    pair = normalize_pair(RHO, RHO, A)
    rep = verify_abs_trace_equality(pair, 4)
    assert rep.max_deviation == 0.0 and rep.n_words == 161

    moved = core.from_entries(HYP.a + 1e-2, HYP.b, HYP.c, HYP.d, renormalize=True)
    pair = normalize_pair(RHO, Representation((R1, moved)), A)
    rep = verify_abs_trace_equality(pair, 4)
    assert rep.max_deviation > 1e-3 and len(rep.worst_word) > 0


def test_recover_conjugator_examples():
    g = recover_conjugator(RHO, RHO)
    assert core.distance(g, core.IDENTITY) <= 1e-12

    g = recover_conjugator(RHO, RHO.conjugated(K))
    assert core.distance(g, K) <= 1e-8
    assert rigidity.conjugation_residual(RHO, RHO.conjugated(K), g) <= 1e-8

    reflected = Representation(tuple(fuzz.reflect(x) for x in RHO.generators))
    with pytest.raises(OrientationReversing):
        recover_conjugator(RHO, reflected)


def test_recover_conjugator_errors():
    other = Representation((core.rotation(1.3), HYP))
    with pytest.raises(ResidualTooLarge):
        recover_conjugator(RHO, other)
    # a single elliptic commutes with every rotation about its centre
    with pytest.raises(AmbiguousNullspace):
        recover_conjugator(Representation((R1,)), Representation((R1,)))


def test_recover_conjugator_sign_robustness(rng):
    for _ in range(20):
        pair = fuzz.make_pair(rng)
        g = recover_conjugator(pair.rho1, pair.rho2)
        for flip in ((True, False), (False, True), (True, True)):
            gens = tuple(
                core.ProjectiveElement(*(-np.array(x.entries))) if f else x
                for x, f in zip(pair.rho2.generators, flip)
            )
            g2 = recover_conjugator(pair.rho1, Representation(gens))
            assert core.distance(g, g2) <= 1e-9


def test_recover_conjugator_with_traceless_generator(rng):
    # a half-turn fits both signs on its own; the joint system must pick one
    half = core.conjugate(fuzz.affine(0.4, 1.3), core.rotation(math.pi / 2))
    rho1 = Representation((half, HYP, R1))
    k = fuzz.random_conjugator(rng)
    rho2 = rho1.conjugated(k)
    g = recover_conjugator(rho1, rho2)
    assert core.distance(g, k) <= 1e-8


def test_check_rigidity_examples():
    verdict = check_rigidity(RHO, RHO.conjugated(K))
    assert isinstance(verdict, Certificate)
    assert verdict.max_generator_residual <= 1e-8
    assert verdict.g.det == pytest.approx(1.0, abs=1e-12)
    assert core.distance(verdict.g, K) <= 1e-8

    verdict = check_rigidity(RHO, Representation((R1, core.from_entries(3, 1, 2, 1))))
    assert isinstance(verdict, Witness)
    assert core.circle_distance(verdict.rot1, verdict.rot2) > 1e-8

    verdict = check_rigidity(Representation((K,)), Representation((K,)))
    assert isinstance(verdict, Inconclusive)


def test_check_rigidity_no_elliptic_found():
    # Sanov pair generates a free discrete group with no elliptic elements
    rho = Representation((core.from_entries(1, 2, 0, 1), core.from_entries(1, 0, 2, 1)))
    verdict = check_rigidity(rho, rho)
    assert isinstance(verdict, Inconclusive) and "no elliptic" in verdict.reason


def test_check_rigidity_certificate_in_original_coordinates(rng):
    for _ in range(10):
        pair = fuzz.make_pair(rng)
        verdict = check_rigidity(pair.rho1, pair.rho2)
        assert isinstance(verdict, Certificate)
        for x, y in zip(pair.rho1.generators, pair.rho2.generators):
            assert_entries_close(core.conjugate(verdict.g, x), y.entries, 1e-8)


def test_rotation_spectrum_examples(rng):
    rows = rotation_spectrum(Representation((R1,)), 2)
    assert [w.format() for w, _ in rows] == ["1", "a", "A", "a^2", "a^-2"]
    expected = [0.0, 2.0, 2 * math.pi - 2, 4.0, 2 * math.pi - 4]
    for (_, got), want in zip(rows, expected):
        assert core.circle_distance(got, want) <= 1e-12

    rows = rotation_spectrum(Representation((core.from_entries(2, 0, 0, 0.5),)), 2)
    assert all(r == 0.0 for _, r in rows)

    for _ in range(10):
        rho = fuzz.planted_representation(rng)
        s1 = rotation_spectrum(rho, 3)
        s2 = rotation_spectrum(rho.conjugated(fuzz.random_conjugator(rng)), 3)
        assert [w for w, _ in s1] == [w for w, _ in s2] == enumerate_ball(2, 3)
        assert max(core.circle_distance(a, b) for (_, a), (_, b) in zip(s1, s2)) <= 1e-8
