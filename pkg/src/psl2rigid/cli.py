"""Command-line interface.

Exit codes: 0 success or Certificate, 1 Witness (or a failed check),
2 Inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from typing import Optional, Sequence

from . import core, detect, fuzz, rigidity, rotnum, serialize
from .errors import (
    BallTooLarge,
    DeterminantError,
    IndexOutOfRange,
    NotElliptic,
    NotFound,
    ParseError,
    RotationMismatch,
)
from .words import Representation, evaluate, generator, parse_word

EXIT_OK, EXIT_WITNESS, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3

VERDICT_EXIT = {
    "Certificate": EXIT_OK,
    "Witness": EXIT_WITNESS,
    "Inconclusive": EXIT_INCONCLUSIVE,
}


class InputError(Exception):
    pass


def _emit(args, doc: dict, lines: Sequence[str]):
    if args.json:
        print(serialize.dumps(doc))
    else:
        for line in lines:
            print(line)


def _parse_matrix(text: str, renormalize: bool) -> core.ProjectiveElement:
    try:
        values = [float(v) for v in text.replace(";", ",").split(",")]
    except ValueError as exc:
        raise InputError(f"--matrix {text!r}: {exc}") from exc
    if len(values) != 4:
        raise InputError(f"--matrix needs four comma-separated numbers, got {len(values)}")
    return core.from_entries(*values, renormalize=renormalize)


def _load(path: Optional[str], flag: str, renormalize: bool) -> Representation:
    if not path:
        raise InputError(f"{flag} is required")
    return serialize.parse_representation(path, renormalize=renormalize)


def _elements(args) -> list[tuple[str, core.ProjectiveElement]]:
    """Elements named by --matrix (repeatable) or by --rep1 with --word (repeatable)."""
    if args.matrix:
        return [(m, _parse_matrix(m, args.renormalize)) for m in args.matrix]
    rho = _load(args.rep1, "--rep1 or --matrix", args.renormalize)
    labels = rho.label_list
    if args.word:
        words = [parse_word(w, labels) for w in args.word]
    else:
        words = [generator(i) for i in range(len(rho))]
    return [(w.format(labels), evaluate(rho, w)) for w in words]


def _params(args) -> rigidity.RigidityParams:
    return rigidity.RigidityParams(
        search_radius=args.radius,
        corpus_radius=args.corpus_radius,
        Q=args.irrational_q,
        delta=args.irrational_delta,
        tol=args.tol,
    )


def _classification_dict(cls) -> dict:
    doc = {"kind": cls.kind}
    if isinstance(cls, core.Elliptic):
        doc["angle"] = cls.angle
    elif isinstance(cls, core.Hyperbolic):
        doc["translation_length"] = cls.translation_length
    return doc


def _fixed_dict(fix) -> dict:
    if isinstance(fix, core.EllipticFix):
        return {"kind": "elliptic", "x": fix.point.x, "y": fix.point.y}
    if isinstance(fix, core.ParabolicFix):
        return {"kind": "parabolic", "angle": fix.point.angle}
    if isinstance(fix, core.HyperbolicFix):
        return {"kind": "hyperbolic", "attracting": fix.attracting.angle, "repelling": fix.repelling.angle}
    return {"kind": "all"}


# -- subcommands -------------------------------------------------------------


def cmd_classify(args) -> int:
    tol = args.tol if args.tol is not None else core.CLASSIFY_TOL
    docs, lines = [], []
    for name, g in _elements(args):
        cls = core.classify(g, tol)
        doc = {
            "input": name,
            "element": serialize.element_to_list(g),
            "abs_trace": core.abs_trace(g),
            "classification": _classification_dict(cls),
            "rotation_number": core.rotation_number(g, tol),
            "fixed_points": _fixed_dict(core.fixed_points(g, tol)),
        }
        docs.append(doc)
        extra = "".join(f" {k}={v!r}" for k, v in doc["classification"].items() if k != "kind")
        lines.append(f"{name}: {cls.kind}{extra} |tr|={doc['abs_trace']!r}")
    _emit(args, {"elements": docs}, lines)
    return EXIT_OK


def cmd_rot(args) -> int:
    tol = args.tol if args.tol is not None else core.CLASSIFY_TOL
    elems = _elements(args)
    docs = [{"input": name, "rotation_number": core.rotation_number(g, tol)} for name, g in elems]
    if len(docs) == 1:
        lines = [repr(docs[0]["rotation_number"])]
    else:
        lines = [f"{d['input']}: {d['rotation_number']!r}" for d in docs]
    _emit(args, {"elements": docs}, lines)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    rho = _load(args.rep1, "--rep1", args.renormalize)
    labels = rho.label_list
    rows = rigidity.rotation_spectrum(rho, args.radius)
    doc = {
        "radius": args.radius,
        "spectrum": [{"word": serialize.word_to_dict(w, labels), "rotation_number": r} for w, r in rows],
    }
    _emit(args, doc, [f"{w.format(labels)}\t{r!r}" for w, r in rows])
    return EXIT_OK


def cmd_find_elliptic(args) -> int:
    rho = _load(args.rep1, "--rep1", args.renormalize)
    labels = rho.label_list
    try:
        res = detect.find_infinite_order_elliptic(rho, args.radius, args.irrational_q, args.irrational_delta)
    except NotFound as exc:
        _emit(args, {"found": False, "radius": exc.radius}, [str(exc)])
        return EXIT_INCONCLUSIVE
    doc = {
        "found": True,
        "word": serialize.word_to_dict(res.word, labels),
        "theta": res.theta,
        "theta_over_pi": res.report.theta_over_pi,
        "convergents": [list(c) for c in res.report.convergents],
    }
    _emit(args, doc, [f"word {res.word.format(labels)}  theta={res.theta!r}"])
    return EXIT_OK


def cmd_jorgensen(args) -> int:
    elems = _elements(args)
    if len(elems) < 2:
        raise InputError("jorgensen needs two elements")
    (na, A), (nb, B) = elems[:2]
    value = detect.jorgensen_value(A, B)
    doc = {"A": na, "B": nb, "jorgensen_value": value, "below_one": value < 1.0}
    verdict = "not both discrete and non-elementary" if value < 1.0 else "inequality satisfied"
    _emit(args, doc, [f"{value!r}  ({verdict})"])
    return EXIT_OK


def cmd_elementary(args) -> int:
    rho = _load(args.rep1, "--rep1", args.renormalize)
    labels = rho.label_list
    tol = args.tol if args.tol is not None else core.CLASSIFY_TOL
    res = detect.is_elementary(rho, tol)
    if isinstance(res, detect.Elementary):
        doc, line, code = {"kind": "Elementary", "reason": res.reason}, f"elementary: {res.reason}", EXIT_OK
    elif isinstance(res, detect.NonElementary):
        w1, w2 = res.witness
        doc = {
            "kind": "NonElementary",
            "witness": [serialize.word_to_dict(w1, labels), serialize.word_to_dict(w2, labels)],
        }
        line, code = f"non-elementary, witness ({w1.format(labels)}, {w2.format(labels)})", EXIT_OK
    else:
        doc, line, code = {"kind": "Unknown"}, "unknown", EXIT_INCONCLUSIVE
    _emit(args, doc, [line])
    return code


def _describe(verdict, labels) -> str:
    if isinstance(verdict, rigidity.Certificate):
        g = verdict.g
        return (
            f"Certificate: g = [[{g.a!r}, {g.b!r}], [{g.c!r}, {g.d!r}]]\n"
            f"  max generator residual {verdict.max_generator_residual:.3e}, "
            f"corpus abs-trace deviation {verdict.max_corpus_trace_deviation:.3e} "
            f"(radius {verdict.corpus_radius})"
        )
    if isinstance(verdict, rigidity.Witness):
        return f"Witness: {verdict.word.format(labels)} has rotation numbers {verdict.rot1!r} vs {verdict.rot2!r}"
    return f"Inconclusive: {verdict.reason}"


def cmd_check(args) -> int:
    rho1 = _load(args.rep1, "--rep1", args.renormalize)
    rho2 = _load(args.rep2, "--rep2", args.renormalize)
    if len(rho1) != len(rho2):
        raise InputError("--rep1 and --rep2 have different numbers of generators")
    verdict, prov = rigidity.run_rigidity_check(rho1, rho2, _params(args))
    doc = serialize.verdict_output(verdict, prov, rho1.label_list)
    _emit(args, doc, [_describe(verdict, rho1.label_list)])
    return VERDICT_EXIT[doc["verdict"]["kind"]]


def cmd_tracecheck(args) -> int:
    rho1 = _load(args.rep1, "--rep1", args.renormalize)
    rho2 = _load(args.rep2, "--rep2", args.renormalize)
    if len(rho1) != len(rho2):
        raise InputError("--rep1 and --rep2 have different numbers of generators")
    labels = rho1.label_list
    if args.word:
        gamma0 = parse_word(args.word[0], labels)
    else:
        try:
            gamma0 = detect.find_infinite_order_elliptic(rho1, args.radius, args.irrational_q, args.irrational_delta).word
        except NotFound as exc:
            _emit(args, {"kind": "Inconclusive", "reason": str(exc)}, [f"Inconclusive: {exc}"])
            return EXIT_INCONCLUSIVE
    try:
        pair = rigidity.normalize_pair(rho1, rho2, gamma0, args.tol)
    except RotationMismatch as exc:
        doc = {"kind": "Witness", "word": serialize.word_to_dict(gamma0, labels), "rot1": exc.rot1, "rot2": exc.rot2}
        _emit(args, doc, [f"Witness: {exc}"])
        return EXIT_WITNESS
    except NotElliptic as exc:
        _emit(args, {"kind": "Inconclusive", "reason": str(exc)}, [f"Inconclusive: {exc}"])
        return EXIT_INCONCLUSIVE
    report = rigidity.verify_abs_trace_equality(pair, args.corpus_radius, args.tol)
    ok = report.max_deviation <= args.tol
    doc = {
        "kind": "TraceCheck",
        "gamma0_word": serialize.word_to_dict(gamma0, labels),
        "theta": pair.theta,
        "corpus_radius": args.corpus_radius,
        "n_words": report.n_words,
        "max_deviation": report.max_deviation,
        "worst_word": serialize.word_to_dict(report.worst_word, labels),
        "within_tol": ok,
    }
    _emit(
        args,
        doc,
        [f"max | |tr rho1| - |tr rho2| | = {report.max_deviation:.3e} at {report.worst_word.format(labels)}"],
    )
    return EXIT_OK if ok else EXIT_WITNESS


def cmd_oracle(args) -> int:
    tol = args.tol if args.tol is not None else core.CLASSIFY_TOL
    docs, lines, worst = [], [], 0.0
    for name, g in _elements(args):
        doc = {"input": name, **rotnum.oracle_check(g, args.iters, tol)}
        worst = max(worst, doc["difference"])
        docs.append(doc)
        lines.append(f"{name}: closed form {doc['closed_form']!r}, Poincare {doc['poincare']!r}, diff {doc['difference']:.2e}")
    ok = worst <= 1e-3
    _emit(args, {"elements": docs, "agree": ok}, lines)
    return EXIT_OK if ok else EXIT_WITNESS


def cmd_fuzz(args) -> int:
    params = _params(args)
    trials, kinds, expected = [], Counter(), 0
    for index, rng in enumerate(fuzz.trial_seeds(args.seed, args.count)):
        pair = fuzz.make_pair(rng, args.mode)
        verdict, facts = fuzz.run_trial(pair, params)
        vdoc = serialize.verdict_to_dict(verdict)
        kinds[vdoc["kind"]] += 1
        expected += bool(facts["expected"])
        trial = {
            "index": index,
            "verdict": vdoc,
            "gamma0_word": serialize.word_to_dict(facts["gamma0"]),
            "theta": facts["theta"],
            "expected": bool(facts["expected"]),
        }
        if "solver" in facts:
            trial["solver"] = facts["solver"]
        if "planted_distance" in facts:
            trial["planted_distance"] = facts["planted_distance"]
        trials.append(trial)
    doc = {
        "mode": args.mode,
        "seed": args.seed,
        "count": args.count,
        "params": serialize.params_to_dict(params),
        "verdicts": dict(sorted(kinds.items())),
        "as_expected": expected,
        "trials": trials,
    }
    summary = ", ".join(f"{n} {k}" for k, n in sorted(kinds.items()))
    _emit(args, doc, [f"{args.mode}: {expected}/{args.count} as expected ({summary})"])
    return EXIT_OK if expected == args.count else EXIT_WITNESS


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--renormalize", action="store_true", help="divide matrices by sqrt(det)")

    elems = argparse.ArgumentParser(add_help=False)
    elems.add_argument("--matrix", action="append", help='"a,b,c,d" (repeatable)')
    elems.add_argument("--rep1", help="representation file")
    elems.add_argument("--word", action="append", help="word in the generators of --rep1 (repeatable)")

    pipeline = argparse.ArgumentParser(add_help=False)
    pipeline.add_argument("--radius", type=int, default=3, help="elliptic search radius")
    pipeline.add_argument("--corpus-radius", type=int, default=4)
    pipeline.add_argument("--irrational-q", type=int, default=detect.DEFAULT_Q)
    pipeline.add_argument("--irrational-delta", type=float, default=detect.DEFAULT_DELTA)
    pipeline.add_argument("--tol", type=float, default=1e-8)

    p = argparse.ArgumentParser(prog="psl2rigid", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in [
        ("classify", cmd_classify, "classify elements"),
        ("rot", cmd_rot, "rotation numbers"),
    ]:
        s = sub.add_parser(name, parents=[common, elems], help=helptext)
        s.add_argument("--tol", type=float, default=None)
        s.set_defaults(func=fn)

    s = sub.add_parser("spectrum", parents=[common], help="rotation numbers over a word ball")
    s.add_argument("--rep1")
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("find-elliptic", parents=[common], help="search for an elliptic of irrational angle")
    s.add_argument("--rep1")
    s.add_argument("--radius", type=int, default=3)
    s.add_argument("--irrational-q", type=int, default=detect.DEFAULT_Q)
    s.add_argument("--irrational-delta", type=float, default=detect.DEFAULT_DELTA)
    s.set_defaults(func=cmd_find_elliptic)

    s = sub.add_parser("jorgensen", parents=[common, elems], help="Jorgensen value of two elements")
    s.set_defaults(func=cmd_jorgensen)

    s = sub.add_parser("elementary", parents=[common], help="elementarity heuristic")
    s.add_argument("--rep1")
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=cmd_elementary)

    s = sub.add_parser("check", parents=[common, pipeline], help="full rigidity pipeline")
    s.add_argument("--rep1")
    s.add_argument("--rep2")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("tracecheck", parents=[common, pipeline], help="abs-trace equality on a word ball")
    s.add_argument("--rep1")
    s.add_argument("--rep2")
    s.add_argument("--word", action="append", help="gamma0 (default: found by search)")
    s.set_defaults(func=cmd_tracecheck)

    s = sub.add_parser("oracle", parents=[common, elems], help="closed form vs Poincare rotation numbers")
    s.add_argument("--iters", type=int, default=10**5)
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("fuzz", parents=[common, pipeline], help="seeded planted-pair trials")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--mode", choices=fuzz.MODES, default="planted")
    s.set_defaults(func=cmd_fuzz)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ParseError, DeterminantError, IndexOutOfRange, BallTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
