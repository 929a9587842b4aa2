"""Representation files and JSON documents for verdicts."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

import jsonschema

from . import core
from .core import ProjectiveElement
from .errors import DeterminantError, DuplicateLabel, ParseError
from .rigidity import (
    Certificate,
    Inconclusive,
    Provenance,
    RigidityParams,
    RigidityVerdict,
    Witness,
)
from .words import Representation, Word, reduce


def parse_representation(source: Union[str, Path], renormalize: bool = False) -> Representation:
    """Load {"name": ..., "generators": [{"label": ..., "matrix": [[a, b], [c, d]]}, ...]}."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file: {exc.strerror}") from exc
    return representation_from_text(text, str(path), renormalize)


def representation_from_text(text: str, where: str = "<input>", renormalize: bool = False) -> Representation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: top level must be an object")
    if "name" in doc and not isinstance(doc["name"], str):
        raise ParseError(f"{where}: field 'name' must be a string")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ParseError(f"{where}: field 'generators' must be a nonempty list")
    labels, elements = [], []
    for k, entry in enumerate(gens):
        field = f"{where}: generators[{k}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{field} must be an object")
        label = entry.get("label")
        if not isinstance(label, str) or not label:
            raise ParseError(f"{field}.label must be a nonempty string")
        if label in labels:
            raise DuplicateLabel(f"{field}.label {label!r} is already used")
        m = entry.get("matrix")
        if not (
            isinstance(m, list)
            and len(m) == 2
            and all(isinstance(row, list) and len(row) == 2 for row in m)
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for row in m for v in row)
        ):
            raise ParseError(f"{field}.matrix must be a 2x2 array of numbers")
        try:
            g = core.from_entries(m[0][0], m[0][1], m[1][0], m[1][1], renormalize=renormalize)
        except DeterminantError as exc:
            raise type(exc)(f"{field}.matrix: {exc}") from exc
        labels.append(label)
        elements.append(g)
    return Representation(tuple(elements), tuple(labels))


def representation_to_dict(rho: Representation, name: str = "") -> dict:
    return {
        "name": name,
        "generators": [
            {"label": lab, "matrix": element_to_list(g)} for lab, g in zip(rho.label_list, rho.generators)
        ],
    }


def element_to_list(g: ProjectiveElement) -> list[list[float]]:
    return [[g.a, g.b], [g.c, g.d]]


def word_to_dict(w: Optional[Word], labels=None) -> Optional[dict]:
    if w is None:
        return None
    return {"text": w.format(labels), "syllables": [[i, e] for i, e in w.syllables]}


def word_from_dict(doc: Optional[dict]) -> Optional[Word]:
    if doc is None:
        return None
    return reduce(tuple(s) for s in doc["syllables"])


def verdict_to_dict(verdict: RigidityVerdict, labels=None) -> dict:
    if isinstance(verdict, Certificate):
        return {
            "kind": "Certificate",
            "g": element_to_list(verdict.g),
            "max_generator_residual": verdict.max_generator_residual,
            "max_corpus_trace_deviation": verdict.max_corpus_trace_deviation,
            "corpus_radius": verdict.corpus_radius,
        }
    if isinstance(verdict, Witness):
        return {
            "kind": "Witness",
            "word": word_to_dict(verdict.word, labels),
            "rot1": verdict.rot1,
            "rot2": verdict.rot2,
        }
    return {"kind": "Inconclusive", "reason": verdict.reason}


def verdict_from_dict(doc: dict) -> RigidityVerdict:
    kind = doc["kind"]
    if kind == "Certificate":
        (a, b), (c, d) = doc["g"]
        return Certificate(
            core.ProjectiveElement(a, b, c, d),
            doc["max_generator_residual"],
            doc["max_corpus_trace_deviation"],
            doc["corpus_radius"],
        )
    if kind == "Witness":
        return Witness(word_from_dict(doc["word"]), doc["rot1"], doc["rot2"])
    if kind == "Inconclusive":
        return Inconclusive(doc["reason"])
    raise ParseError(f"unknown verdict kind {kind!r}")


def params_to_dict(params: RigidityParams) -> dict:
    return {
        "search_radius": params.search_radius,
        "corpus_radius": params.corpus_radius,
        "Q": params.Q,
        "delta": params.delta,
        "tol": params.tol,
    }


def verdict_output(verdict: RigidityVerdict, prov: Provenance, labels=None) -> dict:
    return {
        "verdict": verdict_to_dict(verdict, labels),
        "provenance": {
            "params": params_to_dict(prov.params),
            "corpus_radius": prov.params.corpus_radius,
            "gamma0_word": word_to_dict(prov.gamma0, labels),
            "theta": prov.theta,
        },
    }


def verdict_output_from_dict(doc: dict) -> tuple[RigidityVerdict, Provenance]:
    p = doc["provenance"]
    params = RigidityParams(**p["params"])
    return verdict_from_dict(doc["verdict"]), Provenance(params, word_from_dict(p["gamma0_word"]), p["theta"])


def dumps(doc: Any) -> str:
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


_NUMBER = {"type": "number"}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}, "minItems": 2, "maxItems": 2}
_WORD = {
    "type": "object",
    "properties": {
        "text": {"type": "string"},
        "syllables": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
    },
    "required": ["text", "syllables"],
    "additionalProperties": False,
}

VERDICT_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "kind": {"const": "Certificate"},
                "g": _MATRIX,
                "max_generator_residual": _NUMBER,
                "max_corpus_trace_deviation": _NUMBER,
                "corpus_radius": {"type": "integer"},
            },
            "required": ["kind", "g", "max_generator_residual", "max_corpus_trace_deviation", "corpus_radius"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "Witness"}, "word": _WORD, "rot1": _NUMBER, "rot2": _NUMBER},
            "required": ["kind", "word", "rot1", "rot2"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "Inconclusive"}, "reason": {"type": "string"}},
            "required": ["kind", "reason"],
            "additionalProperties": False,
        },
    ]
}

VERDICT_OUTPUT_SCHEMA = {
    "type": "object",
    "properties": {
        "verdict": VERDICT_SCHEMA,
        "provenance": {
            "type": "object",
            "properties": {
                "params": {
                    "type": "object",
                    "properties": {
                        "search_radius": {"type": "integer"},
                        "corpus_radius": {"type": "integer"},
                        "Q": {"type": "integer"},
                        "delta": _NUMBER,
                        "tol": _NUMBER,
                    },
                    "required": ["search_radius", "corpus_radius", "Q", "delta", "tol"],
                    "additionalProperties": False,
                },
                "corpus_radius": {"type": "integer"},
                "gamma0_word": {"oneOf": [_WORD, {"type": "null"}]},
                "theta": {"type": ["number", "null"]},
            },
            "required": ["params", "corpus_radius", "gamma0_word", "theta"],
            "additionalProperties": False,
        },
    },
    "required": ["verdict", "provenance"],
    "additionalProperties": False,
}

REPRESENTATION_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "generators": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"label": {"type": "string", "minLength": 1}, "matrix": _MATRIX},
                "required": ["label", "matrix"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["generators"],
}


def validate_verdict_output(doc: dict) -> None:
    jsonschema.validate(doc, VERDICT_OUTPUT_SCHEMA)
