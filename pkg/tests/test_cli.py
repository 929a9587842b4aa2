import json
import math
from pathlib import Path

import jsonschema
import pytest

from psl2rigid import core, rigidity, serialize
from psl2rigid.cli import run
from psl2rigid.errors import DeterminantError, DuplicateLabel, ParseError
from psl2rigid.words import parse_word

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def rep(*matrices):
    return {"name": "t", "generators": [{"label": lab, "matrix": m} for lab, m in zip("abcd", matrices)]}


def test_parse_representation_examples(tmp_path):
    rho = serialize.parse_representation(write(tmp_path, "p.json", rep([[1, 1], [0, 1]])))
    assert len(rho) == 1 and rho.generators[0] == core.from_entries(1, 1, 0, 1)

    path = write(tmp_path, "s.json", rep([[2, 0], [0, 2]]))
    assert serialize.parse_representation(path, renormalize=True).generators[0] == core.IDENTITY
    with pytest.raises(DeterminantError):
        serialize.parse_representation(path)

    with pytest.raises(DeterminantError):
        serialize.parse_representation(write(tmp_path, "z.json", rep([[1, 1], [1, 1]])))


def test_parse_errors_carry_diagnostics(tmp_path):
    with pytest.raises(ParseError, match=r":2:"):
        serialize.parse_representation(write(tmp_path, "bad.json", '{\n  "generators": [,]\n}'))
    with pytest.raises(ParseError, match=r"generators\[0\]\.matrix"):
        serialize.parse_representation(write(tmp_path, "m.json", rep([[1, 1, 0], [0, 1]])))
    doc = rep([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    doc["generators"][1]["label"] = "a"
    with pytest.raises(DuplicateLabel, match=r"generators\[1\]"):
        serialize.parse_representation(write(tmp_path, "d.json", doc))
    with pytest.raises(ParseError):
        serialize.parse_representation(write(tmp_path, "e.json", {"name": "x", "generators": []}))


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--matrix", "1,1,1,1"],
        ["classify", "--matrix", "1,2,3"],
        ["rot", "--matrix", "2,0,0,2"],
        ["check", "--rep1", "missing.json", "--rep2", "missing.json"],
        ["nonsense"],
        ["fuzz", "--mode", "sideways"],
    ],
)
def test_input_errors_exit_3(argv, capsys):
    assert run(argv) == 3


def test_det_zero_file_exits_3(tmp_path, capsys):
    path = write(tmp_path, "z.json", rep([[0, 0], [0, 0]]))
    assert run(["check", "--rep1", path, "--rep2", path]) == 3
    assert "generators[0].matrix" in capsys.readouterr().err


def test_rot_quarter_turn(capsys):
    assert run(["rot", "--matrix", "0,1,-1,0"]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(math.pi, abs=1e-15)


def test_check_same_file_is_identity_certificate(capsys):
    path = str(SAMPLES / "rot_hyp.json")
    assert run(["check", "--rep1", path, "--rep2", path, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    serialize.validate_verdict_output(doc)
    assert doc["verdict"]["kind"] == "Certificate"
    verdict, prov = serialize.verdict_output_from_dict(doc)
    assert core.distance(verdict.g, core.IDENTITY) <= 1e-12
    assert prov.gamma0 == parse_word("a")


def test_check_exit_codes(capsys):
    base = str(SAMPLES / "rot_hyp.json")
    assert run(["check", "--rep1", base, "--rep2", str(SAMPLES / "rot_hyp_conjugated.json")]) == 0
    assert run(["check", "--rep1", base, "--rep2", str(SAMPLES / "rot_hyp_changed.json")]) == 1
    par = str(SAMPLES / "parabolic.json")
    assert run(["check", "--rep1", par, "--rep2", par]) == 2
    assert run(["tracecheck", "--rep1", base, "--rep2", str(SAMPLES / "rot_hyp_conjugated.json")]) == 0
    assert run(["tracecheck", "--rep1", base, "--rep2", str(SAMPLES / "rot_hyp_changed.json")]) == 1


def test_witness_json_round_trip(capsys):
    base = str(SAMPLES / "rot_hyp.json")
    assert run(["check", "--rep1", base, "--rep2", str(SAMPLES / "rot_hyp_changed.json"), "--json"]) == 1
    text = capsys.readouterr().out
    doc = json.loads(text)
    serialize.validate_verdict_output(doc)
    verdict, prov = serialize.verdict_output_from_dict(doc)
    assert isinstance(verdict, rigidity.Witness)
    assert core.circle_distance(verdict.rot1, verdict.rot2) > 1e-8
    assert serialize.dumps(serialize.verdict_output(verdict, prov, ["a", "b"])) == text.rstrip("\n")


def test_verdict_round_trip_is_lossless():
    g = core.from_entries(1 / 3, 2 / 7, -0.1, 2.9, renormalize=True)
    cases = [
        rigidity.Certificate(g, 1.2345678901234567e-13, 3.3e-15, 4),
        rigidity.Witness(parse_word("abA"), 0.1 + 0.2, math.pi),
        rigidity.Inconclusive("no elliptic element of infinite order found"),
    ]
    prov = rigidity.Provenance(rigidity.RigidityParams(), parse_word("ab"), 1 / math.e)
    for v in cases:
        doc = json.loads(serialize.dumps(serialize.verdict_output(v, prov)))
        jsonschema.validate(doc, serialize.VERDICT_OUTPUT_SCHEMA)
        assert serialize.verdict_output_from_dict(doc) == (v, prov)


def test_schema_rejects_unknown_fields():
    doc = serialize.verdict_output(rigidity.Inconclusive("x"), rigidity.Provenance(rigidity.RigidityParams()))
    serialize.validate_verdict_output(doc)
    doc["verdict"]["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        serialize.validate_verdict_output(doc)


def test_fuzz_planted_seed_7(capsys):
    assert run(["fuzz", "--seed", "7", "--count", "100", "--mode", "planted", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdicts"] == {"Certificate": 100} and doc["as_expected"] == 100


def test_json_output_is_byte_identical(capsys):
    argvs = [
        ["fuzz", "--seed", "11", "--count", "10", "--mode", "perturbed", "--json"],
        ["fuzz", "--seed", "11", "--count", "5", "--mode", "reflected", "--json"],
        ["spectrum", "--rep1", str(SAMPLES / "rot_hyp.json"), "--radius", "2", "--json"],
        ["oracle", "--matrix", "0.6,0.8,-0.8,0.6", "--iters", "1000", "--json"],
    ]
    for argv in argvs:
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first


def test_other_subcommands(capsys):
    base = str(SAMPLES / "rot_hyp.json")
    assert run(["classify", "--matrix", "2,1,1,1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)
    assert run(["find-elliptic", "--rep1", base]) == 0
    assert run(["find-elliptic", "--rep1", str(SAMPLES / "parabolic.json")]) == 2
    assert run(["jorgensen", "--matrix", "1,2,0,1", "--matrix", "1,0,2,1", "--json"]) == 0
    out = capsys.readouterr().out
    assert "16" in out
    assert run(["elementary", "--rep1", base]) == 0
    assert run(["rot", "--rep1", base, "--word", "ab^-1a"]) == 0
