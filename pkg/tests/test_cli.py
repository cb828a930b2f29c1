import json

import pytest

from panache.blend import BlendedExtension
from panache.cli import main
from panache.fixtures import BUILDERS, NAMES, fixture_dir, fixture_text, load_fixture
from panache.io import (
    InstanceError,
    blocks_from_json,
    dumps,
    instance_to_json,
    load_instance_text,
    matrix_from_json,
    matrix_to_json,
)
from panache.linalg import Matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def write(tmp_path, doc, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=1))
    return str(p)


# fixtures and parsing

@pytest.mark.parametrize("name", NAMES)
def test_shipped_fixture_matches_builder(name):
    assert (fixture_dir() / f"{name}.json").read_text() == fixture_text(name)
    inst = load_fixture(name)
    assert dumps(instance_to_json(inst)) == dumps(BUILDERS[name]())


def test_matrix_json_round_trip():
    m = Matrix([[1, 2], [3, 4]]).inverse()
    assert matrix_from_json(matrix_to_json(m)) == m
    assert matrix_to_json(m) == [["-2", "1"], ["3/2", "-1/2"]]
    with pytest.raises(InstanceError):
        matrix_from_json([[0.5]])
    with pytest.raises(InstanceError):
        matrix_from_json([[True]])
    with pytest.raises(InstanceError):
        matrix_from_json([["1", "2"], ["3"]])


def test_blocks_need_every_generator():
    with pytest.raises(InstanceError):
        blocks_from_json({"a": [["1"]]}, ("a", "b"), (1, 1), "x")
    with pytest.raises(InstanceError):
        blocks_from_json({"a": [["1"]], "b": [["1"]], "c": [["1"]]}, ("a", "b"), (1, 1), "x")


def test_parse_error_has_line_and_column():
    with pytest.raises(InstanceError, match=r"src:2:\d+:"):
        load_instance_text('{"group":\n  {,}}', "src")


def test_bare_representation_document():
    doc = {"group": {"generators": ["a", "b"], "relators": ["abAB"]}, "dim": 2,
           "images": {"a": [["1/2", "0"], ["0", "2"]], "b": [["1", "0"], ["0", "1"]]}}
    inst = load_instance_text(json.dumps(doc))
    assert inst.objects["X"].dim == 2


def test_strict_and_lenient_loading():
    doc = {"group": {"generators": ["a"], "relators": ["aa"]},
           "objects": {"X": {"dim": 1, "images": {"a": [["2"]]}}}}
    with pytest.raises(InstanceError, match="objects.X"):
        load_instance_text(json.dumps(doc))
    inst = load_instance_text(json.dumps(doc), strict=False)
    assert "objects.X" in inst.problems and "X" not in inst.objects


def test_unresolved_name():
    doc = {"group": {"generators": ["a"]}, "objects": {"X": {"dim": 1, "images": {"a": [["1"]]}}},
           "extensions": {"E": {"sub": "X", "quot": "Y", "blocks": {"a": [["0"]]}}}}
    with pytest.raises(InstanceError, match="unresolved"):
        load_instance_text(json.dumps(doc))


# command line

def test_blend_on_free_fixture(capsys):
    code, out, _ = run(capsys, "blend", "--instance", "free-blend")
    assert code == 0 and out["panachable"] and out["valid"]


def test_blend_not_panachable(capsys):
    code, out, _ = run(capsys, "blend", "--instance", "not-panachable")
    assert code == 2 and out["panachable"] is False


def test_gamma_on_autodual_fixture(capsys):
    code, out, _ = run(capsys, "gamma", "--instance", "autodual")
    assert code == 0 and out["gamma"] == "0"
    code, out, _ = run(capsys, "gamma", "--instance", "rot4-sym-nonautodual")
    assert code == 0 and out["gamma"] != "0"


def test_monodromy_on_antisymmetric_fixture(capsys):
    code, out, _ = run(capsys, "monodromy", "--instance", "rot4-antisym", "--max-length", "8")
    assert code == 0
    assert out["hypothesis_certified"] and out["w2_dim"] == 1 and out["conclusion"] == "confirmed"


def test_monodromy_inconclusive_is_negative(capsys):
    code, out, _ = run(capsys, "monodromy", "--instance", "rot4-antisym", "--max-length", "1")
    assert code == 2 and out["conclusion"] == "inconclusive"


def test_pairing_and_frame(capsys):
    code, out, _ = run(capsys, "isoaut", "--instance", "rot4-sym-autodual")
    assert code == 0 and all(out["checks"].values())
    code, out, _ = run(capsys, "isoaut", "--instance", "rot4-sym-nonautodual")
    assert code == 2
    code, out, _ = run(capsys, "frame", "--instance", "rot4-antisym")
    assert code == 0 and out["eq4"]["holds"] and (out["a"], out["h"]) == (1, 2)


def test_autodualize_output_reloads(capsys, tmp_path):
    code, out, _ = run(capsys, "autodualize", "--instance", "rot4-sym-nonautodual")
    assert code == 0 and not out["already_autodual"]
    doc = json.loads(fixture_text("rot4-sym-nonautodual"))
    doc["blends"]["M"].update(out["blend"])
    code, g, _ = run(capsys, "gamma", "--instance", write(tmp_path, doc))
    assert code == 0 and g["gamma"] == "0"


def test_hom_and_ext(capsys):
    code, out, _ = run(capsys, "hom", "--instance", "free-blend", "--name", "A,B")
    assert code == 0 and out["dim"] == 1
    code, out, _ = run(capsys, "hom", "--instance", "free-blend", "--name", "N,A")
    assert out["dim"] == 0
    code, out, _ = run(capsys, "ext", "--instance", "free-blend", "--name", "B,A")
    assert code == 0 and out["space"]["dim"] == 2
    code, out, _ = run(capsys, "ext", "--instance", "free-blend", "--name", "M1")
    assert code == 0 and out["split"] is False


def test_act_and_diff(capsys, tmp_path):
    doc = json.loads(fixture_text("rot4-antisym"))
    doc["extensions"]["U"] = {"sub": "A", "quot": "B", "blocks": {"a": [["1"]], "b": [["-1"]]}}
    path = write(tmp_path, doc)
    code, out, _ = run(capsys, "act", "--instance", path, "--name", "M", "--by", "U")
    assert code == 0
    doc["blends"]["M2"] = dict(doc["blends"]["M"], **out["blend"])
    path = write(tmp_path, doc)
    code, out, _ = run(capsys, "diff", "--instance", path, "--name", "M,M2")
    assert code == 0 and out["difference"] == ["1", "-1"] and out["isomorphic_after_action"]


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "--instance", "free-blend")
    assert code == 0 and out["valid"]
    doc = {"group": {"generators": ["a"], "relators": ["aa"]},
           "objects": {"X": {"dim": 1, "images": {"a": [["2"]]}}}}
    code, out, _ = run(capsys, "validate", "--instance", write(tmp_path, doc))
    assert code == 2 and "objects.X" in out["problems"]


def test_input_errors(capsys, tmp_path):
    code, out, _ = run(capsys, "gamma", "--instance", str(tmp_path / "missing.json"))
    assert code == 1 and "error" in out
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"group\": [\n")
    code, out, _ = run(capsys, "blend", "--instance", str(bad))
    assert code == 1 and ":3:" in out["error"]
    code, out, _ = run(capsys, "hom", "--instance", "free-blend", "--name", "A,Q")
    assert code == 1 and "unresolved" in out["error"]
    code, out, _ = run(capsys, "gamma", "--instance", "free-blend")
    assert code == 1


def test_verify_all_fixtures(capsys):
    for name in NAMES:
        code, out, _ = run(capsys, "verify", "--instance", name)
        assert code == 0, name
        assert out["failed"] == 0


def test_verify_is_deterministic_in_process(capsys, monkeypatch):
    monkeypatch.setenv("PANACHE_SEED", "17")
    _, _, first = run(capsys, "verify", "--instance", "rot4-sym-nonautodual")
    _, _, second = run(capsys, "verify", "--instance", "rot4-sym-nonautodual")
    assert first == second


def test_emitted_blend_is_valid(capsys):
    code, out, _ = run(capsys, "blend", "--instance", "free-blend", "--json-indent", "2")
    inst = load_fixture("free-blend")
    gens = inst.group.generators
    parse = lambda key, shape: blocks_from_json(out["blend"][key], gens, shape, key)
    A, N, B = inst.objects["A"], inst.objects["N"], inst.objects["B"]
    M = BlendedExtension(A, N, B, parse("x", (1, 2)), parse("y", (2, 1)), parse("z", (1, 1)))
    assert M.total().validate()
