import json
from pathlib import Path

import pytest

from symcurv.fileio import (
    ParseError,
    algebra_document,
    dumps,
    embedding_document,
    load_json,
    parse_algebra,
    parse_embedding,
)
from symcurv.liealg import LieAlgebraError, builtin, validate
from symcurv.submanifold import random_embedding

DATA = Path(__file__).resolve().parent.parent / "data"
DOC = {"dim": 2, "brackets": [[0, 1, 1, "1"]], "omega": [["0", "1"], ["-1", "0"]]}


@pytest.mark.parametrize("name", ["aff1c", "r40", "abelian4"])
def test_algebra_round_trip(name):
    alg = builtin(name)
    back = parse_algebra(json.loads(json.dumps(algebra_document(alg))))
    assert back.structure == alg.structure
    assert back.omega == alg.omega
    assert back.name == alg.name


def test_shipped_files_parse():
    for name in ("aff1c", "r40"):
        alg = parse_algebra(load_json(str(DATA / ("%s.json" % name))))
        assert alg.structure == builtin(name).structure
    assert not validate(parse_algebra(load_json(str(DATA / "broken_jacobi.json")))).jacobi


@pytest.mark.parametrize(
    "patch",
    [
        {"dim": 3},
        {"dim": "4"},
        {"brackets": [[0, 1, 2, "1"]]},  # index out of range
        {"brackets": [[0, 1, "x"]]},
        {"brackets": [[0, 1, 1, 0.5]]},  # floats are not exact
        {"omega": [["0", "1"]]},
        {"omega": [["0", "1/0"], ["-1", "0"]]},
    ],
)
def test_algebra_parse_errors(patch):
    doc = dict(DOC)
    doc.update(patch)
    with pytest.raises(ParseError):
        parse_algebra(doc)


def test_missing_key_and_non_object():
    with pytest.raises(ParseError):
        parse_algebra({"dim": 2})
    with pytest.raises(ParseError):
        parse_algebra([1, 2])


def test_degenerate_omega_is_an_axiom_failure():
    doc = dict(DOC, omega=[["0", "0"], ["0", "0"]])
    with pytest.raises(LieAlgebraError) as info:
        parse_algebra(doc)
    assert info.value.axiom == "nondegenerate"


def test_embedding_round_trip():
    phi = random_embedding(2, 3, 1, tangential=True)
    back = parse_embedding(json.loads(json.dumps(embedding_document(phi))))
    assert all(a == b for a, b in zip(back.components, phi.components))


@pytest.mark.parametrize(
    "doc",
    [
        {"k": 1, "n": 2, "components": [[], [], []]},
        {"k": 1, "n": 2, "components": [[[[1], "1"]], [], [], []]},
        {"k": 1, "n": 2, "components": [[[[4, 0], "1"]], [], [], []]},
        {"k": 1, "n": 2, "components": [[[[0, 0], "1"]], [], [], []]},  # nonzero at origin
        {"k": 0, "n": 2, "components": []},
    ],
)
def test_embedding_parse_errors(doc):
    with pytest.raises(ParseError):
        parse_embedding(doc)


def test_load_json_errors(tmp_path):
    with pytest.raises(ParseError):
        load_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        load_json(str(bad))


def test_dumps_is_canonical():
    text = dumps({"b": 1, "a": [builtin("r40").omega.matrix]})
    doc = json.loads(text)
    assert doc["schema"] == 1
    assert text.index('"a"') < text.index('"b"')
