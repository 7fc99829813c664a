import json

import pytest

qhexa = pytest.importorskip("qhexa")


def test_version():
    assert qhexa.__version__ == "0.1.0"


def test_normalize_and_commutator():
    assert qhexa.normalize("X_0 P_0") == qhexa.normalize("P_0 X_0 + i hbar")
    assert qhexa.commutator("P_0", "X_0") == "-1"
    assert qhexa.commutator("P_1", "P_2") == "0"


def test_literal_round_trip():
    text = qhexa.literal("(1/2) P_0 X_1 - 3 i hbar^2 M")
    assert qhexa.literal(text) == text
    doc = qhexa.to_json(text)
    assert "terms" in json.loads(doc)
    assert qhexa.from_json(doc) == text


def test_parse_error():
    with pytest.raises(qhexa.ParseError):
        qhexa.normalize("P_0 +")


def test_suite():
    reps = qhexa.verify_suite("YY")
    assert len(reps) == 15
    assert all(r["pass"] for r in reps)


def test_geometry():
    y = qhexa.lift([0.3, -0.2, 0.5, 0.1], 1.0)
    x, lam = qhexa.project(y)
    assert x == pytest.approx([0.3, -0.2, 0.5, 0.1], abs=1e-12)
    assert lam == pytest.approx(1.0)
    res = qhexa.property_suite(seed=3, samples=50)
    assert all(r["pass"] for r in res)


def test_cli_run():
    code, out, err = qhexa.run(["alg", "commute", "P_0", "X_0"])
    assert code == 0
    assert out.strip() == "-1"
    code, _, err = qhexa.run(["alg", "normalize", "P_0 +"])
    assert code == 2
