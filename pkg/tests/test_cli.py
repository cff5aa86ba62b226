import json
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))
from triplekit import cli, fixtures
from triplekit.cohomology import o_operator_cohomology
from triplekit.fixtures import FIXTURES_ENV


@pytest.fixture(autouse=True)
def no_extra_fixtures(monkeypatch):
    monkeypatch.delenv(FIXTURES_ENV, raising=False)


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify_operator_passes(capsys):
    assert cli.main(["verify", "--kind", "o-op", "lts/dim2/rb"]) == 0
    report = _json_out(capsys)
    assert report["passed"] is True
    assert all(report["details"]["four_way"].values())


@pytest.mark.parametrize("kind", ["lts", "rep"])
def test_verify_accepts_enclosing_structures(kind):
    assert cli.main(["verify", "--kind", kind, "lts/dim4/rb"]) == 0


def test_verify_failure_exits_one(tmp_path, capsys):
    doc = {
        "kind": "rota-baxter",
        "algebra": "lts/dim2",
        "operator": {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 1]]},
    }
    path = tmp_path / "identity.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert cli.main(["verify", "--kind", "rb", str(path)]) == 1
    report = _json_out(capsys)
    failed = [c for c in report["checks"] if not c["passed"]]
    assert failed and "witness" in failed[0]


def test_verify_wrong_kind_exits_two(capsys):
    assert cli.main(["verify", "--kind", "prelts", "lie/sl2"]) == 2
    assert "Error:" in capsys.readouterr().err


def test_even_degree_exits_two(capsys):
    assert cli.main(["cohomology", "--degree", "2", "lts/dim2/adjoint"]) == 2
    assert "odd degrees only" in capsys.readouterr().err


def test_degree_cap(capsys):
    assert cli.main(["cohomology", "--degree", "7", "lts/dim2/adjoint"]) == 2
    assert "not supported" in capsys.readouterr().err


def test_cohomology_json(capsys):
    assert cli.main(["cohomology", "--flavor", "o-operator", "--degree", "1", "lts/dim2/rb"]) == 0
    out = _json_out(capsys)
    expected = o_operator_cohomology(fixtures.builtin("lts/dim2/rb"), 1)
    assert out["dim_H"] == expected.dim_H
    assert out["dim_Z"] - out["dim_B"] == out["dim_H"]


def test_cohomology_text_and_out_file(tmp_path, capsys):
    target = tmp_path / "h1.txt"
    code = cli.main(
        ["cohomology", "--flavor", "chevalley-eilenberg", "--degree", "1", "lie/sl2/adjoint",
         "--output", "text", "--out", str(target)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "dim H = 0" in out
    assert target.read_text(encoding="utf-8") == out


def test_bridge_from_lie_writes_document(tmp_path, capsys):
    target = tmp_path / "sl2_lts.json"
    assert cli.main(["bridge", "from-lie", "lie/sl2/standard", "--out", str(target)]) == 0
    payload = _json_out(capsys)
    assert payload["document"]["kind"] == "lts-rep"
    assert json.loads(target.read_text(encoding="utf-8")) == payload["document"]
    assert cli.main(["verify", "--kind", "rep", str(target)]) == 0


def test_bridge_from_lie_o_operator(capsys):
    assert cli.main(["bridge", "from-lie", "lie/heisenberg/o-operator"]) == 0
    assert _json_out(capsys)["document"]["kind"] == "o-operator"


def test_bridge_transfers_zero_cocycle(tmp_path, capsys):
    doc = {"kind": "lie-cochain", "pair": "lie/sl2/standard", "degree": 1, "values": [[0, 0], [0, 0], [0, 0]]}
    path = tmp_path / "f.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert cli.main(["bridge", "transfer-cocycle", str(path)]) == 0
    assert _json_out(capsys)["details"]["degree"] == 1


@pytest.mark.parametrize("action", ["check", "nijenhuis", "trivial"])
def test_deform_on_bare_operator(action):
    assert cli.main(["deform", action, "lts/dim2/rb"]) == 0


def test_deform_equivalence_needs_bivector(capsys):
    assert cli.main(["deform", "equivalence", "lts/dim2/rb"]) == 2
    assert "equivalence needs" in capsys.readouterr().err


def test_malformed_json_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": ', encoding="utf-8")
    assert cli.main(["verify", "--kind", "lts", str(path)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path):
    assert cli.main(["verify", "--kind", "lts", str(tmp_path / "absent.json")]) == 2


def test_custom_fixture_directory(tmp_path, monkeypatch, capsys):
    doc = {"kind": "lts", "dim": 3, "brackets": [{"args": [0, 1, 2], "value": {"0": "1"}}]}
    (tmp_path / "broken_cyclic.json").write_text(json.dumps(doc), encoding="utf-8")
    monkeypatch.setenv(FIXTURES_ENV, str(tmp_path))
    assert cli.main(["verify", "--kind", "lts", "broken_cyclic"]) == 1
    assert _json_out(capsys)["passed"] is False


ZERO_2X2 = [[0, 0], [0, 0]]


@pytest.mark.parametrize(
    "kind, doc, message",
    [
        (
            "rep",
            {"kind": "lts-rep", "algebra": "lts/dim2", "module_dim": 2, "theta": [{"pair": [5, 0], "matrix": ZERO_2X2}]},
            "$/theta/0/pair",
        ),
        (
            "rep",
            {"kind": "lie-rep", "algebra": "lie/sl2", "module_dim": 2, "rho": [{"index": 3, "matrix": ZERO_2X2}]},
            "$/rho/0/index",
        ),
        (
            "prelts",
            {"kind": "prelts", "dim": 2, "products": [{"args": [0, 1, 0], "value": {"4": 1}}]},
            "$/products/0",
        ),
        (
            "lts",
            {"kind": "lts", "dim": 2, "brackets": [{"args": [0, 1, 9], "value": {"0": 1}}]},
            "out of range",
        ),
        (
            "rb",
            {"kind": "rota-baxter", "algebra": "lts/dim2", "operator": {"rows": 2, "cols": 2, "entries": [[0, "1/0"], [0, 1]]}},
            "not a rational scalar",
        ),
    ],
)
def test_bad_entries_exit_two(tmp_path, capsys, kind, doc, message):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert cli.main(["verify", "--kind", kind, str(path)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("Error:")
    assert message in err


def test_bivector_pair_out_of_range_exits_two(tmp_path, capsys):
    doc = {
        "kind": "deformation",
        "operator": "lts/dim2/rb",
        "bivector": {"dim": 2, "coefficients": [{"pair": [0, 7], "value": 1}]},
    }
    path = tmp_path / "deform.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert cli.main(["deform", "equivalence", str(path)]) == 2
    assert "out of range" in capsys.readouterr().err


@pytest.mark.parametrize("name", ["paper/dim2", "paper/dim4/adjoint", "paper/dim2/rb", "paper/dim4/rb"])
def test_published_fixture_names(name, capsys):
    kind = "rb" if name.endswith("/rb") else "lts"
    assert cli.main(["verify", "--kind", kind, name]) == 0
    assert _json_out(capsys)["passed"] is True
