import json
from pathlib import Path

from torusdyn.cli import load_map_spec, main

FIXDIR = Path(__file__).resolve().parent.parent / "fixtures"


def _write_spec(tmp_path, doc, name="map.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


WILD = {"matrix": [[1, 0], [0, 1]], "gamma": ["2", "3"], "options": {"seed": 5}}
FIB = {"matrix": [[1, 0], [0, 1]], "gamma": ["2", "4"], "options": {}}
DENSE = {"matrix": [[2, 1], [1, 1]], "gamma": ["1", "1"], "options": {"seed": 5, "family_budget": 8}}


def test_classify_wild(tmp_path, capsys):
    rc = main(["classify", _write_spec(tmp_path, WILD)])
    out = capsys.readouterr().out
    assert rc == 0 and "DEGREE_ONE_WILD" in out and "dense = True" in out


def test_classify_json_shape(tmp_path, capsys):
    rc = main(["classify", _write_spec(tmp_path, DENSE), "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["verdict"] == "DEGREE_GT_ONE_DENSE_INVARIANTS"
    assert doc["report"]["density"]["status"] == "NOT_CONTAINED"
    assert len(doc["report"]["invariant_family"]) == 8
    interval = doc["report"]["dynamical_degree"]["interval"]
    assert interval is not None and "/" in interval[0]


def test_fibration_command(tmp_path, capsys):
    rc = main(["fibration", _write_spec(tmp_path, FIB), "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["witness"]["iterate"] == 1 and doc["witness"]["character"] == [2, -1]


def test_wild_command_and_precondition_exit(tmp_path, capsys):
    rc = main(["wild", _write_spec(tmp_path, WILD)])
    assert rc == 0
    rc = main(["wild", _write_spec(tmp_path, DENSE)])
    assert rc == 3
    assert "precondition" in capsys.readouterr().err


def test_decompose_command(tmp_path, capsys):
    spec = {"matrix": [[3, 0], [0, 1]], "gamma": ["7", "1"], "options": {}}
    rc = main(["decompose", _write_spec(tmp_path, spec), "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["decomposition"]["beta2"] == ["7^(1/2)"]
    assert doc["decomposition"]["conjugated_translation"] == ["1"]


def test_periodic_command(tmp_path, capsys):
    spec = {"matrix": [[2]], "gamma": ["1"], "options": {}}
    rc = main(["periodic", _write_spec(tmp_path, spec), "-d", "3", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    periods = {tuple(p["point"]): p["period"] for p in doc["points"]}
    assert periods == {("1",): 1, ("zeta(3)",): 2, ("zeta(3)^2",): 2}
    rc = main(["periodic", _write_spec(tmp_path, spec), "-d", "4"])
    assert rc == 3


def test_orbit_command(tmp_path, capsys):
    rc = main(["orbit", _write_spec(tmp_path, WILD), "--point", "1,1", "-n", "3", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["orbit"] == [["1", "1"], ["2", "3"], ["4", "9"]]


def test_check_density_and_strict(tmp_path, capsys):
    rc = main(["check-density", _write_spec(tmp_path, WILD), "--point", "1,1", "--budget", "25"])
    assert rc == 0 and "NOT_CONTAINED" in capsys.readouterr().out
    ident = {"matrix": [[1, 0], [0, 1]], "gamma": ["1", "1"], "options": {}}
    rc = main(["check-density", _write_spec(tmp_path, ident), "--point", "1,1", "--budget", "25"])
    assert rc == 0 and "UNDECIDED" in capsys.readouterr().out
    rc = main(["check-density", _write_spec(tmp_path, ident), "--point", "1,1", "--budget", "25", "--strict"])
    assert rc == 4


def test_parse_errors_exit_2(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "missing.json")]) == 2
    assert main(["classify", _write_spec(tmp_path, {"matrix": [[1, 1], [1, 1]], "gamma": ["1", "1"]})]) == 2
    assert main(["classify", _write_spec(tmp_path, {"matrix": [[1]], "gamma": ["bogus!"]})]) == 2
    assert main(["classify", _write_spec(tmp_path, {"matrix": [[1]], "gamma": ["1"], "options": {"seed": -1}})]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", str(bad)]) == 2
    capsys.readouterr()


def test_map_spec_round_trip(tmp_path):
    path = _write_spec(tmp_path, {"matrix": [[1, 0], [0, 1]], "gamma": ["2/1", "zeta(6)^7"], "options": {"seed": 2}})
    spec = load_map_spec(path)
    canon = spec.canonical_json()
    path2 = tmp_path / "canon.json"
    path2.write_text(canon)
    spec2 = load_map_spec(str(path2))
    assert spec2.canonical_json() == canon  # printing is idempotent
    assert spec2.to_map().translation == spec.to_map().translation


def test_determinism_byte_identical(tmp_path, capsys):
    path = _write_spec(tmp_path, DENSE)
    outs = []
    for _ in range(2):
        rc = main(["classify", path, "--json"])
        assert rc == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    rc = main(["classify", path, "--json", "--seed", "99"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["report"]["verdict"] == json.loads(outs[0])["report"]["verdict"]


def test_repo_fixtures_parse():
    for name in ("example_wild.json", "example_fibration.json", "example_dense.json"):
        spec = load_map_spec(str(FIXDIR / name))
        assert spec.to_map().dim == 2
