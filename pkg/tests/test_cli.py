import json
from fractions import Fraction

import numpy as np
import pytest

from sympack import cli, io
from sympack.symplin import BilinearForm, LinearMap


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj, encoding="utf-8")
    return str(p)


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# io ----------------------------------------------------------------------


def test_load_identity_metric(tmp_path):
    path = write(tmp_path, "g.json", {"dim": 4, "rows": np.eye(4, dtype=int).tolist()})
    m = io.load_matrix(path)
    assert isinstance(m, BilinearForm) and m.role == "metric"
    assert m.matrix[0, 0] == Fraction(1)


def test_load_rejects_degenerate_symplectic(tmp_path):
    path = write(tmp_path, "w.json", {"dim": 2, "rows": [[0, 0], [0, 0]], "role": "symplectic"})
    with pytest.raises(io.SchemaError, match="degenerate"):
        io.load_matrix(path)


def test_role_inference(tmp_path):
    assert io.load_matrix(write(tmp_path, "a.json", {"dim": 2, "rows": [[0, 1], [-1, 0]]})).role == "symplectic"
    m = io.load_matrix(write(tmp_path, "b.json", {"dim": 2, "rows": [[1, 2], [0, -1]]}))
    assert isinstance(m, LinearMap) and m.role == "involution"


@pytest.mark.parametrize("obj,msg", [
    ({"rows": [[1, 0], [0]]}, r"rows\[1\]"),
    ({"dim": 3, "rows": [[1, 0], [0, 1]]}, "dim"),
    ({"dim": 2, "rows": [[1, "x"], [0, 1]]}, r"rows\[0\]\[1\]"),
    ([1, 2], "object"),
])
def test_schema_errors(tmp_path, obj, msg):
    with pytest.raises(io.SchemaError, match=msg):
        io.load_matrix(write(tmp_path, "m.json", obj))


def test_invalid_json_reports_position(tmp_path):
    with pytest.raises(io.SchemaError, match="line 2"):
        io.load_matrix(write(tmp_path, "m.json", '{"dim": 2,\n "rows": [[1, 0] [0, 1]]}'))


def test_config_round_trip_and_duplicates(tmp_path):
    d = {"points": [["1", "0", "0"], ["0", "1/2", "1"]]}
    conf = io.config_from_json(d)
    assert io.config_from_json(io.config_to_json(conf)) == conf
    with pytest.raises(io.SchemaError, match="duplicate"):
        io.load_config(write(tmp_path, "c.json", {"points": [["1", "0", "0"], ["2", "0", "0"]]}))
    with pytest.raises(io.SchemaError):
        io.load_config(write(tmp_path, "c.json", {"points": [["1", "0"]]}))


def test_matrix_json_keeps_rationals():
    m = np.array([[Fraction(1, 3), Fraction(0)], [Fraction(0), Fraction(3)]], dtype=object)
    assert io.matrix_to_json(m)["rows"] == [["1/3", "0"], ["0", "3"]]


# commands -----------------------------------------------------------------


def test_pack_table(capsys):
    code, out, _ = run(["pack", "table", "--no-timestamp"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert [r["p"] for r in rep["results"]] == ["1", "1/2", "3/4", "1", "4/5", "24/25", "63/64", "288/289"]


def test_pack_table_csv(capsys):
    code, out, _ = run(["pack", "table", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[8].startswith("8,288/289,6/17,")


def test_pack_k_and_radii(capsys):
    code, out, _ = run(["pack", "--k", "6", "--no-timestamp"], capsys)
    assert code == 0 and json.loads(out)["results"]["p"] == "24/25"
    code, out, _ = run(["pack", "--radii-sq", "2/5,2/5,2/5,2/5,2/5", "--no-timestamp"], capsys)
    res = json.loads(out)["results"]
    assert code == 1 and not res["feasible"] and res["binding"] == {"b": 2, "m": [1, 1, 1, 1, 1]}
    assert res["ratio"] == "4/5"
    code, out, _ = run(["pack", "--radii-sq", "39/100,39/100,39/100,39/100,39/100"], capsys)
    assert code == 0


def test_classes(capsys):
    code, out, _ = run(["classes", "--k", "3", "--no-timestamp"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["count"] == 6 and len(res["classes"]) == 6


def test_verify_forms(capsys):
    code, out, _ = run(["verify-forms", "--form", "tau", "--lambda", "1", "--delta", "1", "--epsilon", "0.25",
                        "--n", "2", "--no-timestamp"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["summary"]["pass"]
    assert all(r["pass"] for r in rep["results"])


def test_verify_forms_failure_exit_code(capsys, monkeypatch):
    from sympack import localmodels
    bad = localmodels.Report("tame", (0.1, 1.0), 3, 2.0, {"r": 0.5}, False, 1e-8, "rho")
    monkeypatch.setattr(localmodels, "local_model_suite", lambda *a, **k: [bad])
    code, out, _ = run(["verify-forms", "--form", "rho"], capsys)
    assert code == 1 and not json.loads(out)["summary"]["pass"]


def test_genpos(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"points": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"]]})
    code, out, _ = run(["genpos", "check", "--file", path], capsys)
    res = json.loads(out)["results"]
    assert code == 1 and res["reason"] == "collinear" and res["witness"] == [0, 1, 2]
    code, out, _ = run(["genpos", "perturb", "--file", path, "--radius", "1/100", "--seed", "7"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["certificate"]["general_position"] and res["max_move"] < 0.01


def test_involution_and_acs(tmp_path, capsys):
    phi = write(tmp_path, "phi.json", {"dim": 2, "rows": [[1, 2], [0, -1]]})
    code, out, _ = run(["involution", "--file", phi], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["psi"]["rows"] == [["1", "1"], ["0", "1"]] and res["checks"]["exact"]
    g = write(tmp_path, "g.json", {"dim": 2, "rows": [[2, 0], [0, 2]]})
    code, out, _ = run(["acs", "--metric", g, "--phi", phi], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["checks"]["equivariance_residual"] <= 1e-9


def test_usage_errors(tmp_path, capsys):
    assert run(["bogus"], capsys)[0] == 2
    assert run(["pack", "--k", "12"], capsys)[0] == 2
    assert run(["pack"], capsys)[0] == 2
    assert run(["classes", "--k", "0"], capsys)[0] == 2
    assert run(["genpos", "check", "--file", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = write(tmp_path, "bad.json", "{not json")
    code, _, err = run(["involution", "--file", bad], capsys)
    assert code == 2 and "line 1" in err
    dup = write(tmp_path, "dup.json", {"points": [["1", "0", "0"], ["2", "0", "0"]]})
    assert run(["genpos", "check", "--file", dup], capsys)[0] == 2
    sing = write(tmp_path, "w.json", {"dim": 2, "rows": [[0, 0], [0, 0]], "role": "symplectic"})
    g = write(tmp_path, "g.json", {"dim": 2, "rows": [[1, 0], [0, 1]]})
    assert run(["acs", "--metric", g, "--omega", sing], capsys)[0] == 2


def test_determinism_and_seed_env(tmp_path, capsys, monkeypatch):
    argv = ["verify-forms", "--form", "rho", "--samples", "10", "--no-timestamp"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    monkeypatch.setenv("SYMPACK_SEED", "5")
    _, c, _ = run(argv, capsys)
    assert json.loads(c)["inputs"]["seed"] == 5 and c != a
    monkeypatch.setenv("SYMPACK_SEED", "nope")
    assert run(argv, capsys)[0] == 2


def test_output_file_and_report_round_trip(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert cli.run(["pack", "--k", "5", "--output", str(out)]) == 0
    d = json.loads(out.read_text(encoding="utf-8"))
    assert d["timestamp"] is not None
    assert cli.Report.from_dict(d).to_dict() == d
