import csv
import json
import math

import numpy as np
import pytest

from matasymp import cli
from matasymp import matcore as mc
from matasymp import oracle as orc


@pytest.fixture
def write_matrix(tmp_path):
    def _write(A, name="m.json"):
        path = tmp_path / name
        mc.save_matrix(np.asarray(A, dtype=complex), path)
        return str(path)
    return _write


def _summary(out: str) -> dict:
    return json.loads(out.strip().splitlines()[-1])


def test_eval_gamma(write_matrix, capsys):
    assert cli.main(["eval", "gamma", "--matrix", write_matrix([[10.0]])]) == 0
    doc = _summary(capsys.readouterr().out)
    assert doc["result"]["entries"][0][0] == pytest.approx(362880, rel=1e-13)


def test_eval_kummer(write_matrix, capsys):
    assert cli.main(["eval", "kummer", "--matrix", write_matrix([[1.0]]), "--params", "a=1,b=2"]) == 0
    assert _summary(capsys.readouterr().out)["result"]["entries"][0][0] == pytest.approx(math.e - 1)


def test_eval_stirling_matches_gamma(write_matrix, capsys):
    A = orc.generate_one(orc.MatrixFamily("hermitian_pd", 3, 10.0, 20.0, seed=5), 0)
    path = write_matrix(A)
    cli.main(["eval", "gamma", "--matrix", path])
    g = mc.matrix_from_json(_summary(capsys.readouterr().out)["result"])
    cli.main(["eval", "gamma_stirling", "--matrix", path, "--params", "N=3"])
    doc = _summary(capsys.readouterr().out)
    s = mc.matrix_from_json(doc["result"])
    assert mc.norm2(s - g) <= 10 * doc["first_omitted_norm"]


@pytest.mark.parametrize("fn,params", [
    ("bessel_j", "z=1"), ("bessel_i", "z=0.5"), ("kummer_asym", "a=0.7,b=1.9"),
    ("watson", "f=reciprocal_1p"), ("laplace", "problem=gaussian"),
])
def test_eval_other_functions(write_matrix, capsys, fn, params):
    A = np.diag([20.0, 30.0])
    assert cli.main(["eval", fn, "--matrix", write_matrix(A), "--params", params]) == 0
    assert "result" in _summary(capsys.readouterr().out)


def test_eval_round_trip_bitwise(write_matrix, tmp_path, capsys):
    A = np.array([[3.0, 0.5], [0.2, 2.0 - 0.1j]])
    out = tmp_path / "r.json"
    assert cli.main(["eval", "bessel_j", "--matrix", write_matrix(A), "--out", str(out)]) == 0
    R = mc.load_matrix(out)
    out2 = tmp_path / "r2.json"
    mc.save_matrix(R, out2)
    assert out.read_text() == out2.read_text()


def test_eval_precondition_exit_2(write_matrix, capsys):
    assert cli.main(["eval", "gamma", "--matrix", write_matrix([[-1.5]])]) == 2
    assert "SpectrumNotRight" in capsys.readouterr().err
    assert cli.main(["eval", "kummer", "--matrix", write_matrix([[1.0]])]) == 2
    assert cli.main(["eval", "gamma", "--matrix", "/nonexistent.json"]) == 2


def test_verify_matcore_passes(capsys):
    assert cli.main(["verify", "matcore", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines and all(": pass (" in ln for ln in lines)


def test_verify_all_seed_7(capsys):
    assert cli.main(["verify", "all", "--seed", "7"]) == 0
    assert ": fail" not in capsys.readouterr().out


def test_verify_deterministic(capsys):
    cli.main(["verify", "expansions", "--seed", "3"])
    first = capsys.readouterr().out
    cli.main(["verify", "expansions", "--seed", "3"])
    assert capsys.readouterr().out == first


def test_verify_tol_override_can_fail(capsys):
    assert cli.main(["verify", "matcore", "--seed", "1", "--tol", "-1"]) == 1


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "bogus"])
    assert exc.value.code == 2


def _read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_sweep_gamma_bound(write_matrix, tmp_path, capsys):
    base = orc.generate_one(orc.MatrixFamily("hermitian_pd", 3, 1.0, 2.0, seed=8), 0)
    out = tmp_path / "g.csv"
    args = ["sweep", "gamma_bound", "--matrix", write_matrix(base), "--scales", "8,16,32,64,128,256",
            "--terms", "2", "--out", str(out)]
    assert cli.main(args) == 0
    rows = _read_csv(out)
    assert rows[0] == ["scale", "inv_norm", "truncation_error", "bound_value", "n_terms"]
    body = rows[1:-1]
    assert len(body) == 6
    assert all(float(r[2]) <= float(r[3]) for r in body)
    assert rows[-1][0] == "slope"


def test_sweep_watson_order(write_matrix, tmp_path):
    base = orc.generate_one(orc.MatrixFamily("normal_sectorial", 4, 1.0, 2.0, math.pi / 4, seed=8), 0)
    out = tmp_path / "w.csv"
    assert cli.main(["sweep", "watson_order", "--matrix", write_matrix(base), "--scales",
                     "1000,10,300,30,100", "--terms", "3", "--out", str(out)]) == 0
    rows = _read_csv(out)
    scales = [float(r[0]) for r in rows[1:-1]]
    assert scales == sorted(scales)
    assert -4.2 <= float(rows[-1][1]) <= -3.8
    # 17 significant digits
    assert len(rows[1][1].replace(".", "").lstrip("0")) >= 15


@pytest.mark.parametrize("study", ["laplace_order", "bessel_ratio", "kummer_order"])
def test_sweep_other_studies(write_matrix, tmp_path, study):
    base = orc.generate_one(orc.MatrixFamily("hermitian_pd", 2, 1.0, 1.05, seed=8), 0)
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", study, "--matrix", write_matrix(base), "--scales", "20,40,80",
                     "--out", str(out)]) == 0
    assert float(_read_csv(out)[-1][1]) < 0


def test_sweep_empty_scales(write_matrix):
    assert cli.main(["sweep", "watson_order", "--matrix", write_matrix([[1.0]]), "--scales", ""]) == 2
