import json
import math

import pytest
from gmpy2 import mpq

from isospectra import cli, coinvariant, polycore
from isospectra.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, main, parse_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_matrix_formats():
    A = parse_matrix('[[1, "1/2"], [0, -3]]')
    assert A[0, 1] == mpq(1, 2)
    B = parse_matrix('{"matrix": [[1, 2], [3, 4]]}')
    assert B.n == 2
    C = parse_matrix("0.5,1\n2,-0.25\n")
    assert C[1, 1] == mpq(-1, 4)
    for bad in ('[[1, 2], [3]]', '[[{"re": 1, "im": 2}]]', "1,x\n2,3", "[[1,2],"):
        with pytest.raises(cli.InputError):
            parse_matrix(bad)


def test_rigidity_p3(tmp_path, capsys):
    path = write(tmp_path, "p3.json", "[[0,1,0],[1,0,1],[0,1,0]]")
    code, out, _ = run(capsys, "rigidity", path, "--mode", "both")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verdict"] == "witness"
    minor = rep["certificates"][0]
    assert minor["k"] == 2 and sorted(minor["values"]) == ["-1", "0"]
    assert all(1 <= i <= 3 for s in minor["subsets"] for i in s)
    numeric = [c for c in rep["certificates"] if c["kind"] == "numeric-search"][0]
    assert numeric["found"] and numeric["witness"]["residual"] <= 1e-10


def test_rigidity_complete_graph(tmp_path, capsys):
    path = write(tmp_path, "j4.csv", "0,1,1,1\n1,0,1,1\n1,1,0,1\n1,1,1,0\n")
    code, out, _ = run(capsys, "rigidity", path, "--mode", "both", "--seed", "3")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["verdict"] == "rigid" and rep["seed"] == 3
    assert not any(c["kind"] == "disagreement" for c in rep["certificates"])


def test_rigidity_budget_inconclusive(tmp_path, capsys):
    path = write(tmp_path, "a.json", "[[1,2,0],[3,-1,1],[0,2,2]]")
    code, out, _ = run(capsys, "rigidity", path, "--mode", "exact", "--budget", "1")
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out)["verdict"] == "inconclusive"


def test_bad_inputs(tmp_path, capsys):
    assert run(capsys, "rigidity", write(tmp_path, "x.json", "[[1,2],[3]]"))[0] == EXIT_INPUT
    assert run(capsys, "rigidity", str(tmp_path / "missing.json"))[0] == EXIT_FAIL
    assert run(capsys, "floquet", "--periods", "3,0", "--search")[0] == EXIT_INPUT
    assert run(capsys, "lambda-table", "--n", "9")[0] == EXIT_INPUT
    with pytest.raises(SystemExit):
        main(["floquet", "--periods", "3"])


def test_floquet_search_and_check(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "floquet", "--periods", "5", "--search", "--out", str(out_path))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["verdict"] == "witness"
    assert json.loads(out_path.read_text()) == rep
    pot = [c for c in rep["certificates"] if c["kind"] == "potential"][0]
    assert pot["residual"] <= 1e-8 and pot["torus_deviation"] <= 1e-8
    V = write(tmp_path, "V.json", json.dumps(pot["potential"]))
    zero = {"periods": [5], "values": [{"n": [i], "re": "0", "im": "0"} for i in range(5)]}
    W = write(tmp_path, "W.json", json.dumps(zero))
    code, out, _ = run(capsys, "floquet", "--periods", "5", "--check", V, W)
    assert code == EXIT_OK and json.loads(out)["verdict"] == "isospectral"
    one = {"periods": [5], "values": [{"n": [i], "re": str(int(i == 0)), "im": "0"} for i in range(5)]}
    U = write(tmp_path, "U.json", json.dumps(one))
    code, out, _ = run(capsys, "floquet", "--periods", "5", "--check", U, W)
    assert json.loads(out)["verdict"] == "not-isospectral"
    assert run(capsys, "floquet", "--periods", "4", "--check", U, W)[0] == EXIT_INPUT


def test_floquet_rigid_and_open_cases(capsys):
    code, out, _ = run(capsys, "floquet", "--periods", "3,2", "--search")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "rigid"
    code, out, _ = run(capsys, "floquet", "--periods", "3,3,3", "--search")
    rep = json.loads(out)
    assert code == EXIT_INCONCLUSIVE and rep["verdict"] == "inconclusive"
    assert any(c["kind"] == "note" and "(3,3,3)" in c["text"] for c in rep["certificates"])


def test_bands_csv(capsys):
    code, out, _ = run(capsys, "floquet", "--periods", "1", "--bands", "4")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and lines[0] == "z1_re,z1_im,lambda1_re,lambda1_im"
    assert [round(float(l.split(",")[2]), 9) for l in lines[1:]] == [2, 0, -2, 0]


def test_lambda_table(capsys):
    code, out, _ = run(capsys, "lambda-table", "--n", "2")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "n,m,k,j,closed_form,trace,equal,recursion"
    assert len(lines) == 5
    assert all(l.split(",")[6] == "true" for l in lines[1:])
    code, out, _ = run(capsys, "lambda-table", "--n", "4")
    for line in out.strip().splitlines()[1:]:
        n, m, k, j, closed = (int(x) for x in line.split(",")[:5])
        if k == 0:
            assert closed == -math.factorial(m) * math.factorial(n - m)
        if j >= 1:
            assert line.split(",")[7] == "true"


def test_selftest_passes(capsys):
    code, out, err = run(capsys, "selftest")
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "pass"
    assert len([l for l in err.splitlines() if "criterion" in l]) == 10


def test_selftest_catches_wrong_lambda(monkeypatch, capsys):
    real = coinvariant.lambda_closed_form
    monkeypatch.setattr(coinvariant, "lambda_closed_form", lambda n, m, k, j: real(n, m, k, j) + (k == 1))
    code, out, err = run(capsys, "selftest")
    assert code == EXIT_FAIL
    statuses = {c["criterion"]: c["status"] for c in json.loads(out)["certificates"]}
    assert statuses[4] == "fail"


def test_selftest_catches_wrong_origin_test(monkeypatch, capsys):
    monkeypatch.setattr(polycore, "vanishes_only_at_origin", lambda gb: True)
    code, out, _ = run(capsys, "selftest")
    statuses = {c["criterion"]: c["status"] for c in json.loads(out)["certificates"]}
    assert code == EXIT_FAIL and statuses[3] == "fail"


def test_seed_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("ISOSPECTRA_SEED", "11")
    code, out, _ = run(capsys, "floquet", "--periods", "4", "--search")
    assert json.loads(out)["seed"] == 11
