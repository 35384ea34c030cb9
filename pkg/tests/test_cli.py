import json
import shutil
import subprocess
import sys

import pytest

from parahecke.cli import main
from parahecke.verify import run_criterion


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_canon_so5(capsys):
    elem = json.dumps({"N": 1, "denom": 2, "diag": [1, 2, 2, 2, 4]})
    data = run_json(capsys, "canon", "--group", "so5", elem)
    assert data["label"]["invariants"] == ["1", "2", "2", "2", "4"]


def test_canon_so3_product(capsys):
    elem = json.dumps({"N": 1, "product": [{"generator": "K_mu", "param": 2}, {"denom": 2, "diag": [1, 2, 4]}]})
    data = run_json(capsys, "canon", "--group", "so3", elem)
    assert data["label"] == {"m": "2", "invariants": ["1", "2", "4"]}
    assert data["right_coset"]["mat"] == [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "4"]]


def test_canon_param(capsys):
    data = run_json(capsys, "canon", "--group", "param", json.dumps({"N": 2, "diag": [1, 1, 1, 1]}))
    assert data["label"] == {"d": "1", "u1": "1", "u2": "1", "v": "1"}
    elem = {"N": 2, "product": [{"W": 2}, {"diag": [1, 2, 4, 2], "scale": 4}, {"W": 2}]}
    data = run_json(capsys, "canon", "--group", "param", json.dumps(elem))
    assert data["label"] == {"d": "1", "u1": "2", "u2": "1", "v": "1"}
    data = run_json(capsys, "canon", "--group", "param-star", json.dumps({"N": 3, "diag": [1, 3, 9, 3], "scale": 9}))
    assert data["label"] == {"u": "3", "v": "1"}


def test_canon_reads_files_and_stdin(capsys, tmp_path, monkeypatch):
    path = tmp_path / "e.json"
    path.write_text(json.dumps({"N": 2, "denom": 2, "diag": [1, 1, 2, 4, 4]}))
    data = run_json(capsys, "canon", f"@{path}")
    assert data["label"]["invariants"] == ["1", "1", "2", "4", "4"]
    monkeypatch.setattr("sys.stdin", open(path))
    data = run_json(capsys, "canon", "-")
    assert data["label"]["invariants"] == ["1", "1", "2", "4", "4"]


@pytest.mark.parametrize("N,which,count", [(1, "T1", 15), (2, "T1", 18), (2, "T2", 48), (1, "T2", 30)])
def test_cosets(capsys, tmp_path, N, which, count):
    data = run_json(capsys, "cosets", which, "-N", str(N), "-p", "2", "--cache-dir", str(tmp_path))
    assert data["count"] == str(count)
    again = run_json(capsys, "cosets", which, "-N", str(N), "-p", "2", "--cache-dir", str(tmp_path))
    assert again == data
    stored = json.loads(open(data["cache"]).read())
    assert stored["count"] == str(count) and len(stored["reps"]) == count


def test_cosets_param_group(capsys, tmp_path):
    data = run_json(capsys, "cosets", "T2", "-N", "2", "-p", "2", "--group", "param", "--cache-dir", str(tmp_path))
    assert data["count"] == "24"


def test_deleting_cache_keeps_results(capsys, tmp_path):
    first = run_json(capsys, "cosets", "T1", "-N", "3", "-p", "2", "--cache-dir", str(tmp_path))
    shutil.rmtree(tmp_path)
    second = run_json(capsys, "cosets", "T1", "-N", "3", "-p", "2", "--cache-dir", str(tmp_path))
    assert first == second


def test_tampered_cache_is_recomputed(capsys, tmp_path):
    data = run_json(capsys, "cosets", "T1", "-N", "1", "-p", "2", "--cache-dir", str(tmp_path))
    stored = json.loads(open(data["cache"]).read())
    stored["reps"][3][0][0] = "7"
    open(data["cache"], "w").write(json.dumps(stored))
    again = run_json(capsys, "cosets", "T1", "-N", "1", "-p", "2", "--cache-dir", str(tmp_path))
    assert again["count"] == "15"
    assert json.loads(open(data["cache"]).read())["reps"][3][0][0] != "7"


def test_cache_integrity_check():
    res = run_criterion("cache")
    assert res.passed, res.first_failure()


def test_mul_coprime(capsys):
    data = run_json(capsys, "mul", "-N", "1", "T1(2)", "T1(3)")
    assert data["terms"] == [{"label": {"m": "6", "invariants": ["1", "6", "6", "6", "36"]}, "coeff": "1"}]


def test_mul_expansion(capsys):
    data = run_json(capsys, "mul", "-N", "1", "-p", "2", "T1", "T2")
    terms = {tuple(t["label"]["invariants"]): t["coeff"] for t in data["terms"]}
    assert terms == {("1", "2", "2", "2", "4"): "6", ("1", "2", "4", "8", "16"): "1"}


def test_mul_param(capsys):
    data = run_json(capsys, "mul", "-N", "2", "--group", "param", "W2", "W2")
    assert data["terms"] == [{"label": {"d": "1", "u1": "1", "u2": "1", "v": "1"}, "coeff": "1"}]
    data = run_json(capsys, "mul", "-N", "3", "--group", "param", "T1(2)", '{"d":"3","u1":"1","u2":"1","v":"1"}')
    assert len(data["terms"]) == 1


def test_emitted_json_reparses(capsys):
    from parahecke.hecke import HeckeElement
    from parahecke.orthogonal import OrthoElement
    from parahecke.symplectic import SympElement

    data = run_json(capsys, "mul", "-N", "2", "-p", "2", "T2", "T1")
    assert HeckeElement.from_json(data).to_json() == data
    data = run_json(capsys, "map", "sp2so", json.dumps({"N": 2, "J": True}))
    assert OrthoElement.from_json(data).to_json() == data
    elem = json.dumps({"N": 3, "denom": 6, "diag": [1, 3, 6, 12, 36]})
    data = run_json(capsys, "map", "so2sp", elem)
    assert SympElement.from_json(data).to_json() == data


def test_map_examples(capsys):
    data = run_json(capsys, "map", "sp2so", json.dumps({"N": 1, "J": True}))
    assert data["mat"] == [
        ["0", "0", "0", "0", "-1"],
        ["0", "0", "0", "-1", "0"],
        ["0", "0", "1", "0", "0"],
        ["0", "-1", "0", "0", "0"],
        ["-1", "0", "0", "0", "0"],
    ]
    data = run_json(capsys, "map", "sp2so", json.dumps({"N": 1, "diag": [1, 2, 12, 6], "scale": 12}))
    assert data["denom"] == "6"
    assert [data["mat"][i][i] for i in range(5)] == ["1", "3", "6", "12", "36"]
    back = run_json(capsys, "map", "so2sp", json.dumps({"N": 1, "denom": 6, "diag": [1, 3, 6, 12, 36]}))
    assert back["scale"] == "12"
    assert [back["mat"][i][i] for i in range(4)] == ["1", "2", "12", "6"]
    again = run_json(capsys, "map", "sp2so", json.dumps(back))
    assert again == data


def test_exit_codes(capsys):
    assert run(capsys, "canon", "{not json")[0] == 2
    assert run(capsys, "canon", "--group", "so5", json.dumps({"N": 1, "diag": [1, 2, 1, 1, 1]}))[0] == 3
    assert run(capsys, "cosets", "T1", "-N", "1", "-p", "2", "--bound", "1")[0] == 4
    assert run(capsys, "mul", "-N", "1", '{"m":"8","invariants":["1","8","8","8","64"]}', "T1(2)")[0] == 0
    assert run(capsys, "mul", "-N", "1", "T1(2)", '{"m":"8","invariants":["1","8","8","8","64"]}')[0] == 4
    assert run(capsys, "cosets", "T1", "-N", "4", "-p", "2")[0] == 6
    assert run(capsys, "verify", "-N", "4")[0] == 6
    code, _, err = run(capsys, "canon", json.dumps({"N": 12, "diag": [1, 1, 1, 1, 1]}))
    assert code == 6 and "squarefree" in err
    f = {"N": 2, "product": [{"generator": "M_tilde_lambda", "param": [1, 0, 0]}, {"denom": 2, "diag": [1, 2, 2, 2, 4]}]}
    code, _, err = run(capsys, "map", "so2sp", json.dumps(f))
    assert code == 3 and "not invertible at point level" in err
    assert run(capsys, "cosets", "T1", "-N", "1", "-p", "4")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_env_fallback(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("HECKE_CACHE_DIR", str(tmp_path))
    monkeypatch.setenv("HECKE_LEVEL", "2")
    monkeypatch.setenv("HECKE_PRIME", "2")
    import importlib

    import parahecke.cli as cli

    importlib.reload(cli)
    code = cli.main(["cosets", "T1", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["count"] == "18"
    assert data["cache"].startswith(str(tmp_path))


def test_verify_reports_every_criterion(capsys):
    code, out, err = run(capsys, "verify", "--samples", "20")
    assert code == 0, err
    for k in range(1, 10):
        assert f"[PASS] criterion {k}:" in out
    assert "[PASS] criterion cache:" in out


def test_verify_is_deterministic_given_seed():
    a = run_criterion(8, samples=40, seed=5)
    b = run_criterion(8, samples=40, seed=5)
    assert a.passed and [(r.item, r.computed) for r in a.rows] == [(r.item, r.computed) for r in b.rows]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "parahecke.cli", "map", "sp2so", '{"N":2,"J":true}'],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "(1/1)" in proc.stdout
