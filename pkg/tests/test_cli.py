import json

import numpy as np
import pytest

from wpolar.cli import main
from wpolar.matrixio import save_matrix


@pytest.fixture
def mat(tmp_path):
    def write(name, x):
        p = tmp_path / f"{name}.json"
        save_matrix(p, np.asarray(x, dtype=complex), name)
        return str(p)
    return write


def read_pairs(pairs, n):
    return np.array([complex(*e) for e in pairs]).reshape(n, -1)


def run_json(argv, tmp_path, capsys=None):
    out = tmp_path / "out.json"
    code = main(argv + ["--json", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_decompose(mat, tmp_path):
    code, rep = run_json(["decompose", mat("g", [[0, -2], [1, 0]])], tmp_path)
    assert code == 0
    np.testing.assert_allclose(read_pairs(rep["unitary_part"], 2), [[0, -1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(read_pairs(rep["left_positive"], 2), np.diag([2, 1]), atol=1e-15)
    np.testing.assert_allclose(read_pairs(rep["right_positive"], 2), np.diag([1, 2]), atol=1e-15)


def test_decompose_weighted_and_save(mat, tmp_path):
    d = tmp_path / "factors"
    code, rep = run_json(["decompose", mat("g", [[1, 2], [3, 4]]), "--weight", mat("a", [[2, 1], [1, 2]]),
                          "--save", str(d)], tmp_path)
    assert code == 0
    assert rep["a_unitary_residual"] <= 1e-12 and rep["left_residual"] <= 1e-12
    assert sorted(p.name for p in d.iterdir()) == ["a_positive_left.json", "a_positive_right.json", "a_unitary_part.json"]


def test_solve_all(mat, tmp_path, capsys):
    code, rep = run_json(["solve", mat("h", np.eye(2)), mat("k", np.diag([4, 9])), "--all"], tmp_path)
    assert code == 0
    assert len(rep["family"]["solutions"]) == 4
    np.testing.assert_allclose(read_pairs(rep["T"], 2), np.diag([2, 3]), atol=1e-14)
    assert "4 enumerated solutions" in capsys.readouterr().out


def test_solve_errors(mat, capsys):
    assert main(["solve", mat("h", np.eye(2)), mat("k", [[1, 1], [0, 1]])]) == 3
    assert "NotPositiveDefinite(k)" in capsys.readouterr().err
    assert main(["solve", mat("h", np.eye(2)), mat("k", np.eye(3))]) == 2
    assert main(["solve", mat("h", np.eye(3)), mat("k", np.eye(3) * 2), "--all", "--cap", "2"]) == 4


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1 2 3\n4 5 6\n")
    assert main(["solve", str(p), str(p)]) == 2
    assert "MalformedInput(h)" in capsys.readouterr().err


def test_alpha(mat, tmp_path):
    code, rep = run_json(["alpha", mat("a", [[2, 1], [1, 2]]), mat("u", [[0, 1], [1, 0]])], tmp_path)
    assert code == 0 and rep["pi_residual"] <= 1e-12 and rep["a_unitary_residual"] <= 1e-12


def test_project(mat, tmp_path):
    code, rep = run_json(["project", mat("a", np.diag([1, 2])), mat("m", [[1], [1]])], tmp_path)
    assert code == 0
    np.testing.assert_allclose(read_pairs(rep["q"], 2), np.array([[1, 2], [1, 2]]) / 3, atol=1e-15)


def test_classify(mat, tmp_path, capsys):
    code, rep = run_json(["classify", mat("x", [[1, 1], [0, 1]])], tmp_path)
    assert code == 0 and not rep["diagonalizable"]
    assert "not in any weighted class union" in capsys.readouterr().out
    code, rep = run_json(["classify", mat("x", [[0, 2], [0.5, 0]]), "--weight", mat("a", np.diag([1, 4]))], tmp_path)
    assert rep["a_unitary"] and rep["a_hermitian"] and not rep["a_positive"]


def test_sample(tmp_path, capsys):
    p = tmp_path / "s.json"
    assert main(["sample", "unitary", "--dim", "3", "--seed", "4", "-o", str(p)]) == 0
    assert json.loads(p.read_text())["dim"] == 3
    assert main(["sample", "hermitian", "--dim", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["name"] == "hermitian"


def test_verify(tmp_path, capsys):
    code, rep = run_json(["verify", "pt", "--trials", "5", "--dims", "2,3"], tmp_path)
    assert code == 0
    assert rep["suite"] == "pt" and rep["passes"] == 5 and rep["failures"] == []
    assert set(rep["timestamp"]) == {"started", "elapsed_s"}


def test_verify_usage(capsys):
    assert main(["verify", "nosuch"]) == 2
    assert main(["verify", "pt", "--dims", "x"]) == 2
    assert main(["verify", "pt", "--trials", "0"]) == 2


def test_env_tolerance(monkeypatch, mat, tmp_path):
    monkeypatch.setenv("WPOLAR_TOL", "1e-6")
    code, rep = run_json(["solve", mat("h", np.eye(2)), mat("k", np.eye(2))], tmp_path)
    assert rep["tol"] == 1e-6
    monkeypatch.setenv("WPOLAR_TOL", "abc")
    assert main(["solve", mat("h", np.eye(2)), mat("k", np.eye(2))]) == 2


def test_argparse_usage():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
