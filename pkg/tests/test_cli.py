import json
import subprocess
import sys

import numpy as np

from symplectic_factor import jsonio
from symplectic_factor.cli import main
from symplectic_factor.core import SymplecticMatrix, multiply_word, random_word
from symplectic_factor.elimination import factor_near_identity
from symplectic_factor.homotopy import SampledFamily
from symplectic_factor.rings import ComplexApprox, Rationals


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def write(path, obj):
    path.write_text(jsonio.dumps(obj))
    return str(path)


def test_random_factor_reconstruct_round_trip(tmp_path, capsys):
    src = tmp_path / "m.json"
    assert main(["random", "--ring", "F7", "--n", "3", "--length", "20", "--seed", "4",
                 "--matrix", "--output", str(src)]) == 0
    code, report = run(capsys, "verify", "--input", str(src))
    assert code == 0 and report["symplectic"]
    word = tmp_path / "w.json"
    assert main(["factor", "--input", str(src), "--output", str(word)]) == 0
    out = json.loads(word.read_text())
    assert out["algorithm"] == "bsr1" and out["residual"] == 0.0 and out["elementary_only"]
    back = tmp_path / "r.json"
    assert main(["reconstruct", "--input", str(word), "--output", str(back)]) == 0
    assert back.read_text() == src.read_text()


def test_verify_flags_non_symplectic(tmp_path, capsys):
    M = SymplecticMatrix.from_rows(Rationals(), [[2, 0], [0, 2]])
    code, report = run(capsys, "verify", "--input", write(tmp_path / "m.json", jsonio.matrix_to_json(M)))
    assert code == 2 and not report["symplectic"]
    assert report["residuals"]["AtD-CtB-I"] == 3.0


def test_near_identity_with_trace(tmp_path, capsys):
    ctx = ComplexApprox()
    M = multiply_word(random_word(2, 6, ctx, seed=1, radius=0.01), 2, ctx)
    path = write(tmp_path / "m.json", jsonio.matrix_to_json(M))
    code, out = run(capsys, "factor", "--algorithm", "near-identity", "--emit-trace", "--input", path)
    assert code == 0 and out["residual"] <= 1e-9
    # the trace logs row operations, so K steps appear unexpanded
    assert len(out["trace"]) == len(factor_near_identity(M, elementary=False))
    assert {"step", "factor", "max_residual"} <= set(out["trace"][0])


def test_outside_neighborhood_is_contract_violation(tmp_path, capsys):
    ctx = ComplexApprox()
    M = multiply_word(random_word(2, 6, ctx, seed=1, radius=1.0), 2, ctx)
    path = write(tmp_path / "m.json", jsonio.matrix_to_json(M))
    code, out = run(capsys, "factor", "--algorithm", "near-identity", "--input", path)
    assert code == 2 and out["error"]["kind"] == "OutsideNeighborhood"


def test_complex_pipeline(tmp_path, capsys):
    ctx = ComplexApprox()
    M = multiply_word(random_word(2, 10, ctx, seed=2, kinds=("E", "F", "K")), 2, ctx)
    path = write(tmp_path / "m.json", jsonio.matrix_to_json(M))
    code, out = run(capsys, "factor", "--algorithm", "complex-pipeline", "--samples", "65", "--input", path)
    assert code == 0 and out["residual"] <= 1e-9


def test_complex_pipeline_rejects_exact_ring(tmp_path, capsys):
    ctx = Rationals()
    path = write(tmp_path / "m.json", jsonio.matrix_to_json(SymplecticMatrix.identity(1, ctx)))
    code, out = run(capsys, "factor", "--algorithm", "complex-pipeline", "--input", path)
    assert code == 1 and out["error"]["kind"] == "UsageError"


def test_family(tmp_path, capsys):
    def H(t, x):
        out = np.zeros((2, 2, len(x)), dtype=complex)
        out[0, 0] = out[1, 1] = 1
        out[0, 1] = t * np.sin(np.pi * x)
        return out

    fam = SampledFamily.from_callable(H, 1, 33, 9)
    path = write(tmp_path / "f.json", jsonio.family_to_json(fam))
    code, out = run(capsys, "factor", "--algorithm", "family", "--input", path)
    assert code == 0 and out["residual"] <= 1e-9
    assert len(out["parameters_per_x"]) == 9
    assert out["continuity"]["C"] < float("inf")


def test_tolerance_breach_exits_two(tmp_path, capsys):
    ctx = ComplexApprox()
    M = multiply_word(random_word(2, 10, ctx, seed=3, kinds=("E", "F", "K")), 2, ctx)
    path = write(tmp_path / "m.json", jsonio.matrix_to_json(M))
    code, out = run(capsys, "factor", "--input", path, "--tol", "0")
    assert code == 2 and out["residual"] > 0


def test_expand_k(capsys):
    code, out = run(capsys, "expand-k", "--ring", "Q", "--i", "1", "--j", "1", "--a", "2")
    assert code == 0 and out["n"] == 1
    assert [(f["kind"], f["a"]) for f in out["factors"]] == [
        ("E", "1/1"), ("F", "1/1"), ("E", "-1/2"), ("F", "-2/1")]


def test_split(tmp_path, capsys):
    ctx = ComplexApprox()
    ts = np.linspace(0, 1, 33)
    mats = [SymplecticMatrix.from_rows(ctx, [[1, t], [0, 1]]) for t in ts]
    obj = {"t": list(ts), "matrices": [jsonio.matrix_to_json(M) for M in mats]}
    code, out = run(capsys, "split", "--input", write(tmp_path / "p.json", obj), "--radius", "0.1")
    assert code == 0 and out["k"] == 16 == len(out["quotients"])


def test_missing_input_file(capsys):
    code, out = run(capsys, "verify", "--input", "/nonexistent/m.json")
    assert code == 1 and out["error"]["kind"] == "FileNotFoundError"


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run(capsys, "verify", "--input", str(bad))
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symplectic_factor", "expand-k", "--ring", "F7", "--i", "1", "--j", "2", "--a", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["factors"]) == 5
