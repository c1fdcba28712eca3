import json

import numpy as np
import pytest

from grasspenta import io, linalg
from grasspenta.cli import main
from grasspenta.core import extract_invariants, random_chain, random_regular_lift
from grasspenta.lax import spectral_curve


def test_scalar_encoding():
    from fractions import Fraction

    assert io.encode_scalar(Fraction(-3, 4)) == "-3/4"
    assert io.encode_scalar(1 + 2j) == [1.0, 2.0]
    assert io.decode_scalar("5/7") == Fraction(5, 7)
    assert io.decode_scalar([0.5, -1]) == 0.5 - 1j


def test_float_format_is_17_digits():
    assert io.dumps(0.1) == "0.10000000000000001"
    assert io.dumps(2.0) == "2.0"
    assert io.dumps(1e-20) == "9.9999999999999995e-21"


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        io.dumps(float("nan"))


@pytest.mark.parametrize("field", ["complex", "rational"])
def test_lift_round_trip(field):
    lift = random_regular_lift(2, 3, 5, seed=3, field=field)
    back = io.lift_from_dict(json.loads(io.dumps(io.lift_to_dict(lift))))
    assert np.array_equal(back.X, lift.X) and np.array_equal(back.M, lift.M)
    assert back.field == field


@pytest.mark.parametrize("field", ["complex", "rational"])
def test_chain_round_trip(field):
    chain = random_chain(2, 4, 5, seed=4, field=field)
    back = io.chain_from_dict(json.loads(io.dumps(io.chain_to_dict(chain))))
    assert np.array_equal(back.a, chain.a)


def test_chain_layout_row_major():
    chain = random_chain(2, 3, 4, seed=5)
    d = io.chain_to_dict(chain)
    assert len(d["a"]) == 4 and len(d["a"][0]) == 3
    assert d["a"][1][2][0][1] == [chain.a[1, 2, 0, 1].real, chain.a[1, 2, 0, 1].imag]


def test_spectral_report_shape():
    chain = random_chain(1, 3, 4, seed=6)
    curve = spectral_curve(chain)
    rep = io.spectral_report([0.5, 2], [np.ones(4), np.ones(4)], curve)
    assert set(rep) == {"mus", "eta_polys", "curve"}
    assert isinstance(rep["curve"]["nu_offset"], int)
    json.loads(io.dumps(rep))


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_gen(tmp_path, capsys):
    path = tmp_path / "poly.json"
    code, _, _ = _run(["gen", "-n", "1", "-m", "3", "-N", "5", "--seed", "42", "-o", str(path)], capsys)
    assert code == 0
    _, lift = io.load(path)
    assert lift.N == 5 and lift.X.shape == (5, 3, 1)


def test_cli_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert _run(["gen", "-n", "2", "-m", "3", "-N", "5", "--seed", "7", "-o", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "-n", "1", "-m", "3", "-N", "6"],
        ["gen", "-m", "2"],
        ["frobnicate"],
        ["map"],
        ["spectral", "-i", "x.json", "--mus", "1,0"],
    ],
)
def test_cli_usage_errors(argv, capsys):
    assert _run(argv, capsys)[0] == 2


def test_cli_domain_error_json(tmp_path, capsys):
    # a chain whose N_k vanish: the map fails with a domain error
    chain = {"n": 1, "m": 4, "N": 5, "field": "rational", "a": [[[["1/1"]], [["0/1"]], [["2/1"]], [["0/1"]]]] * 5}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(chain))
    code, _, err = _run(["map", "-i", str(path)], capsys)
    assert code == 1
    assert json.loads(err)["error"] == "SingularN"


def test_cli_missing_file(capsys):
    code, _, err = _run(["invariants", "-i", "/nonexistent/poly.json"], capsys)
    assert code == 1 and "error" in json.loads(err)


def test_cli_pipeline(tmp_path, capsys):
    poly = tmp_path / "poly.json"
    _run(["gen", "-n", "2", "-m", "3", "-N", "5", "--seed", "1", "-o", str(poly)], capsys)

    code, out, _ = _run(["invariants", "-i", str(poly)], capsys)
    assert code == 0
    chain = io.chain_from_dict(json.loads(out))
    _, lift = io.load(poly)
    assert linalg.rel_dev(chain.a, extract_invariants(lift).a) < 1e-15

    normal = tmp_path / "normal.json"
    assert _run(["normalize", "-i", str(poly), "-o", str(normal)], capsys)[0] == 0
    gauge = json.loads((tmp_path / "normal.gauge.json").read_text())
    assert set(gauge) == {"delta", "d", "q", "lambda"}

    code, out, _ = _run(["spectral", "-i", str(poly), "--mus", "0.5,2,1j"], capsys)
    rep = json.loads(out)
    assert code == 0 and len(rep["eta_polys"]) == 3 and len(rep["eta_polys"][0]) == 7
    assert rep["curve"]["holdout_residual"] < 1e-8

    code, out, _ = _run(["scaling-check", "-i", str(poly)], capsys)
    assert code == 0 and all(r["passed"] for r in json.loads(out))


def test_cli_map_iterations(tmp_path, capsys):
    poly = tmp_path / "poly.json"
    _run(["gen", "-n", "1", "-m", "3", "-N", "5", "--seed", "42", "-o", str(poly)], capsys)
    out_dir = tmp_path / "out"
    code, out, _ = _run(["map", "-i", str(poly), "--iters", "3", "-o", str(out_dir)], capsys)
    assert code == 0
    assert sorted(p.name for p in out_dir.iterdir()) == [
        "chain_001.json",
        "chain_002.json",
        "chain_003.json",
        "spectral_drift.csv",
    ]
    header, data = io.read_drift_csv(out_dir / "spectral_drift.csv")
    assert header[0] == "iteration" and data.shape[0] == 4
    cols = data[:, 1:]
    assert np.max(np.abs(cols - cols[0])) <= 1e-6 * np.max(np.abs(cols[0]))


def test_cli_tolerance_flag(tmp_path, capsys):
    poly = tmp_path / "poly.json"
    _run(["gen", "-n", "1", "-m", "3", "-N", "5", "-o", str(poly)], capsys)
    # an absurd tolerance declares every frame singular
    code, _, err = _run(["invariants", "-i", str(poly), "--tol", "0.9999"], capsys)
    assert code == 1 and json.loads(err)["error"] == "NotRegular"


def test_cli_env_tolerance(tmp_path, capsys, monkeypatch):
    poly = tmp_path / "poly.json"
    _run(["gen", "-n", "1", "-m", "3", "-N", "5", "-o", str(poly)], capsys)
    monkeypatch.setenv("GRASSPENTA_TOL", "0.9999")
    assert _run(["invariants", "-i", str(poly)], capsys)[0] == 1


def test_cli_verify_and_oracle(capsys):
    code, out, _ = _run(["verify", "-n", "1", "-m", "3", "-N", "5", "--iters", "1"], capsys)
    assert code == 0 and all(r["passed"] for r in json.loads(out))
    code, out, _ = _run(["oracle-compare", "-n", "1", "-m", "3", "-N", "5", "--seed", "2"], capsys)
    assert code == 0 and json.loads(out)["passed"]


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "grasspenta", "gen", "-N", "4"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["N"] == 4
