"""JSON and CSV formats for chains, lifts, gauges and spectral reports.

Complex entries are written as ``[re, im]`` with 17 significant digits,
rationals as ``"p/q"`` strings, and matrices row-major as nested lists.
Output is byte-for-byte reproducible for equal inputs.
"""

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import COMPLEX, RATIONAL, InvariantChain, TwistedLift, check_dims


def _fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    return s if any(ch in s for ch in ".en") else s + ".0"


def encode_scalar(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return f"{int(x)}/1"
    z = complex(x)
    return [z.real, z.imag]


def encode_matrix(A):
    A = np.asarray(A)
    if A.ndim == 0:
        return encode_scalar(A.item())
    if A.ndim == 1:
        return [encode_scalar(x) for x in A]
    return [encode_matrix(row) for row in A]


def decode_scalar(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, list):
        re, im = v
        return complex(float(re), float(im))
    return complex(v)


def decode_array(v, exact):
    """Nested lists of encoded scalars to an object (exact) or complex array."""

    def walk(x):
        if isinstance(x, list) and not (len(x) == 2 and all(isinstance(t, (int, float)) for t in x)):
            return [walk(t) for t in x]
        return decode_scalar(x)

    data = walk(v)
    if exact:
        return np.array(data, dtype=object)
    return np.array(data, dtype=complex)


def dumps(obj):
    """json.dumps with floats rendered at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag])
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj, path):
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def chain_to_dict(chain):
    return {"n": chain.n, "m": chain.m, "N": chain.N, "field": chain.field, "a": encode_matrix(chain.a)}


def chain_from_dict(d):
    n, m, N = int(d["n"]), int(d["m"]), int(d["N"])
    check_dims(n, m, N)
    field = d.get("field", COMPLEX)
    a = decode_array(d["a"], field == RATIONAL)
    return InvariantChain(n, m, N, a.reshape(N, m, n, n), field)


def lift_to_dict(lift):
    return {
        "n": lift.n,
        "m": lift.m,
        "N": lift.N,
        "field": lift.field,
        "X": encode_matrix(lift.X),
        "M": encode_matrix(lift.M),
    }


def lift_from_dict(d):
    n, m, N = int(d["n"]), int(d["m"]), int(d["N"])
    check_dims(n, m, N)
    field = d.get("field", COMPLEX)
    exact = field == RATIONAL
    X = decode_array(d["X"], exact).reshape(N, m * n, n)
    M = decode_array(d["M"], exact).reshape(m * n, m * n)
    return TwistedLift(n, m, N, X, M, field)


def load(path):
    """Read a chain or lift file; returns ``("chain" | "lift", object)``."""
    d = read_json(path)
    if "a" in d:
        return "chain", chain_from_dict(d)
    if "X" in d:
        return "lift", lift_from_dict(d)
    raise ValueError(f"{path}: neither a chain nor a lift file")


def spectral_report(mus, polys, curve=None):
    out = {"mus": [encode_scalar(complex(mu)) for mu in mus], "eta_polys": [encode_matrix(p) for p in polys]}
    if curve is not None:
        out["curve"] = curve.to_dict()
    return out


def drift_header(length):
    return ["iteration"] + [f"mu{t}_eta{i}_{part}" for t in range(length[0]) for i in range(length[1]) for part in ("re", "im")]


def write_drift_csv(path, rows):
    """rows: list of (iteration, list of eta-coefficient vectors, one per mu)."""
    rows = list(rows)
    shape = (len(rows[0][1]), len(rows[0][1][0]))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(drift_header(shape))
        for it, polys in rows:
            vals = []
            for p in polys:
                for c in p:
                    vals.extend([_fmt_float(complex(c).real), _fmt_float(complex(c).imag)])
            w.writerow([it] + vals)


def read_drift_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(x) for x in row] for row in r])
    return header, data
