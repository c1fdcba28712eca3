"""Property suite run by ``grasspenta verify`` on random instances of one size."""

from math import pi

import numpy as np

from . import linalg
from .core import check_dims, extract_invariants, monodromy, random_regular_lift
from .lax import (
    CheckReport,
    anchor_check,
    decompose_columns,
    degree_check_unnormalized,
    lambda_degree_check,
    observable_dev,
    observables,
    scaling_commutation_check,
    spectral_samples,
)
from .normalize import normalization_report, normalize_lift
from .oracle import classical_pentagram_rp2, exact_rank, projective_distance
from .pentamap import map_geometric, map_moduli, subspace_bases

UNIT_MUS = tuple(np.exp(2j * pi * (t + 0.25) / 10) for t in range(10))


def classical_reduction_dev(lift):
    """Largest projective disagreement between intersect and the RP^2 oracle (n=1, m=3)."""
    image = map_geometric(lift)
    # N + 3 consecutive vertices, so no diagonal wraps around the period
    pts = [linalg.as_complex(lift.vertex(k)[:, 0]) for k in range(lift.N + 3)]
    ref = classical_pentagram_rp2(pts)
    return max(projective_distance(image.X[k][:, 0], ref[k]) for k in range(lift.N))


def odd_dimension_ok(lift):
    """Exact check that dim(Pi_k ∩ Pi_{k+1}) = n for every k (rational lifts, odd m)."""
    n = lift.n
    for k in range(lift.N):
        P, O = subspace_bases(lift, k)
        both = np.hstack([P, O])
        dim = exact_rank(P) + exact_rank(O) - exact_rank(both)
        if dim != n:
            return False
    return True


def run_suite(n, m, N, seed=0, cases=3, tol=None):
    """Return a list of :class:`CheckReport` covering the main properties."""
    check_dims(n, m, N)
    reports = []

    def add(name, dev, limit, **details):
        reports.append(CheckReport(name, float(dev), limit, details))

    for case in range(cases):
        s = seed + case
        lift = random_regular_lift(n, m, N, seed=s, tol=tol)
        chain = extract_invariants(lift, tol)
        V, normal, _ = normalize_lift(lift, tol)
        rep = normalization_report(V, normal)
        add("normalization", max(rep["frame_det"], rep["a0_offdiag"], rep["a0_det_signed"]), 1e-9, seed=s)
        add("syzygy", rep["syzygy"], 1e-8, seed=s)

        image, _ = map_moduli(chain, tol)
        _, image_geo, _ = normalize_lift(map_geometric(lift, tol), tol)
        add("two_path", observable_dev(observables(image), observables(image_geo)), 1e-7, seed=s)
        cp0 = linalg.char_poly(monodromy(chain))
        add("monodromy_conservation", linalg.rel_dev(linalg.char_poly(monodromy(image)), cp0), 1e-7, seed=s)
        before = spectral_samples(chain, UNIT_MUS)
        after = spectral_samples(image, UNIT_MUS)
        add("spectral_conservation", max(linalg.rel_dev(a, b) for a, b in zip(after, before)), 1e-6, seed=s)
        add("decomposition", max(decompose_columns(chain, k).residual for k in range(N)), 1e-10, seed=s)

        for mu in (0.5, 2.0, np.exp(1j * pi / 7)):
            reports.append(degree_check_unnormalized(chain, mu))
        for mu in (0.5, 2.0):
            reports.append(lambda_degree_check(chain, mu))
            reports.append(scaling_commutation_check(chain, mu))
            reports.append(anchor_check(chain, mu))

        if n == 1 and m == 3 and N >= 5:
            add("classical_reduction", classical_reduction_dev(lift), 1e-9, seed=s)
        if m % 2:
            exact_lift = random_regular_lift(n, m, N, seed=s, field="rational")
            add("odd_dimension_exact", 0.0 if odd_dimension_ok(exact_lift) else 1.0, 0.0, seed=s)
    return reports
