from fractions import Fraction

import numpy as np
import pytest

from grasspenta import linalg
from grasspenta.core import extract_invariants, random_chain, random_regular_lift
from grasspenta.errors import DegenerateDiagonals, SingularMatrix
from grasspenta.oracle import (
    classical_pentagram_rp2,
    cramer_map_unnormalized,
    cramer_solve,
    exact_det,
    exact_rank,
    normalize_point,
    projective_distance,
)
from grasspenta.pentamap import intersect, map_algebraic_unnormalized, map_geometric, subspace_bases
from grasspenta.verify import classical_reduction_dev, odd_dimension_ok


def _pentagon():
    w = np.exp(2j * np.pi * np.arange(5) / 5)
    return [(z.real, z.imag, 1.0) for z in w]


def test_regular_pentagon_maps_to_regular_pentagon():
    image = [normalize_point(p) for p in classical_pentagram_rp2(_pentagon())]
    z = np.array([complex(p[0], p[1]) for p in image])
    assert np.allclose(np.abs(z), np.abs(z[0]))
    ratios = z[1:] / z[:-1]
    assert np.allclose(ratios, ratios[0])
    # inverted and shrunk by cos(2pi/5)/cos(pi/5)
    assert abs(z[0]) == pytest.approx(np.cos(2 * np.pi / 5) / np.cos(np.pi / 5))


def test_classical_agrees_with_intersect():
    for seed in range(5):
        assert classical_reduction_dev(random_regular_lift(1, 3, 5, seed=seed)) < 1e-9


def test_collinear_diagonals_degenerate():
    pts = [(0, 0, 1), (1, 0, 1), (1, 0, 0), (3, 0, 1), (0, 1, 1)]
    with pytest.raises(DegenerateDiagonals):
        classical_pentagram_rp2(pts)


def test_too_few_points():
    with pytest.raises(DegenerateDiagonals):
        classical_pentagram_rp2(_pentagon()[:4])


def test_projective_distance():
    assert projective_distance([1, 2, 3], [-2, -4, -6]) < 1e-15
    assert projective_distance([1, 0, 0], [0, 1, 0]) > 1


def test_cramer_identity():
    b = [Fraction(3, 7), Fraction(-1), Fraction(2, 5)]
    assert list(cramer_solve(np.eye(3, dtype=int), b)) == b


def test_cramer_hand_example():
    assert list(cramer_solve([[1, 2], [3, 4]], [1, 1])) == [-1, 1]


def test_cramer_singular():
    with pytest.raises(SingularMatrix):
        cramer_solve([[1, 2], [2, 4]], [1, 1])


def test_cramer_matches_float():
    rng = np.random.default_rng(0)
    for _ in range(5):
        A = rng.integers(-9, 10, size=(4, 4))
        if exact_det(A) == 0:
            continue
        b = rng.integers(-9, 10, size=4)
        x = cramer_solve(A, b).astype(float)
        assert np.max(np.abs(x - np.linalg.solve(A, b))) < 1e-12 * max(1, np.max(np.abs(x)))


def test_exact_det_both_regimes():
    rng = np.random.default_rng(1)
    for n in (1, 3, 6, 7, 9):
        A = rng.integers(-5, 6, size=(n, n))
        assert float(exact_det(A)) == pytest.approx(np.linalg.det(A), rel=1e-9, abs=1e-6)
    assert exact_det(np.zeros((0, 0))) == 1
    assert exact_det([[1, 2, 3], [2, 4, 6], [1, 1, 1]]) == 0
    assert exact_det(np.ones((8, 8), dtype=int)) == 0


def test_exact_rank():
    assert exact_rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2
    assert exact_rank(np.zeros((2, 3), dtype=int)) == 0
    assert exact_rank(np.eye(4, dtype=int)) == 4


def test_exact_rank_certifies_intersect_rank_decisions():
    for seed in range(4):
        lift = random_regular_lift(1, 3, 5, seed=seed, field="rational")
        for k in range(5):
            P, O = subspace_bases(lift, k)
            assert exact_rank(P) == P.shape[1] and exact_rank(O) == O.shape[1]
            assert exact_rank(np.hstack([P, intersect(lift, k)])) == P.shape[1]


def test_odd_dimension_law_exact():
    assert odd_dimension_ok(random_regular_lift(2, 3, 5, seed=1, field="rational"))


def test_cramer_map_matches_float_path():
    for m, N in [(3, 4), (3, 5), (4, 5), (3, 2), (4, 3)]:
        chain = random_chain(1, m, N, seed=m * N, field="rational")
        exact = cramer_map_unnormalized(chain)
        assert np.array_equal(exact.a, map_algebraic_unnormalized(chain).a)
        assert linalg.rel_dev(map_algebraic_unnormalized(chain.as_complex()).a, linalg.as_complex(exact.a)) < 1e-10


def test_geometric_image_of_rational_lift_is_exact():
    lift = random_regular_lift(1, 3, 5, seed=3, field="rational")
    image = map_geometric(lift)
    assert image.exact
    inv = extract_invariants(image)
    assert inv.exact
