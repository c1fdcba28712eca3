from fractions import Fraction

import numpy as np
import pytest

from conftest import lift_from_columns, scalar_chain
from grasspenta import linalg
from grasspenta.core import (
    InvariantChain,
    build_Q,
    extract_invariants,
    gauge_transform,
    is_regular,
    monodromy,
    random_chain,
    random_regular_lift,
    reconstruct_lift,
)
from grasspenta.errors import InvalidDims, NotRegular, SingularFrame
from grasspenta.oracle import exact_det

CYCLIC = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])


def test_random_lift_seed42_is_regular():
    lift = random_regular_lift(1, 3, 5, seed=42)
    ok, min_det = is_regular(lift)
    assert ok and min_det > 0
    assert lift.X.shape == (5, 3, 1)


def test_random_lift_deterministic():
    a = random_regular_lift(2, 3, 5, seed=9)
    b = random_regular_lift(2, 3, 5, seed=9)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.M, b.M)


@pytest.mark.parametrize("dims", [(1, 3, 3), (1, 3, 6), (2, 4, 6), (1, 2, 5)])
def test_invalid_dims(dims):
    with pytest.raises(InvalidDims):
        random_regular_lift(*dims, seed=0)


def test_rational_lift_exact_min_det():
    lift = random_regular_lift(2, 4, 7, seed=7, field="rational")
    dets = [exact_det(lift.frame(k)) for k in range(7)]
    assert all(d != 0 for d in dets)
    ok, min_det = is_regular(lift)
    assert ok
    assert min_det == pytest.approx(float(min(abs(d) for d in dets)), rel=1e-12)
    assert linalg.det(lift.M) == 1


def test_random_lift_monodromy_unimodular():
    lift = random_regular_lift(2, 3, 5, seed=1)
    assert abs(linalg.det(lift.M) - 1) < 1e-12


def test_is_regular_identity_frames():
    lift = lift_from_columns(np.eye(3), 3)
    assert is_regular(lift) == (True, 1.0)


def test_is_regular_repeated_vertex():
    lift = lift_from_columns([[1, 0, 0], [0, 1, 0], [1, 0, 0], [0, 0, 1]], 3)
    ok, _ = is_regular(lift)
    assert not ok
    with pytest.raises(NotRegular):
        extract_invariants(lift)


def test_extract_standard_basis():
    lift = lift_from_columns([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], 3)
    chain = extract_invariants(lift)
    assert np.allclose(chain.a[0].ravel(), [1, 1, 1])


def test_extract_constructed_coefficients():
    X0, X1, X2 = np.eye(3)
    lift = lift_from_columns([X0, X1, X2, X0 * 1 + X1 * 2 + X2 * 3], 3)
    assert np.allclose(extract_invariants(lift).a[0].ravel(), [1, 2, 3])


def test_build_Q_layout():
    chain = scalar_chain([[1, 2, 3]])
    assert np.array_equal(build_Q(chain, 0), [[0, 0, 1], [1, 0, 2], [0, 1, 3]])
    assert np.array_equal(build_Q(scalar_chain([[1, 0, 0]]), 0), CYCLIC)


def test_frame_recursion():
    lift = random_regular_lift(2, 4, 5, seed=3)
    chain = extract_invariants(lift)
    for k in range(8):
        assert linalg.rel_dev(lift.frame(k) @ build_Q(chain, k), lift.frame(k + 1)) < 1e-10


def test_monodromy_cyclic():
    chain = scalar_chain([[1, 0, 0]] * 4)
    assert np.array_equal(monodromy(chain), CYCLIC)
    assert np.allclose(linalg.char_poly(monodromy(chain)), [1, 0, 0, -1])


def test_monodromy_single_step():
    chain = random_chain(2, 3, 1, seed=4)
    assert np.array_equal(monodromy(chain), build_Q(chain, 0))


def test_monodromy_conjugate_to_M():
    lift = random_regular_lift(2, 3, 5, seed=11)
    chain = extract_invariants(lift)
    assert linalg.rel_dev(linalg.char_poly(monodromy(chain)), linalg.char_poly(lift.M)) < 1e-10


def test_reconstruct_cyclic():
    lift = reconstruct_lift(scalar_chain([[1, 0, 0]] * 4), np.eye(3))
    assert np.array_equal(lift.X[:, :, 0], [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_round_trip():
    lift = random_regular_lift(2, 3, 7, seed=5)
    again = reconstruct_lift(extract_invariants(lift), lift.frame(0))
    assert linalg.rel_dev(again.X, lift.X) < 1e-10
    assert linalg.rel_dev(again.M, lift.M) < 1e-10


def test_round_trip_exact():
    lift = random_regular_lift(1, 4, 5, seed=2, field="rational")
    again = reconstruct_lift(extract_invariants(lift), lift.frame(0))
    assert np.array_equal(again.X, lift.X) and np.array_equal(again.M, lift.M)


def test_singular_frame():
    with pytest.raises(SingularFrame):
        reconstruct_lift(random_chain(1, 3, 4, seed=0), np.zeros((3, 3)))


def test_gauge_transform_matches_lift_gauge():
    lift = random_regular_lift(2, 3, 5, seed=8)
    rng = np.random.default_rng(0)
    g = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
    direct = extract_invariants(lift.with_gauge(g))
    assert linalg.rel_dev(gauge_transform(extract_invariants(lift), g).a, direct.a) < 1e-9


def test_chain_is_immutable():
    chain = random_chain(1, 3, 4, seed=0)
    with pytest.raises(ValueError):
        chain.a[0, 0, 0, 0] = 5


def test_rational_chain_entries_are_fractions():
    chain = random_chain(1, 3, 4, seed=0, field="rational")
    assert isinstance(chain.a[0, 0, 0, 0], Fraction)
    assert InvariantChain(1, 3, 4, chain.a, "rational").exact
