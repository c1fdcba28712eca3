"""Gauge fixing of twisted lifts: the canonical lift V_k = X_k lambda_k.

The gauge lambda_k = d_k q_k is assembled in three steps:

1. determinants delta_k = det lambda_k from the cyclic product system
   delta_k ... delta_{k+m-1} = Z_k = det(rho_k)^{-1}  (needs gcd(N, m) = 1);
2. d_k conjugates the m-product B_k of the raw a^0 blocks to a diagonal
   matrix with a fixed eigenvalue order, so every new a_k^0 is diagonal;
3. the diagonal residual q_k equalises the (i, i+1) entries of the cyclic
   a^{m-1} products with their (2, 1) entry and fixes det q_k.

All fractional powers use principal branches, so two normalizations of the
same polygon may differ by a diagonal root-of-unity gauge.  Compare results
through class functions (monodromy spectra, m-product spectra).
"""

from dataclasses import dataclass
from functools import cmp_to_key, reduce
from math import gcd

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import linalg
from .core import InvariantChain, TwistedLift, extract_invariants, gauge_transform
from .errors import DegenerateSyzygy, NonGenericGauge, NotCoprime, ZeroInput

TOL_SEP = 1e-6


@dataclass(frozen=True)
class JordanGauge:
    B: np.ndarray  # (N, n, n) m-products of the a^0 blocks
    J: np.ndarray  # (n,) common eigenvalues, ordered
    d: np.ndarray  # (N, n, n) with d_r^{-1} B_r d_r = diag(J)


@dataclass(frozen=True)
class GaugeData:
    Z: np.ndarray
    delta: np.ndarray
    d: np.ndarray
    q: np.ndarray
    lam: np.ndarray

    def to_dict(self):
        from .io import encode_matrix, encode_scalar

        return {
            "delta": [encode_scalar(x) for x in self.delta],
            "d": [encode_matrix(x) for x in self.d],
            "q": [encode_matrix(x) for x in self.q],
            "lambda": [encode_matrix(x) for x in self.lam],
        }


def _require_coprime(N, m):
    if gcd(N, m) != 1:
        raise NotCoprime(f"gcd(N={N}, m={m}) = {gcd(N, m)}", N=N, m=m)


def solve_delta(Z, m):
    """Solve prod_{i=k}^{k+m-1} delta_i = Z_k (indices mod N) in the log domain.

    The circulant exponent system is invertible exactly when gcd(N, m) = 1.
    For positive real Z the result is the unique positive solution.
    """
    Z = np.asarray(Z, dtype=complex)
    N = len(Z)
    _require_coprime(N, m)
    if np.any(Z == 0):
        raise ZeroInput("Z has a zero entry")
    C = np.zeros((N, N))
    for k in range(N):
        for i in range(m):
            C[k, (k + i) % N] += 1.0
    return np.exp(np.linalg.solve(C, np.log(Z)))


def m_product_indices(N, m, r):
    _require_coprime(N, m)
    return [(r + j * m) % N for j in range(N)]


def m_product(seq, r, m):
    """Ordered product seq_r seq_{r+m} seq_{r+2m} ... over all N indices (mod N)."""
    idx = m_product_indices(len(seq), m, r)
    factors = [seq[i] for i in idx]
    if np.ndim(factors[0]) == 0:
        return reduce(lambda x, y: x * y, factors)
    return reduce(np.matmul, factors)


def _lex_order(w, tol):
    """Sort by (Re, Im) treating real parts within ``tol`` as ties."""

    def cmp(x, y):
        if abs(x.real - y.real) > tol:
            return -1 if x.real < y.real else 1
        if x.imag == y.imag:
            return 0
        return -1 if x.imag < y.imag else 1

    return np.array(sorted(w, key=cmp_to_key(cmp)), dtype=complex)


def _normalize_columns(V):
    """Unit columns whose largest-modulus entry is real and positive."""
    V = V / np.linalg.norm(V, axis=0)
    for j in range(V.shape[1]):
        i = np.argmax(np.abs(V[:, j]))
        V[:, j] *= abs(V[i, j]) / V[i, j]
    return V


def jordan_gauge(chain, tol_sep=TOL_SEP):
    """Diagonalise every m-product B_r of the a^0 blocks with one eigenvalue order."""
    chain = chain.as_complex() if chain.exact else chain
    N, m, n = chain.N, chain.m, chain.n
    a0 = chain.a[:, 0]
    B = np.stack([m_product(a0, r, m) for r in range(N)])
    scale = np.linalg.norm(B[0], 2)
    sep = tol_sep * scale
    J = _lex_order(np.linalg.eigvals(B[0]), sep)
    if n > 1:
        gaps = np.abs(J[:, None] - J[None, :])[~np.eye(n, dtype=bool)]
        if gaps.min() < sep:
            raise NonGenericGauge(
                f"eigenvalue separation {gaps.min():.3e} below {sep:.3e}; repeated-eigenvalue gauge not implemented"
            )
    d = np.empty((N, n, n), dtype=complex)
    for r in range(N):
        w, V = np.linalg.eig(B[r])
        rows, cols = linear_sum_assignment(np.abs(w[:, None] - J[None, :]))
        if n > 1 and np.max(np.abs(w[rows] - J[cols])) > sep / 2:
            raise NonGenericGauge(f"spectrum of B_{r} does not match B_0 within {sep / 2:.3e}")
        order = rows[np.argsort(cols)]
        d[r] = _normalize_columns(V[:, order])
    return JordanGauge(B, J, d)


def cyclic_last_products(chain):
    """b^k = a_{k-m+1}^{m-1} a_{k-m+2}^{m-1} ... a_{k-m+N}^{m-1} for every k."""
    N, m = chain.N, chain.m
    last = chain.a[:, m - 1]
    return np.stack([reduce(np.matmul, [last[(k - m + 1 + j) % N] for j in range(N)]) for k in range(N)])


def syzygy_gauge(chain, jordan, delta, tol=None):
    """Diagonal q_k equalising the superdiagonal of the cyclic products with their (2,1) entry.

    (q^2/q^1)^2 = b_21 / b_12 is solved with the principal square root, the
    remaining ratios follow from b_{i,i+1}, and q^1 is the principal n-th root
    fixed by det q_k = delta_k / det d_k.
    """
    tol = linalg.get_tol(tol)
    chain = chain.as_complex() if chain.exact else chain
    N, n = chain.N, chain.n
    d = jordan.d
    b = cyclic_last_products(gauge_transform(chain, d))
    delta = np.asarray(delta, dtype=complex)
    q = np.zeros((N, n, n), dtype=complex)
    for k in range(N):
        t = np.ones(n, dtype=complex)
        if n > 1:
            bk = b[k]
            scale = np.max(np.abs(bk))
            needed = [bk[1, 0], bk[0, 1]] + [bk[i, i + 1] for i in range(1, n - 1)]
            if min(abs(x) for x in needed) <= tol * scale:
                raise DegenerateSyzygy(f"vanishing entry in the cyclic product b^{k}", k=k)
            r1 = np.sqrt(bk[1, 0] / bk[0, 1])
            t[1] = r1
            for i in range(1, n - 1):
                t[i + 1] = t[i] * r1 * bk[0, 1] / bk[i, i + 1]
        q1 = (delta[k] / (np.linalg.det(d[k]) * np.prod(t))) ** (1.0 / n)
        q[k] = np.diag(q1 * t)
    lam = np.einsum("kij,kjl->kil", d, q)
    Z = np.array([np.prod([delta[(k + i) % N] for i in range(chain.m)]) for k in range(N)])
    return GaugeData(Z=Z, delta=delta, d=d, q=q, lam=lam)


def normalize_chain(chain, Z, tol=None, tol_sep=TOL_SEP):
    """Normalizing gauge and new invariants for a chain whose frames have dets 1/Z."""
    chain = chain.as_complex() if chain.exact else chain
    _require_coprime(chain.N, chain.m)
    delta = solve_delta(Z, chain.m)
    jordan = jordan_gauge(chain, tol_sep)
    gauge = syzygy_gauge(chain, jordan, delta, tol)
    gauge = GaugeData(Z=np.asarray(Z, dtype=complex), delta=gauge.delta, d=gauge.d, q=gauge.q, lam=gauge.lam)
    return gauge_transform(chain, gauge.lam), gauge


def normalize_lift(lift, tol=None, tol_sep=TOL_SEP):
    """Canonical lift of a regular twisted polygon.

    Returns ``(V, chain, gauge)`` with det(V_k, ..., V_{k+m-1}) = 1, every
    a_k^0 diagonal, and the syzygy relations on the cyclic a^{m-1} products.
    """
    lift = lift.as_complex() if lift.exact else lift
    _require_coprime(lift.N, lift.m)
    raw = extract_invariants(lift, tol)
    Z = np.array([1.0 / linalg.det(lift.frame(k)) for k in range(lift.N)])
    chain, gauge = normalize_chain(raw, Z, tol, tol_sep)
    V = lift.with_gauge(gauge.lam)
    return V, chain, gauge


def syzygy_residual(chain):
    """Largest relative mismatch between P_{i,i+1} and P_{2,1} over the cyclic products."""
    if chain.n == 1:
        return 0.0
    worst = 0.0
    for P in cyclic_last_products(chain.as_complex() if chain.exact else chain):
        ref = P[1, 0]
        for i in range(chain.n - 1):
            worst = max(worst, abs(P[i, i + 1] - ref) / max(abs(ref), abs(P[i, i + 1])))
    return worst


def normalization_report(V, chain):
    """Deviations of a normalized (lift, chain) pair from the canonical form."""
    sign = (-1) ** ((chain.m - 1) * chain.n)
    a0 = chain.as_complex().a[:, 0] if chain.exact else chain.a[:, 0]
    offdiag = max(float(np.max(np.abs(x - np.diag(np.diag(x))))) for x in a0)
    dets = np.array([np.linalg.det(x) for x in a0])
    return {
        "frame_det": max(abs(linalg.det(V.frame(k)) - 1) for k in range(V.N)),
        "a0_offdiag": offdiag,
        "a0_det": float(np.max(np.abs(dets - 1))),
        "a0_det_signed": float(np.max(np.abs(dets - sign))),
        "syzygy": syzygy_residual(chain),
    }


def is_identity_gauge(gauge, tol=None):
    tol = linalg.get_tol(tol)
    n = gauge.lam.shape[1]
    eye = np.eye(n)
    return bool(
        np.max(np.abs(gauge.delta - 1)) <= tol
        and all(np.max(np.abs(x - eye)) <= tol for x in gauge.d)
        and all(np.max(np.abs(x - eye)) <= tol for x in gauge.q)
    )
