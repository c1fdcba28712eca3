"""The Grassmannian pentagram map, geometrically and in moduli coordinates.

Even m = 2s: the image vertex k spans Pi_k ∩ Omega_k with
Pi_k = <X_k, X_{k+2}, ..., X_{k+2s}> and Omega_k = <X_{k+1}, ..., X_{k+2s-1}>.
Odd m = 2s + 1: the image vertex k spans Pi_k ∩ Pi_{k+1}.

In moduli coordinates the unnormalized image T(V_k) = rho_k rbar_k has
invariants c solving N_k c_k = F_{k+m}; normalizing that image lift gives
the map on the moduli space.  The two routes are independent and are used
to check each other.
"""

import numpy as np

from . import linalg
from .core import TwistedLift, build_Q, reconstruct_lift
from .errors import NonGenericIntersection, SingularN
from .normalize import TOL_SEP, normalize_chain


def half(m):
    return m // 2


def subspace_bases(lift, k):
    """The two spanning sets whose intersection is the image vertex k."""
    m = lift.m
    s = half(m)
    V = lift.vertex
    if m % 2 == 0:
        first = [V(k + 2 * j) for j in range(s + 1)]
        second = [V(k + 2 * j + 1) for j in range(s)]
    else:
        first = [V(k + 2 * j) for j in range(s + 1)]
        second = [V(k + 2 * j + 1) for j in range(s + 1)]
    return np.hstack(first), np.hstack(second)


def intersect(lift, k, tol=None):
    """Basis (mn x n) of the subspace intersection defining the image vertex k."""
    tol = linalg.get_tol(tol)
    n = lift.n
    P, O = subspace_bases(lift, k)
    if linalg.rank(P, tol) < P.shape[1] or linalg.rank(O, tol) < O.shape[1]:
        raise NonGenericIntersection(f"degenerate spanning set at vertex {k}", k=k)
    null = linalg.nullspace(np.hstack([P, O]), tol)
    if null.shape[1] != n:
        raise NonGenericIntersection(f"intersection at vertex {k} has dimension {null.shape[1]}, expected {n}", k=k)
    return P @ null[: P.shape[1]]


def map_geometric(lift, tol=None):
    """Image polygon from subspace intersections; the monodromy object is shared."""
    X = np.stack([intersect(lift, k, tol) for k in range(lift.N)])
    return TwistedLift(lift.n, lift.m, lift.N, X, lift.M, lift.field)


def rbar(chain, k):
    """Blocks a_k^i with i ≡ m-1 (mod 2), zeros elsewhere (the image direction)."""
    n, m = chain.n, chain.m
    col = linalg.zeros((m * n, n), chain.exact)
    for i in range(m - 1, -1, -2):
        col[i * n : (i + 1) * n] = chain.block(k, i)
    return col


def pbar(chain, k):
    """The complementary blocks, so that rbar + pbar is the last column of Q_k."""
    n, m = chain.n, chain.m
    col = linalg.zeros((m * n, n), chain.exact)
    for i in range(m - 2, -1, -2):
        col[i * n : (i + 1) * n] = chain.block(k, i)
    return col


def f_columns(chain, k, count):
    """F_{k+l} = Q_k ... Q_{k+l-1} rbar_{k+l} for l = 0 .. count-1."""
    R = linalg.eye(chain.m * chain.n, chain.exact)
    cols = []
    for ell in range(count):
        cols.append(R @ rbar(chain, k + ell))
        R = R @ build_Q(chain, k + ell)
    return cols


def build_N(chain, k):
    """N_k = (F_k, F_{k+1}, ..., F_{k+m-1})."""
    return np.hstack(f_columns(chain, k, chain.m))


def map_algebraic_unnormalized(chain, tol=None):
    """Invariants c of the lift rho_k rbar_k: the solution of N_k c_k = F_{k+m}.

    Exact chains are solved exactly; complex chains by LU.
    """
    tol = linalg.get_tol(tol)
    n, m = chain.n, chain.m
    blocks = []
    for k in range(chain.N):
        F = f_columns(chain, k, m + 1)
        Nk = np.hstack(F[:m])
        if linalg.is_singular(Nk, tol):
            raise SingularN(f"N_{k} is singular", k=k)
        blocks.append(linalg.solve(Nk, F[m]).reshape(m, n, n))
    return chain.replace(np.stack(blocks))


def image_lift(chain, tol=None):
    """The unnormalized image lift T(rho_k) = rho_k N_k with rho_0 = I."""
    chain = chain.as_complex() if chain.exact else chain
    c = map_algebraic_unnormalized(chain, tol)
    return reconstruct_lift(c, build_N(chain, 0), tol), c


def map_moduli(chain, tol=None, tol_sep=TOL_SEP):
    """Pentagram map on normalized invariants: returns (image chain, gauge).

    The image lift T(rho_k) = rho_k N_k (rho_0 = I) has invariants c and frame
    determinants det(rho_k) det(N_k); both are computed from the chain, and
    the lift is then normalized.
    """
    chain = chain.as_complex() if chain.exact else chain
    c = map_algebraic_unnormalized(chain, tol)
    frame_det = 1.0 + 0j
    Z = np.empty(chain.N, dtype=complex)
    for k in range(chain.N):
        Z[k] = 1.0 / (frame_det * linalg.det(build_N(chain, k)))
        frame_det *= linalg.det(build_Q(chain, k))
    return normalize_chain(c, Z, tol, tol_sep)


def structural_coefficients(lift, image, k):
    """Coefficients of image vertex k in the spanning set that contains it.

    Even m: T(V_k) = V_k c^0 + V_{k+2} c^2 + ... + V_{k+2s} c^{2s}.
    Odd m:  T(V_k) = V_{k+1} c^1 + V_{k+3} c^3 + ... + V_{k+2s+1} c^{2s+1}.
    Returns a dict {index: c block}.
    """
    m, n = lift.m, lift.n
    s = half(m)
    if m % 2 == 0:
        idx = [2 * j for j in range(s + 1)]
    else:
        idx = [2 * j + 1 for j in range(s + 1)]
    P = np.hstack([lift.vertex(k + i) for i in idx])
    coef, *_ = np.linalg.lstsq(linalg.as_complex(P), linalg.as_complex(image.vertex(k)), rcond=None)
    return {i: coef[j * n : (j + 1) * n] for j, i in enumerate(idx)}


def structural_residual(lift, chain, image, k):
    """Relative residual of the vanishing relations implied by the image lying in both subspaces.

    Even m: c^{2r} + a^{2r} c^{2s} = 0.  Odd m: c^{2l+1} + a^{2l+1} c^{2s+1} = 0.
    ``chain`` must be the invariants of ``lift``.
    """
    m = lift.m
    c = structural_coefficients(lift, image, k)
    top = c[m]
    a = chain.as_complex() if chain.exact else chain
    scale = max(np.max(np.abs(v)) for v in c.values())
    worst = 0.0
    for i, block in c.items():
        if i == m:
            continue
        worst = max(worst, float(np.max(np.abs(block + a.block(k, i) @ top))) / scale)
    return worst
