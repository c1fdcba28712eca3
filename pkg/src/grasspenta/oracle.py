"""Deliberately naive reference implementations.

Nothing here calls the main numeric path: the classical pentagram map uses
cross products in homogeneous coordinates, and the exact routines use
cofactor expansion, Bareiss elimination and Cramer's rule over Fractions.
"""

from fractions import Fraction
from itertools import permutations

import numpy as np

from .errors import DegenerateDiagonals, SingularMatrix

CROSS_TOL = 1e-12


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def normalize_point(p):
    """Scale a homogeneous triple so its last nonzero coordinate is 1."""
    for x in reversed(p):
        if x != 0:
            return tuple(c / x for c in p)
    raise DegenerateDiagonals("the zero triple is not a projective point")


def classical_pentagram_rp2(points, tol=CROSS_TOL):
    """Vertex k of the image: line(P_k, P_{k+2}) meet line(P_{k+1}, P_{k+3})."""
    N = len(points)
    if N < 5:
        raise DegenerateDiagonals(f"need at least 5 points, got {N}")
    pts = [tuple(p) for p in points]
    out = []
    for k in range(N):
        l1 = _cross(pts[k], pts[(k + 2) % N])
        l2 = _cross(pts[(k + 1) % N], pts[(k + 3) % N])
        x = _cross(l1, l2)
        scale = max(abs(c) for c in l1) * max(abs(c) for c in l2)
        if scale == 0 or max(abs(c) for c in x) <= tol * scale:
            raise DegenerateDiagonals(f"diagonals through vertex {k} do not meet in a point", k=k)
        out.append(x)
    return out


def projective_distance(p, q):
    """Norm of the wedge of the unit representatives: 0 iff p and q are proportional."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    p = p / np.linalg.norm(p)
    q = q / np.linalg.norm(q)
    return float(np.linalg.norm(np.outer(p, q) - np.outer(q, p)))


def same_projective_point(p, q, tol=1e-9):
    return projective_distance(p, q) <= tol


def _fraction_rows(A):
    return [[Fraction(x) for x in row] for row in A]


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            sign *= -1 if length % 2 == 0 else 1
    return sign


def _bareiss_det(rows):
    n = len(rows)
    M = [r[:] for r in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def exact_det(A):
    """Determinant over Q: permutation expansion up to 6 x 6, Bareiss beyond."""
    rows = _fraction_rows(A)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("exact_det needs a square matrix")
    if n > 6:
        return _bareiss_det(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        term = Fraction(_perm_sign(perm))
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if term == 0:
                break
        total += term
    return total


def exact_rank(A):
    """Rank over Q by fraction-free elimination."""
    M = _fraction_rows(A)
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][c]
        for i in range(rank + 1, nrows):
            f = M[i][c]
            if f != 0:
                M[i] = [p * x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def cramer_solve(A, b):
    """x = A^{-1} b with x_i = det(A_i) / det(A); b may be a vector or a matrix."""
    rows = _fraction_rows(A)
    n = len(rows)
    D = exact_det(rows)
    if D == 0:
        raise SingularMatrix("matrix is singular over Q")
    B = np.asarray(b, dtype=object)
    vector = B.ndim == 1
    B = B.reshape(n, -1)
    X = np.empty(B.shape, dtype=object)
    for col in range(B.shape[1]):
        rhs = [Fraction(x) for x in B[:, col]]
        for i in range(n):
            Ai = [r[:i] + [rhs[j]] + r[i + 1 :] for j, r in enumerate(rows)]
            X[i, col] = exact_det(Ai) / D
    return X.ravel() if vector else X


def _matmul(A, B):
    return [[sum((A[i][t] * B[t][j] for t in range(len(B))), Fraction(0)) for j in range(len(B[0]))] for i in range(len(A))]


def _companion(chain, k):
    n, m = chain.n, chain.m
    size = m * n
    Q = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size - n):
        Q[i + n][i] = Fraction(1)
    for i in range(m):
        blk = chain.block(k, i)
        for r in range(n):
            for c in range(n):
                Q[i * n + r][size - n + c] = Fraction(blk[r][c])
    return Q


def _rbar_rows(chain, k):
    n, m = chain.n, chain.m
    col = [[Fraction(0)] * n for _ in range(m * n)]
    for i in range(m - 1, -1, -2):
        blk = chain.block(k, i)
        for r in range(n):
            col[i * n + r] = [Fraction(x) for x in blk[r]]
    return col


def cramer_map_unnormalized(chain):
    """Unnormalized image invariants of a rational chain by Cramer's rule.

    The block columns are rebuilt here with plain Fraction loops rather than
    taken from the numeric module.
    """
    exact = chain if chain.exact else chain.as_rational()
    n, m = exact.n, exact.m
    blocks = []
    for k in range(exact.N):
        R = [[Fraction(int(i == j)) for j in range(m * n)] for i in range(m * n)]
        cols = []
        for ell in range(m + 1):
            cols.append(_matmul(R, _rbar_rows(exact, k + ell)))
            R = _matmul(R, _companion(exact, k + ell))
        Nk = [sum((cols[j][r] for j in range(m)), []) for r in range(m * n)]
        X = cramer_solve(Nk, np.array(cols[m], dtype=object))
        blocks.append(X.reshape(m, n, n))
    return exact.replace(np.stack(blocks))
