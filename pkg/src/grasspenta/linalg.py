"""Dense linear algebra over the two scalar backends.

Arrays with ``dtype=object`` hold :class:`fractions.Fraction` entries and are
treated exactly (Gauss-Jordan elimination over Q).  Anything else is promoted
to ``complex128`` and handled with LAPACK through numpy/scipy.
"""

import os
from fractions import Fraction

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-9


def get_tol(tol=None):
    """Resolve a tolerance: explicit value, then ``GRASSPENTA_TOL``, then 1e-9."""
    if tol is not None:
        return float(tol)
    env = os.environ.get("GRASSPENTA_TOL")
    return float(env) if env else DEFAULT_TOL


def is_exact(a):
    return np.asarray(a).dtype == object


def as_complex(a):
    return np.asarray(a).astype(complex)


def as_exact(a):
    """Convert to a Fraction object array; complex entries must be real."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.vectorize(Fraction, otypes=[object])(a) if a.size else a.copy()
    if np.iscomplexobj(a):
        if np.any(a.imag != 0):
            raise ValueError("cannot represent complex entries as rationals")
        a = a.real
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = Fraction(x.item()) if hasattr(x, "item") else Fraction(x)
    return out


def zeros(shape, exact=False):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=complex)


def eye(n, exact=False):
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def promote(*arrays):
    """Return the arrays in a common backend (exact only if all are exact)."""
    if all(is_exact(a) for a in arrays):
        return arrays
    return tuple(as_complex(a) for a in arrays)


# -- exact kernels ---------------------------------------------------------


def _rref(rows):
    """Reduced row echelon form of a list-of-lists of Fractions (copied)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def _exact_det(a):
    n = a.shape[0]
    rows = [list(r) for r in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det *= p
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


# -- backend dispatch --------------------------------------------------------


def det(a):
    if is_exact(a):
        return _exact_det(np.asarray(a))
    return complex(np.linalg.det(as_complex(a)))


def scaled_det(a):
    """|det a| divided by the product of column 2-norms (Hadamard ratio, in [0, 1])."""
    norms = np.linalg.norm(as_complex(a), axis=0)
    if np.any(norms == 0):
        return 0.0
    return float(abs(complex(det(a))) / np.prod(norms))


def rcond(a):
    """Reciprocal 2-norm condition number (0 for singular input)."""
    s = np.linalg.svd(as_complex(a), compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def is_singular(a, tol=None):
    """Exact test over Q; otherwise reciprocal condition number at most ``tol``."""
    if is_exact(a):
        return det(a) == 0
    return rcond(a) <= get_tol(tol)


def solve(a, b):
    """Solve a @ x = b; raises numpy's LinAlgError on singular input."""
    a, b = promote(a, b)
    if not is_exact(a):
        return np.linalg.solve(a, b)
    n = a.shape[0]
    b2 = b.reshape(n, -1)
    aug = [list(a[i]) + list(b2[i]) for i in range(n)]
    rows, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    out = np.empty(b2.shape, dtype=object)
    for i in range(n):
        out[i] = rows[i][n:]
    return out.reshape(b.shape)


def inv(a):
    return solve(a, eye(np.asarray(a).shape[0], is_exact(a)))


def nullspace(a, tol=None):
    """Basis (as columns) of the right nullspace of ``a``.

    Exact arrays use Gauss-Jordan; floating arrays use the SVD with rank
    decided at ``tol`` relative to the largest singular value.
    """
    a = np.asarray(a)
    nrows, ncols = a.shape
    if is_exact(a):
        rows, pivots = _rref(list(map(list, a)))
        free = [c for c in range(ncols) if c not in pivots]
        basis = zeros((ncols, len(free)), exact=True)
        for j, f in enumerate(free):
            basis[f, j] = Fraction(1)
            for r, p in enumerate(pivots):
                basis[p, j] = -rows[r][f]
        return basis
    tol = get_tol(tol)
    _, s, vh = np.linalg.svd(as_complex(a), full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return vh[rank:].conj().T


def rank(a, tol=None):
    a = np.asarray(a)
    if is_exact(a):
        return len(_rref(list(map(list, a)))[1])
    s = np.linalg.svd(as_complex(a), compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > get_tol(tol) * s[0]))


def char_poly(a):
    """Coefficients of det(a - eta*I) in ascending powers of eta.

    The matrix is first brought to upper Hessenberg form by an orthogonal
    similarity; the determinant recurrence for Hessenberg matrices then
    expands the polynomial without forming eigenvalues.
    """
    a = as_complex(a)
    n = a.shape[0]
    h = scipy.linalg.hessenberg(a)
    # p[k] holds det(eta*I - H[:k, :k]) as ascending coefficients
    p = [np.array([1.0 + 0j])]
    for k in range(1, n + 1):
        cur = np.zeros(k + 1, dtype=complex)
        cur[1:] += p[k - 1]
        cur[:k] -= h[k - 1, k - 1] * p[k - 1]
        sub = 1.0 + 0j
        for i in range(k - 1, 0, -1):
            sub *= h[i, i - 1]
            cur[:i] -= h[i - 1, k - 1] * sub * p[i - 1]
        p.append(cur)
    return p[n] * (-1) ** n


def rel_dev(x, ref):
    """max|x - ref| / max|ref| (absolute when ref vanishes)."""
    x = np.asarray(x, dtype=complex)
    ref = np.asarray(ref, dtype=complex)
    scale = np.max(np.abs(ref)) if ref.size else 0.0
    diff = np.max(np.abs(x - ref)) if ref.size else 0.0
    return float(diff / scale) if scale > 0 else float(diff)


def multiset_dev(x, ref):
    """Relative distance between two eigenvalue multisets after optimal matching."""
    from scipy.optimize import linear_sum_assignment

    x = np.asarray(x, dtype=complex).ravel()
    ref = np.asarray(ref, dtype=complex).ravel()
    cost = np.abs(x[:, None] - ref[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = max(np.max(np.abs(ref)), 1e-300)
    return float(np.max(cost[rows, cols]) / scale)
