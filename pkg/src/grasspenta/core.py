"""Twisted polygons in Gr(n, mn): lifts, frames, invariant chains, monodromy.

A twisted N-gon is stored through one period of its lift ``X_0 .. X_{N-1}``
(each an ``mn x n`` matrix) and the monodromy ``M``.  Vertices outside the
period are never stored: ``vertex(k + qN) = M^q X_k``.

The moduli coordinates are the ``n x n`` blocks ``a_k^i`` defined by

    X_{k+m} = X_k a_k^0 + X_{k+1} a_k^1 + ... + X_{k+m-1} a_k^{m-1},

equivalently ``rho_{k+1} = rho_k Q_k`` with ``rho_k = (X_k ... X_{k+m-1})``
and ``Q_k`` the block companion matrix returned by :func:`build_Q`.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from . import linalg
from .errors import GenerationFailed, InvalidDims, NotRegular, SingularFrame

COMPLEX = "complex"
RATIONAL = "rational"
FIELDS = (COMPLEX, RATIONAL)

# conditioning bound used when sampling random polygons
COND_MAX = 1e4


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def check_dims(n, m, N):
    if n < 1 or m < 3 or N < 1:
        raise InvalidDims(f"need n >= 1, m >= 3, N >= 1 (got n={n}, m={m}, N={N})", n=n, m=m, N=N)
    if gcd(N, m) != 1:
        raise InvalidDims(f"gcd(N, m) = {gcd(N, m)} != 1 for N={N}, m={m}", n=n, m=m, N=N)


@dataclass(frozen=True)
class InvariantChain:
    """The N x m array of n x n blocks ``a[k, i] = a_k^i`` (periodic in k)."""

    n: int
    m: int
    N: int
    a: np.ndarray
    field: str = COMPLEX

    def __post_init__(self):
        a = np.asarray(self.a)
        if a.shape != (self.N, self.m, self.n, self.n):
            raise InvalidDims(f"chain array has shape {a.shape}, expected {(self.N, self.m, self.n, self.n)}")
        if self.field == RATIONAL and a.dtype != object:
            a = linalg.as_exact(a)
        elif self.field == COMPLEX:
            a = a.astype(complex)
        object.__setattr__(self, "a", _frozen(a))

    @property
    def exact(self):
        return self.field == RATIONAL

    def block(self, k, i):
        return self.a[k % self.N, i]

    def column(self, k):
        """Last block-column of Q_k: (a_k^0; ...; a_k^{m-1}) as an mn x n matrix."""
        return self.a[k % self.N].reshape(self.m * self.n, self.n)

    def as_complex(self):
        return InvariantChain(self.n, self.m, self.N, linalg.as_complex(self.a), COMPLEX)

    def as_rational(self):
        return InvariantChain(self.n, self.m, self.N, linalg.as_exact(self.a), RATIONAL)

    def replace(self, a):
        field = RATIONAL if np.asarray(a).dtype == object else COMPLEX
        return InvariantChain(self.n, self.m, self.N, a, field)


@dataclass(frozen=True)
class TwistedLift:
    """One period of a twisted lift plus its monodromy."""

    n: int
    m: int
    N: int
    X: np.ndarray
    M: np.ndarray
    field: str = COMPLEX

    def __post_init__(self):
        mn = self.m * self.n
        X = np.asarray(self.X)
        M = np.asarray(self.M)
        if X.shape != (self.N, mn, self.n) or M.shape != (mn, mn):
            raise InvalidDims(f"lift arrays have shapes {X.shape}, {M.shape}")
        if self.field == RATIONAL:
            X, M = (a if a.dtype == object else linalg.as_exact(a) for a in (X, M))
        else:
            X, M = X.astype(complex, copy=False), M.astype(complex, copy=False)
        object.__setattr__(self, "X", _frozen(X))
        # an already frozen monodromy is shared, so images keep the very same M
        if not (M is self.M and not M.flags.writeable):
            object.__setattr__(self, "M", _frozen(M))

    @property
    def exact(self):
        return self.field == RATIONAL

    def _monodromy_power(self, q):
        if q == 0:
            return linalg.eye(self.m * self.n, self.exact)
        base = self.M if q > 0 else linalg.inv(self.M)
        return reduce(np.matmul, [base] * abs(q))

    def vertex(self, j):
        q, r = divmod(j, self.N)
        if q == 0:
            return self.X[r]
        return self._monodromy_power(q) @ self.X[r]

    def frame(self, k):
        """rho_k = (X_k, X_{k+1}, ..., X_{k+m-1})."""
        return np.hstack([self.vertex(k + i) for i in range(self.m)])

    def as_complex(self):
        return TwistedLift(self.n, self.m, self.N, linalg.as_complex(self.X), linalg.as_complex(self.M), COMPLEX)

    def with_gauge(self, g):
        """The lift X_k g_k for a closed polygon g in GL(n) (same monodromy)."""
        X = np.stack([self.X[k] @ g[k] for k in range(self.N)])
        field = RATIONAL if X.dtype == object else COMPLEX
        return TwistedLift(self.n, self.m, self.N, X, self.M if field == self.field else linalg.as_complex(self.M), field)

    def transformed(self, g):
        """The lift g X_k of the polygon moved by g (monodromy g M g^-1)."""
        X = np.stack([g @ x for x in self.X])
        M = g @ self.M @ linalg.inv(g)
        field = RATIONAL if X.dtype == object else COMPLEX
        return TwistedLift(self.n, self.m, self.N, X, M, field)


def is_regular(lift, tol=None):
    """Check det rho_k != 0 over one period.

    Returns ``(regular, min_abs_det)``.  In rational mode the test is exact;
    in complex mode a frame counts as singular when its reciprocal condition
    number is at most ``tol``.
    """
    tol = linalg.get_tol(tol)
    dets = []
    regular = True
    for k in range(lift.N):
        rho = lift.frame(k)
        d = linalg.det(rho)
        dets.append(abs(d))
        regular &= not linalg.is_singular(rho, tol)
    return bool(regular), float(min(dets))


def extract_invariants(lift, tol=None):
    """Solve rho_k col(a_k^0, ..., a_k^{m-1}) = X_{k+m} for each k."""
    ok, _ = is_regular(lift, tol)
    if not ok:
        raise NotRegular("lift has a singular frame", n=lift.n, m=lift.m, N=lift.N)
    n, m = lift.n, lift.m
    blocks = [linalg.solve(lift.frame(k), lift.vertex(k + m)).reshape(m, n, n) for k in range(lift.N)]
    return InvariantChain(n, m, lift.N, np.stack(blocks), lift.field)


def build_Q(chain, k):
    """Block companion matrix: I_n on the subdiagonal, (a_k^0; ...; a_k^{m-1}) last."""
    n, m = chain.n, chain.m
    Q = linalg.zeros((m * n, m * n), chain.exact)
    Q[n:, : (m - 1) * n] = linalg.eye((m - 1) * n, chain.exact)
    Q[:, (m - 1) * n :] = chain.column(k)
    return Q


def monodromy(chain):
    """Q_0 Q_1 ... Q_{N-1}.  Only its conjugation class is an invariant."""
    return reduce(np.matmul, (build_Q(chain, k) for k in range(chain.N)))


def reconstruct_lift(chain, rho0, tol=None):
    """Rebuild a lift from its invariants via rho_{k+1} = rho_k Q_k."""
    rho0 = np.asarray(rho0)
    if chain.exact and rho0.dtype != object:
        chain = chain.as_complex()
    elif not chain.exact and rho0.dtype == object:
        rho0 = linalg.as_complex(rho0)
    if linalg.is_singular(rho0, tol):
        raise SingularFrame("initial frame is singular")
    n = chain.n
    rho = rho0
    X = []
    for k in range(chain.N):
        X.append(rho[:, :n])
        rho = rho @ build_Q(chain, k)
    M = rho @ linalg.inv(rho0)
    return TwistedLift(n, chain.m, chain.N, np.stack(X), M, chain.field)


def gauge_transform(chain, g):
    """Invariants of the lift X_k g_k: a_k^i -> g_{k+i}^{-1} a_k^i g_{k+m}."""
    N, m = chain.N, chain.m
    ginv = [linalg.inv(g[k]) for k in range(N)]
    a = np.stack(
        [np.stack([ginv[(k + i) % N] @ chain.a[k, i] @ g[(k + m) % N] for i in range(m)]) for k in range(N)]
    )
    return chain.replace(a)


# -- random sampling --------------------------------------------------------


def _draw(rng, shape, field):
    if field == RATIONAL:
        den = 8
        nums = rng.integers(-den, den + 1, size=shape)
        out = np.empty(shape, dtype=object)
        for idx, v in np.ndenumerate(nums):
            out[idx] = Fraction(int(v), den)
        return out
    return rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)


def _well_conditioned(a):
    c = np.linalg.cond(linalg.as_complex(a))
    return np.isfinite(c) and c <= COND_MAX


def _unimodular_row_fix(a, target):
    """Scale the first row of ``a`` so that det(a) is multiplied by ``target``."""
    a = a.copy()
    a[0] = a[0] * target
    return a


def random_chain(n, m, N, seed=None, field=COMPLEX, rng=None, unimodular=True):
    """A chain with blocks uniform in [-1, 1] (plus an imaginary part in complex mode).

    a_k^0 is resampled until well conditioned.  With ``unimodular`` the first
    row of a_{N-1}^0 is rescaled so the monodromy lies in SL(mn).
    """
    check_dims(n, m, N)
    if field not in FIELDS:
        raise InvalidDims(f"unknown field {field!r}")
    rng = np.random.default_rng(seed) if rng is None else rng
    for _ in range(100):
        a = _draw(rng, (N, m, n, n), field)
        if not all(_well_conditioned(a[k, 0]) for k in range(N)):
            continue
        chain = InvariantChain(n, m, N, a, field)
        if unimodular:
            a = np.array(chain.a, copy=True)
            D = linalg.det(monodromy(chain))
            a[N - 1, 0] = _unimodular_row_fix(a[N - 1, 0], (Fraction(1) if chain.exact else 1.0) / D)
            chain = InvariantChain(n, m, N, a, field)
        return chain
    raise GenerationFailed("could not draw well-conditioned a_k^0 blocks")


def random_regular_lift(n, m, N, seed=None, field=COMPLEX, tol=None):
    """A random regular twisted lift with monodromy in SL(mn), deterministic per seed.

    The vertices X_0 .. X_{N-1} and M are drawn directly and resampled until
    every frame rho_k and M are well conditioned.  M = rho_0 Q_0 ... Q_{N-1} rho_0^{-1}
    then holds for the extracted chain.
    """
    check_dims(n, m, N)
    if field not in FIELDS:
        raise InvalidDims(f"unknown field {field!r}")
    rng = np.random.default_rng(seed)
    mn = m * n
    for _ in range(100):
        X = _draw(rng, (N, mn, n), field)
        M = _draw(rng, (mn, mn), field)
        if not _well_conditioned(M):
            continue
        D = linalg.det(M)
        if field == RATIONAL:
            M = _unimodular_row_fix(M, Fraction(1) / D)
        else:
            M = M * D ** (-1.0 / mn)
        lift = TwistedLift(n, m, N, X, M, field)
        if all(_well_conditioned(lift.frame(k)) for k in range(N)) and is_regular(lift, tol)[0]:
            return lift
    raise GenerationFailed(f"no regular lift found for n={n}, m={m}, N={N} after 100 attempts")
