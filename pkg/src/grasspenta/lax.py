"""Scaling symmetry, parameter-dependent Lax matrices and the spectral curve.

The scaling multiplies a_k^i by mu^{e_i}.  For even m = 2s the exponents are
e_odd = 1, e_even = 0.  For odd m = 2s + 1 they are e_{2r+1} = -1 + r/s and
e_{2r} = r/s.  Writing nu = mu^{1/s} (principal branch, odd m) or nu = mu
(even m) turns every factor into an integer power of nu, which is how the
module evaluates it.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from . import linalg
from .core import build_Q, monodromy
from .errors import InterpolationIllConditioned, ZeroMu
from .normalize import TOL_SEP, jordan_gauge
from .pentamap import build_N, f_columns, map_algebraic_unnormalized, map_moduli, pbar, rbar

VANDERMONDE_MAX = 1e8


@dataclass(frozen=True)
class ScalingSpec:
    m: int

    @property
    def s(self):
        return self.m // 2

    @property
    def even(self):
        return self.m % 2 == 0

    def exponent(self, i):
        """Exact exponent e_i of mu on block a^i."""
        if self.even:
            return Fraction(i % 2)
        r, odd = divmod(i, 2)
        return Fraction(-1) + Fraction(r, self.s) if odd else Fraction(r, self.s)

    def exponents(self):
        return [self.exponent(i) for i in range(self.m)]

    def nu_power(self, i):
        """Integer exponent of nu on block a^i."""
        p = self.exponent(i) * (1 if self.even else self.s)
        assert p.denominator == 1
        return int(p)

    def nu(self, mu):
        if mu == 0:
            raise ZeroMu("the scaling parameter must be nonzero")
        if self.even or self.s == 1:
            return mu
        return complex(mu) ** (1.0 / self.s)


def _check_mu(mu):
    if mu == 0:
        raise ZeroMu("the scaling parameter must be nonzero")


def scale_with_nu(chain, nu):
    """Multiply a^i by nu^{p_i} with p_i the integer nu-exponents."""
    if nu == 0:
        raise ZeroMu("the scaling parameter must be nonzero")
    spec = ScalingSpec(chain.m)
    exact = chain.exact and isinstance(nu, (int, Fraction))
    base = chain if exact or not chain.exact else chain.as_complex()
    a = np.array(base.a, copy=True)
    for i in range(chain.m):
        factor = Fraction(nu) ** spec.nu_power(i) if exact else complex(nu) ** spec.nu_power(i)
        a[:, i] = a[:, i] * factor
    return base.replace(a)


def apply_scaling(chain, mu):
    """a_k^i -> mu^{e_i} a_k^i (principal branch for fractional powers)."""
    _check_mu(mu)
    return scale_with_nu(chain, ScalingSpec(chain.m).nu(mu))


def build_Q_mu(chain, k, mu):
    return build_Q(apply_scaling(chain, mu), k)


def build_N_mu(chain, k, mu):
    """N_k(mu) with the overall scalar factor dropped."""
    return build_N(apply_scaling(chain, mu), k)


def monodromy_mu(chain, mu):
    return monodromy(apply_scaling(chain, mu))


# -- column decomposition ----------------------------------------------------


def shift_matrix(m, n, exact=False):
    """Gamma: identity blocks on the block subdiagonal."""
    G = linalg.zeros((m * n, m * n), exact)
    G[n:, : (m - 1) * n] = linalg.eye((m - 1) * n, exact)
    return G


@dataclass
class ColumnDecomposition:
    """F, G (even tags), G-hat (odd tags) and alpha for one base index.

    ``F[l]``, ``G[l]`` are mn x n block columns (``G[l]`` holds G for even l
    and G-hat for odd l); ``alpha[(i, j)]`` is the n x n coefficient of
    F_i in the expansion of F_j.
    """

    k: int
    F: list
    G: list
    alpha: dict
    pbar: np.ndarray
    gamma: np.ndarray
    residual: float = field(default=0.0)

    def reconstruct(self, j):
        out = self.G[j].copy()
        for i in range((j + 1) % 2, j, 2):
            out = out + self.F[i] @ self.alpha[(i, j)]
        return out


def _last(col, n):
    return col[-n:]


def decompose_columns(chain, k, length=None):
    """Homogeneous decomposition of F_{k+l}, l = 0 .. length-1 (default m+1).

    G at base k and level l is computed from level l-1 at base k+1:
    G-hat(k, 2l+1) = pbar_k G(k+1, 2l)_last + Gamma G(k+1, 2l),
    G(k, 2l+2) = Gamma G-hat(k+1, 2l+1), with alpha shifting the same way.
    """
    m, n = chain.m, chain.n
    length = m + 1 if length is None else length
    exact = chain.exact
    gamma = shift_matrix(m, n, exact)
    top = length - 1
    # level-by-level tables over the bases needed: base k+t for levels <= top-t
    G = {}
    alpha = {}
    for t in range(top, -1, -1):
        base = k + t
        G[(base, 0)] = rbar(chain, base)
        for j in range(1, top - t + 1):
            prev = G[(base + 1, j - 1)]
            if j % 2:
                G[(base, j)] = pbar(chain, base) @ _last(prev, n) + gamma @ prev
            else:
                G[(base, j)] = gamma @ prev
            for i in range((j + 1) % 2, j, 2):
                alpha[(base, i, j)] = _last(prev, n) if i == 0 else alpha[(base + 1, i - 1, j - 1)]

    F = f_columns(chain, k, length)
    al = {(i, j): alpha[(k, i, j)] for j in range(1, length) for i in range((j + 1) % 2, j, 2)}
    dec = ColumnDecomposition(k, F, [G[(k, j)] for j in range(length)], al, pbar(chain, k), gamma)
    dec.residual = decomposition_residual(dec)
    return dec


def decomposition_residual(dec):
    worst = 0.0
    for j, Fj in enumerate(dec.F):
        scale = float(np.max(np.abs(linalg.as_complex(Fj))))
        diff = float(np.max(np.abs(linalg.as_complex(Fj - dec.reconstruct(j)))))
        worst = max(worst, diff / scale if scale > 0 else diff)
    return worst


# -- checks ------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    max_dev: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.max_dev <= self.tol)

    def to_dict(self):
        return {"check": self.name, "max_dev": self.max_dev, "tol": self.tol, "passed": self.passed, **self.details}


def degree_check_unnormalized(chain, mu, tol=1e-8):
    """c(scaled chain) against mu^{e_i} c(chain), block by block."""
    c = map_algebraic_unnormalized(chain)
    c_scaled = map_algebraic_unnormalized(apply_scaling(chain, mu))
    expected = apply_scaling(c, mu)
    got, want = linalg.as_complex(c_scaled.a), linalg.as_complex(expected.a)
    per_block = []
    for i in range(chain.m):
        per_block.append(linalg.rel_dev(got[:, i], want[:, i]))
    return CheckReport("degree_unnormalized", max(per_block), tol, {"mu": complex(mu), "per_block": per_block})


def lambda_degree_check(chain, mu, tol=1e-7):
    """det lambda_k(scaled) / det lambda_k against mu^{-n} (even m) or 1 (odd m)."""
    _, g0 = map_moduli(chain)
    _, g1 = map_moduli(apply_scaling(chain, mu))
    target = complex(mu) ** (-chain.n) if chain.m % 2 == 0 else 1.0
    expected = target * g0.delta
    dev = float(np.max(np.abs(g1.delta - expected) / np.abs(expected)))
    return CheckReport("lambda_degree", dev, tol, {"mu": complex(mu), "target": complex(target)})


def observables(chain, mus=(), tol_sep=TOL_SEP):
    """Gauge-invariant data: monodromy char poly, m-product spectra, spectral samples."""
    jg = jordan_gauge(chain, tol_sep)
    return {
        "charpoly": linalg.char_poly(monodromy(chain)),
        "spectra": [np.linalg.eigvals(B) for B in jg.B],
        "samples": spectral_samples(chain, mus) if len(mus) else [],
    }


def observable_dev(x, y):
    dev = linalg.rel_dev(x["charpoly"], y["charpoly"])
    for a, b in zip(x["spectra"], y["spectra"]):
        dev = max(dev, linalg.multiset_dev(a, b))
    for a, b in zip(x["samples"], y["samples"]):
        dev = max(dev, linalg.rel_dev(a, b))
    return dev


def scaling_commutation_check(chain, mu, tol=1e-6, mus=(0.5, 2.0, 1j)):
    """map_moduli after scaling against scaling after map_moduli."""
    left, _ = map_moduli(apply_scaling(chain, mu))
    right = apply_scaling(map_moduli(chain)[0], mu)
    dev = observable_dev(observables(left, mus), observables(right, mus))
    return CheckReport("scaling_commutation", dev, tol, {"mu": complex(mu)})


def anchor_check(chain, mu, tol=1e-12):
    """char(prod Q_k(mu)) against char(prod Q_k(1)) of the scaled chain."""
    lhs = linalg.char_poly(reduce(np.matmul, (build_Q_mu(chain, k, mu) for k in range(chain.N))))
    rhs = linalg.char_poly(monodromy(apply_scaling(chain, mu)))
    return CheckReport("anchor", linalg.rel_dev(lhs, rhs), tol, {"mu": complex(mu)})


# -- spectral data -------------------------------------------------------------


def spectral_samples(chain, mus):
    """Ascending eta-coefficients of det(Q_0(mu) ... Q_{N-1}(mu) - eta I) per mu."""
    for mu in mus:
        _check_mu(mu)
    return [linalg.char_poly(monodromy_mu(chain, mu)) for mu in mus]


def _samples_nu(chain, nus):
    return np.array([linalg.char_poly(monodromy(scale_with_nu(chain, nu))) for nu in nus])


def nu_window(chain):
    """(offset, length) of the Laurent window in nu containing every coefficient."""
    spec = ScalingSpec(chain.m)
    if spec.even:
        return 0, chain.N * chain.n + 1
    reach = chain.N * chain.n * spec.s
    return -reach, 2 * reach + 1


@dataclass(frozen=True)
class SpectralCurve:
    """coeffs[j, i] multiplies nu^{j + nu_offset} eta^i."""

    nu_offset: int
    coeffs: np.ndarray
    sample_nus: np.ndarray
    sample_polys: np.ndarray
    holdout_residual: float
    vandermonde_cond: float

    def eta_poly(self, nu):
        powers = np.array([complex(nu) ** (j + self.nu_offset) for j in range(self.coeffs.shape[0])])
        return powers @ self.coeffs

    def to_dict(self):
        from .io import encode_matrix

        return {"nu_offset": self.nu_offset, "coeffs": encode_matrix(self.coeffs)}


def spectral_curve(chain, cond_max=VANDERMONDE_MAX):
    """Interpolate the Laurent coefficients in nu from samples on the unit circle.

    With L equispaced roots of unity the Vandermonde system is a scaled DFT,
    solved by an FFT; its condition number is still computed and checked.
    """
    chain = chain.as_complex() if chain.exact else chain
    offset, L = nu_window(chain)
    t = np.arange(L)
    nus = np.exp(2j * np.pi * t / L)
    V = nus[:, None] ** (np.arange(L)[None, :] + offset)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > cond_max:
        raise InterpolationIllConditioned(f"Vandermonde condition {cond:.3e} exceeds {cond_max:.1e}", cond=cond)
    polys = _samples_nu(chain, nus)
    y = polys * (nus ** (-offset))[:, None]
    coeffs = np.fft.fft(y, axis=0) / L
    held = np.exp(2j * np.pi * (t + 0.5) / L)
    direct = _samples_nu(chain, held)
    curve = SpectralCurve(offset, coeffs, nus, polys, 0.0, cond)
    approx = np.array([curve.eta_poly(nu) for nu in held])
    resid = linalg.rel_dev(approx, direct)
    return SpectralCurve(offset, coeffs, nus, polys, resid, cond)
