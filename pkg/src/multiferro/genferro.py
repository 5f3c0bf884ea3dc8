"""Generalised one-party ferromagnet with energy -N*u(m).

For a symmetric, uniformly convex energy u with u(0) = 0 the pressure is

    A(beta, h) = max_M [ beta*(u(M) - u'(M)*M) + phi(beta*u'(M) + h) ],

attained on the self-consistent branch M = phi'(beta*u'(M) + h).  The
critical point sits at beta_c = 1/u''(0) and the zero-field paramagnetic
susceptibility is chi(beta) = 1/(1 - beta*u''(0)).

The plain Curie-Weiss pressure is the quadratic case u(x) = x^2/2, so that
A_CW(beta, h) = max_M [ -beta*M^2/2 + phi(beta*M + h) ]; every other module
needing A_CW evaluates it through :func:`gf_pressure` with that energy.

Laplace-conjugate measures nu_u^beta (with exp(beta*u(x)) as their Laplace
transform) are built only in the constructive case beta*u = n*phi for an
integer n, where nu is the law of a sum of n independent family spins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .spins import SpinFamily

__all__ = [
    "EnergyFunction",
    "GfPressure",
    "ConjugateMeasure",
    "DivergenceError",
    "gf_pressure",
    "curie_weiss_pressure",
    "gf_critical_beta",
    "gf_susceptibility",
    "conjugate_measure",
    "quartic_cumulant_u",
]


class DivergenceError(ArithmeticError):
    """Raised when a susceptibility denominator collapses at criticality."""


@dataclass(frozen=True)
class EnergyFunction:
    """Symmetric convex energy u with derivatives up to fourth order.

    Kinds:
      - ``quadratic``:  u(x) = x^2/2
      - ``cgf``:        u(x) = phi_family(x)
      - ``scaled_cgf``: u(x) = phi_family(s*x)/s^2 when normalised (so that
        u''(0) = 1), or phi_family(s*x) when not.
    """

    kind: str
    family: SpinFamily | None = None
    scale: float = 1.0
    normalized: bool = True

    @staticmethod
    def quadratic() -> "EnergyFunction":
        return EnergyFunction(kind="quadratic")

    @staticmethod
    def cgf(family: SpinFamily) -> "EnergyFunction":
        return EnergyFunction(kind="cgf", family=family)

    @staticmethod
    def scaled_cgf(family: SpinFamily, scale: float, normalized: bool = True) -> "EnergyFunction":
        if scale <= 0:
            raise ValueError("scale must be positive")
        return EnergyFunction(kind="scaled_cgf", family=family, scale=float(scale), normalized=normalized)

    def eval(self, x, order: int = 4):
        """u(x) and derivatives up to ``order``, vectorised over x."""
        x = np.asarray(x, dtype=float)
        if self.kind == "quadratic":
            out = [0.5 * x * x]
            if order >= 1:
                out.append(x * 1.0)
            if order >= 2:
                out.append(np.ones_like(x))
            for _ in range(3, order + 1):
                out.append(np.zeros_like(x))
            return tuple(out)
        if self.family is None:
            raise ValueError("cgf-backed energy needs a spin family")
        s = self.scale if self.kind == "scaled_cgf" else 1.0
        phis = self.family.phi(s * x, order)
        norm = s * s if (self.kind == "scaled_cgf" and self.normalized) else 1.0
        return tuple(phis[k] * s**k / norm for k in range(order + 1))

    def d(self, x, k: int):
        """k-th derivative of u at x."""
        return self.eval(x, k)[k]

    def d2_at_zero(self) -> float:
        return float(np.asarray(self.d(0.0, 2)).reshape(-1)[0])

    def d4_at_zero(self) -> float:
        return float(np.asarray(self.d(0.0, 4)).reshape(-1)[0])


@dataclass(frozen=True)
class GfPressure:
    """Pressure value with the selected magnetisation branch."""

    pressure: float
    M: float
    t_arg: float  # tilted field beta*u'(M) + h seen by a single spin
    pair: bool  # True when -M is an equivalent branch (h = 0 above beta_c)
    roots: tuple[float, ...]


def _objective(u: EnergyFunction, family: SpinFamily, beta: float, h: float, M):
    uv, du = u.eval(M, 1)[:2]
    targ = beta * du + h
    phi0 = family.phi(targ, 0)[0]
    return beta * (uv - du * np.asarray(M)) + phi0, targ


def _self_consistency_roots(
    u: EnergyFunction, family: SpinFamily, beta: float, h: float, n_grid: int = 2001
) -> list[float]:
    """All roots of M = phi'(beta*u'(M) + h) by dense bracketing plus Brent."""
    hull = family.hull_max * (1.0 - 1e-12)
    grid = np.linspace(-hull, hull, n_grid)
    du = u.eval(grid, 1)[1]
    g = family.phi(beta * du + h, 1)[1] - grid

    def gfun(M: float) -> float:
        dM = u.eval(np.asarray(M), 1)[1]
        return float(family.phi(beta * dM + h, 1)[1]) - M

    roots: list[float] = []
    sign = np.sign(g)
    for i in np.nonzero(np.diff(sign) != 0)[0]:
        lo, hi = grid[i], grid[i + 1]
        if g[i] == 0.0:
            roots.append(float(lo))
            continue
        r = brentq(gfun, lo, hi, xtol=1e-15, rtol=8.9e-16)
        roots.append(float(r))
    if not roots:  # g is continuous with g(-hull) > 0 > g(hull); only roundoff gets here
        roots.append(0.0)
    # dedupe near-identical brackets
    roots.sort()
    dedup = [roots[0]]
    for r in roots[1:]:
        if abs(r - dedup[-1]) > 1e-12:
            dedup.append(r)
    return dedup


def gf_pressure(u: EnergyFunction, family: SpinFamily, beta: float, h: float) -> GfPressure:
    """Pressure and magnetisation of the generalised ferromagnet.

    Maximises the trial pressure over the self-consistent roots; at h = 0
    above the critical point the positive branch is returned and the
    symmetric pair is flagged.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    roots = _self_consistency_roots(u, family, beta, h)
    vals, targs = [], []
    for r in roots:
        v, targ = _objective(u, family, beta, h, np.asarray(r))
        vals.append(float(v))
        targs.append(float(targ))
    best = int(np.argmax(vals))
    M = roots[best]
    value, t_arg = vals[best], targs[best]
    pair = False
    if h == 0.0 and abs(M) > 1e-12:
        # the mirror root has the same pressure; report the positive branch
        M = abs(M)
        v, targ = _objective(u, family, beta, h, np.asarray(M))
        value, t_arg = float(v), float(targ)
        pair = True
    return GfPressure(
        pressure=value,
        M=float(M),
        t_arg=t_arg,
        pair=pair,
        roots=tuple(roots),
    )


def curie_weiss_pressure(family: SpinFamily, beta: float, h: float) -> GfPressure:
    """A_CW(beta, h) = max_M [-beta*M^2/2 + phi(beta*M + h)] (quadratic energy)."""
    return gf_pressure(EnergyFunction.quadratic(), family, beta, h)


def gf_critical_beta(u: EnergyFunction) -> float:
    """Critical inverse temperature 1/u''(0)."""
    d2 = u.d2_at_zero()
    if d2 <= 0:
        raise ValueError("u''(0) must be positive")
    return 1.0 / d2


def gf_susceptibility(u: EnergyFunction, family: SpinFamily, beta: float, h: float) -> float:
    """chi = V/(1 - beta*u''(M)*V) with V the spin variance tilted at the solved M."""
    res = gf_pressure(u, family, beta, h)
    V = float(family.phi(res.t_arg, 2)[2])
    d2 = float(np.asarray(u.d(res.M, 2)).reshape(-1)[0])
    denom = 1.0 - beta * d2 * V
    if abs(denom) < 1e-12:
        raise DivergenceError("susceptibility diverges: 1 - beta*u''(M)*V is below 1e-12")
    return V / denom


# -- Laplace-conjugate measures --------------------------------------------


@dataclass(frozen=True)
class ConjugateMeasure:
    """Finite measure nu with Laplace transform exp(beta*u(x)), plus the law
    of the rescaled N-fold sum X_N = N^(-1/2) * sum(xi_i)."""

    support: np.ndarray
    weights: np.ndarray
    n_fold: int
    N: int
    mu_support: np.ndarray
    mu_weights: np.ndarray

    def laplace(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(x[..., None] * self.support + np.log(self.weights)).sum(axis=-1)

    def variance(self) -> float:
        mean = float(np.dot(self.weights, self.support))
        return float(np.dot(self.weights, (self.support - mean) ** 2))

    def mu_variance(self) -> float:
        mean = float(np.dot(self.mu_weights, self.mu_support))
        return float(np.dot(self.mu_weights, (self.mu_support - mean) ** 2))


def _merge_atoms(vals: np.ndarray, logw: np.ndarray, decimals: int = 12):
    key = np.round(vals, decimals)
    uniq, inv = np.unique(key, return_inverse=True)
    gmax = np.full(uniq.shape, -np.inf)
    np.maximum.at(gmax, inv, logw)
    acc = np.zeros(uniq.shape)
    np.add.at(acc, inv, np.exp(logw - gmax[inv]))
    return uniq, gmax + np.log(acc)


def _convolve_atoms(va, la, vb, lb):
    vals = (va[:, None] + vb[None, :]).ravel()
    logw = (la[:, None] + lb[None, :]).ravel()
    return _merge_atoms(vals, logw)


def _nfold(vals: np.ndarray, logw: np.ndarray, n: int):
    """n-fold convolution by binary powering (log-domain weights)."""
    rv, rl = None, None
    bv, bl = vals, logw
    while n > 0:
        if n & 1:
            rv, rl = (bv, bl) if rv is None else _convolve_atoms(rv, rl, bv, bl)
        n >>= 1
        if n:
            bv, bl = _convolve_atoms(bv, bl, bv, bl)
    return rv, rl


def conjugate_measure(u: EnergyFunction, beta: float, N: int) -> ConjugateMeasure:
    """Construct nu_u^beta and mu^beta_{u,N} for the integer-convolution case.

    Requires u to be a unit-scale cumulant generating function and beta a
    positive integer n, so that exp(beta*u) = (E exp(x*sigma))^n and nu is
    the law of the sum of n family spins.  Anything else would need the
    Bernstein inversion of a completely monotone function, which is out of
    scope here.
    """
    constructive = (u.kind == "cgf") or (u.kind == "scaled_cgf" and u.scale == 1.0 and not u.normalized)
    n = int(round(beta))
    if not constructive or u.family is None or abs(beta - n) > 1e-9 or n < 1:
        raise NotImplementedError(
            "conjugate measure implemented only for beta*u = n*phi with integer n; "
            "general Bernstein inversion is out of scope"
        )
    if not u.family.is_finite_support:
        raise NotImplementedError("conjugate construction needs a finite spin support")
    if not 1 <= N <= 20000:
        raise ValueError("N out of the supported range")
    base_v = u.family.support_array
    base_l = np.log(u.family.weights_array)
    sv, sl = _nfold(base_v, base_l, n)
    mv, ml = _nfold(sv, sl, N)
    return ConjugateMeasure(
        support=sv,
        weights=np.exp(sl),
        n_fold=n,
        N=N,
        mu_support=mv / math.sqrt(N),
        mu_weights=np.exp(ml),
    )


def quartic_cumulant_u(u: EnergyFunction, beta: float) -> float:
    """Fourth cumulant of nu_u^beta: the fourth derivative of beta*u at zero.

    log of the Laplace transform of nu_u^beta is beta*u(x) by construction,
    so no inversion is needed; for the duality energy u = phi_2 this equals
    beta * P4 of the second party.
    """
    return float(beta) * u.d4_at_zero()
