"""Admissible spin distributions and their cumulant generating functions.

A spin law is admissible when it is symmetric, has unit variance and a
fourth moment strictly below 3 (negative excess kurtosis).  Built-in
families: Rademacher +-1 spins, the symmetric uniform law on
[-sqrt(3), sqrt(3)], a symmetric three-point law {-a, 0, +a} with a hole
probability q, and user-supplied finite symmetric supports.

The cumulant generating function phi(t) = log E[exp(t*sigma)] and its
derivatives up to fourth order are exact: closed forms for the Rademacher
and uniform families, stable log-sum-exp tilting for finite supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpinFamily",
    "CgfEval",
    "FamilyValidation",
    "rademacher",
    "uniform_sqrt3",
    "three_point",
    "discrete",
    "cgf",
    "cumulant",
    "validate_family",
    "family_to_dict",
    "family_from_dict",
]

SQRT3 = math.sqrt(3.0)

# Taylor coefficients of log(sinh(x)/x) = sum_k c_k x^(2k); c_k = (-1)^(k+1) zeta(2k) / (k pi^(2k)).
_LOG_SINHC_COEFFS = (
    1.0 / 6.0,
    -1.0 / 180.0,
    1.0 / 2835.0,
    -1.0 / 37800.0,
    1.0 / 467775.0,
    -691.0 / 3831077250.0,
    2.0 / 127702575.0,
    -3617.0 / 2605132530000.0,
    43867.0 / 350813659321125.0,
)
_SERIES_RADIUS = 0.5  # switch between series and closed form at |sqrt(3) t| = 0.5


@dataclass(frozen=True)
class CgfEval:
    """phi and its derivatives at one point (entries beyond `order` are None)."""

    value: float
    d1: float | None = None
    d2: float | None = None
    d3: float | None = None
    d4: float | None = None

    def derivative(self, k: int) -> float:
        d = (self.value, self.d1, self.d2, self.d3, self.d4)[k]
        if d is None:
            raise ValueError(f"derivative of order {k} was not requested")
        return d


@dataclass(frozen=True)
class FamilyValidation:
    """Outcome of the admissibility check; failures are listed, not raised."""

    ok: bool
    failures: tuple[str, ...]
    variance: float
    fourth_moment: float


@dataclass(frozen=True)
class SpinFamily:
    """A symmetric spin law with an exactly evaluable cumulant generating function.

    ``kind`` is one of ``rademacher``, ``uniform`` or ``discrete``.  The
    uniform family is the only continuous one; all others carry a finite
    ``support`` with probability ``weights``.
    """

    kind: str
    support: tuple[float, ...] = field(default=())
    weights: tuple[float, ...] = field(default=())
    label: str = ""

    @property
    def is_finite_support(self) -> bool:
        return self.kind != "uniform"

    @property
    def hull_max(self) -> float:
        """Largest attainable magnetisation (max of the support)."""
        if self.kind == "uniform":
            return SQRT3
        return max(abs(x) for x in self.support)

    @property
    def support_array(self) -> np.ndarray:
        return np.asarray(self.support, dtype=float)

    @property
    def weights_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def moment(self, k: int) -> float:
        """Raw k-th moment E[sigma^k]."""
        if self.kind == "uniform":
            # E[x^k] over U[-s, s] with s = sqrt(3)
            return 0.0 if k % 2 else SQRT3**k / (k + 1.0)
        x = self.support_array
        w = self.weights_array
        return float(np.dot(w, x**k))

    # -- cumulant generating function ------------------------------------

    def phi(self, t, order: int = 0):
        """Vectorised phi(t) and derivatives; returns an (order+1)-tuple of arrays."""
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise ValueError("non-finite argument to the cumulant generating function")
        if self.kind == "rademacher":
            return _phi_rademacher(t, order)
        if self.kind == "uniform":
            return _phi_uniform(t, order)
        return _phi_discrete(self.support_array, self.weights_array, t, order)


def _phi_rademacher(t: np.ndarray, order: int):
    # log cosh t, stable for large |t|
    a = np.abs(t)
    value = a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)
    out = [value]
    if order >= 1:
        th = np.tanh(t)
        out.append(th)
    if order >= 2:
        s2 = 1.0 - th * th
        out.append(s2)
    if order >= 3:
        out.append(-2.0 * th * s2)
    if order >= 4:
        out.append(s2 * (4.0 * th * th - 2.0 * s2))
    return tuple(out)


def _phi_uniform(t: np.ndarray, order: int):
    """phi for the uniform law on [-sqrt3, sqrt3]: log(sinh(x)/x), x = sqrt3 t.

    Series expansion near the origin, closed forms elsewhere; both branches
    are evaluated on masked arrays so that no invalid operation occurs.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = SQRT3 * t
    small = np.abs(x) <= _SERIES_RADIUS
    value = np.empty_like(t)
    outs = [value] + [np.empty_like(t) for _ in range(order)]

    if np.any(small):
        xs = x[small]
        ts = t[small]
        x2 = xs * xs
        val = np.zeros_like(xs)
        d = [np.zeros_like(xs) for _ in range(order)]
        for k, ck in enumerate(_LOG_SINHC_COEFFS, start=1):
            p = 2 * k
            coeff = ck * 3.0**k  # phi(t) = sum ck (sqrt3 t)^(2k) = sum ck 3^k t^(2k)
            val += coeff * ts**p
            fac = 1.0
            for j in range(1, order + 1):
                fac *= p - j + 1
                if p - j >= 0:
                    d[j - 1] += coeff * fac * ts ** (p - j)
        outs[0][small] = val
        for j in range(1, order + 1):
            outs[j][small] = d[j - 1]

    if np.any(~small):
        xl = x[~small]
        tl = t[~small]
        axl = np.abs(xl)
        # log(sinh|x|/|x|) = |x| + log1p(-exp(-2|x|)) - log(2|x|); even in x
        outs[0][~small] = axl + np.log1p(-np.exp(-2.0 * axl)) - np.log(2.0 * axl)
        if order >= 1:
            coth = 1.0 / np.tanh(xl)
            outs[1][~small] = SQRT3 * coth - 1.0 / tl
        if order >= 2:
            sh2 = np.sinh(xl) ** 2
            outs[2][~small] = 1.0 / tl**2 - 3.0 / sh2
        if order >= 3:
            ch = np.cosh(xl)
            sh = np.sinh(xl)
            outs[3][~small] = 6.0 * SQRT3 * ch / sh**3 - 2.0 / tl**3
        if order >= 4:
            outs[4][~small] = 18.0 * (sh2 - 3.0 * ch * ch) / sh2**2 + 6.0 / tl**4
    return tuple(outs)


def _phi_discrete(x: np.ndarray, w: np.ndarray, t: np.ndarray, order: int):
    """Tilted-measure evaluation: phi = logsumexp(log w + t x), derivatives
    from the central moments of the tilted law."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    logits = t[..., None] * x + np.log(w)
    mx = np.max(logits, axis=-1, keepdims=True)
    z = np.exp(logits - mx)
    s = np.sum(z, axis=-1)
    value = mx[..., 0] + np.log(s)
    out = [value]
    if order >= 1:
        p = z / s[..., None]
        mu = np.sum(p * x, axis=-1)
        out.append(mu)
    if order >= 2:
        dx = x - mu[..., None]
        c2 = np.sum(p * dx**2, axis=-1)
        out.append(c2)
    if order >= 3:
        c3 = np.sum(p * dx**3, axis=-1)
        out.append(c3)
    if order >= 4:
        c4 = np.sum(p * dx**4, axis=-1)
        out.append(c4 - 3.0 * c2 * c2)
    return tuple(out)


# -- constructors ---------------------------------------------------------


def rademacher() -> SpinFamily:
    """The +-1 spin law; phi(t) = log cosh t."""
    return SpinFamily(kind="rademacher", support=(-1.0, 1.0), weights=(0.5, 0.5), label="rademacher")


def uniform_sqrt3() -> SpinFamily:
    """Uniform law on [-sqrt(3), sqrt(3)]; unit variance, E[sigma^4] = 9/5."""
    return SpinFamily(kind="uniform", label="uniform")


def three_point(q: float) -> SpinFamily:
    """Symmetric three-point law {-a, 0, +a} with P(0) = q and a = 1/sqrt(1-q).

    Unit variance by construction; admissible (fourth moment < 3) iff q < 2/3.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError("hole probability q must lie in [0, 1)")
    a = 1.0 / math.sqrt(1.0 - q)
    p = (1.0 - q) / 2.0
    return SpinFamily(
        kind="discrete",
        support=(-a, 0.0, a),
        weights=(p, q, p),
        label=f"three_point(q={q:g})",
    )


def discrete(values, weights, label: str = "") -> SpinFamily:
    """Finite-support law from (values, weights); rescaled to unit variance.

    Weights are normalised to sum to one.  Symmetry and the kurtosis
    condition are *not* enforced here; run :func:`validate_family`.
    """
    x = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if x.ndim != 1 or x.shape != w.shape or x.size < 2:
        raise ValueError("values and weights must be 1-D arrays of equal length >= 2")
    if np.any(w < 0) or w.sum() <= 0:
        raise ValueError("weights must be nonnegative with positive sum")
    w = w / w.sum()
    order = np.argsort(x)
    x, w = x[order], w[order]
    mean = float(np.dot(w, x))
    var = float(np.dot(w, (x - mean) ** 2))
    if var <= 0:
        raise ValueError("degenerate support: zero variance")
    x = x / math.sqrt(var)
    return SpinFamily(
        kind="discrete",
        support=tuple(float(v) for v in x),
        weights=tuple(float(v) for v in w),
        label=label or "discrete",
    )


# -- operations ------------------------------------------------------------


def cgf(family: SpinFamily, t: float, order: int = 4) -> CgfEval:
    """phi(t) and derivatives up to ``order`` (0..4) at a single point."""
    if not 0 <= order <= 4:
        raise ValueError("order must be in 0..4")
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    vals = family.phi(np.asarray([t], dtype=float), order)
    scalars = [float(np.asarray(v).reshape(-1)[0]) for v in vals]
    scalars += [None] * (4 - order)
    return CgfEval(*scalars)


def cumulant(family: SpinFamily, k: int) -> float:
    """Cumulant P_k of the spin law: P_2 = 1 by normalisation, P_4 = E[sigma^4] - 3."""
    if k % 2 != 0:
        raise ValueError("odd cumulants vanish for symmetric laws; k must be even")
    if k == 2:
        return float(family.moment(2))
    if k == 4:
        return float(family.moment(4) - 3.0 * family.moment(2) ** 2)
    raise ValueError("only cumulants of order 2 and 4 are implemented")


def validate_family(family: SpinFamily, tol: float = 1e-12) -> FamilyValidation:
    """Check symmetry, unit variance and the strict sub-Gaussian kurtosis bound.

    Failures are reported, never raised; a finite support keeps all
    exponential square moments finite automatically.
    """
    failures: list[str] = []
    if family.kind == "uniform":
        var, m4 = 1.0, 9.0 / 5.0
    else:
        x = family.support_array
        w = family.weights_array
        m1 = float(np.dot(w, x))
        var = float(np.dot(w, x**2))
        m4 = float(np.dot(w, x**4))
        # symmetry: every support point must have a mirror with equal weight
        sym = True
        for xi, wi in zip(x, w):
            j = np.nonzero(np.abs(x + xi) <= 1e-12 * max(1.0, abs(xi)))[0]
            if j.size == 0 or abs(w[int(j[0])] - wi) > 1e-12:
                sym = False
                break
        if not sym or abs(m1) > 1e-12:
            failures.append("distribution is not symmetric")
    if abs(var - 1.0) > tol:
        failures.append(f"variance {var!r} differs from 1 beyond {tol:g}")
    if not m4 - 3.0 * var * var < 0.0:
        failures.append(f"fourth moment {m4!r} violates the strict kurtosis bound E[s^4] < 3")
    return FamilyValidation(ok=not failures, failures=tuple(failures), variance=var, fourth_moment=m4)


# -- serialisation ---------------------------------------------------------


def family_to_dict(family: SpinFamily) -> dict:
    if family.kind == "rademacher":
        return {"name": "rademacher"}
    if family.kind == "uniform":
        return {"name": "uniform"}
    if family.label.startswith("three_point"):
        q = float(family.weights[len(family.weights) // 2])
        return {"name": "three_point", "q": q}
    return {
        "name": "discrete",
        "values": list(family.support),
        "weights": list(family.weights),
    }


def family_from_dict(data: dict) -> SpinFamily:
    name = data.get("name")
    if name == "rademacher":
        return rademacher()
    if name == "uniform":
        return uniform_sqrt3()
    if name == "three_point":
        return three_point(float(data["q"]))
    if name == "discrete":
        return discrete(data["values"], data["weights"])
    raise ValueError(f"unknown spin family {name!r}")
