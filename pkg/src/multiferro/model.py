"""Model specification, Hamiltonian and the interaction-matrix decomposition.

A model is nu >= 2 parties of spins with relative sizes alpha_a summing to
one.  Spins interact only across parties; per configuration with party
magnetisations m_a the energy is

    H = -N * sum_{a<b} alpha_a alpha_b m_a m_b - N * sum_a h_a alpha_a m_a.

The pair sum runs over unordered pairs a < b.  The coupling matrix J
(alpha_a alpha_b off the diagonal, zero on it) is indefinite; adding the
counterterm c*diag(alpha^2) yields Jc = c*diag(alpha^2) - J, positive
semidefinite iff c >= nu - 1, with an explicit square root Jc = P^T P.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import spins as _spins
from .spins import SpinFamily

__all__ = [
    "ModelSpec",
    "InteractionDecomposition",
    "hamiltonian",
    "interaction_matrices",
    "uniform_parties",
    "bipartite_spec",
]


@dataclass(frozen=True)
class ModelSpec:
    """Full multipartite model: sizes, fields, temperature and spin laws."""

    alpha: tuple[float, ...]
    beta: float
    h: tuple[float, ...] = ()
    families: tuple[SpinFamily, ...] = ()

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        if len(alpha) < 2:
            raise ValueError("a multipartite model needs nu >= 2 parties")
        if any(not 0.0 < a < 1.0 for a in alpha):
            raise ValueError("every alpha_a must lie strictly in (0, 1)")
        if abs(sum(alpha) - 1.0) > 1e-12:
            raise ValueError("party weights alpha must sum to 1 within 1e-12")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        h = tuple(float(v) for v in self.h) if self.h else (0.0,) * len(alpha)
        families = self.families or tuple(_spins.rademacher() for _ in alpha)
        if len(h) != len(alpha) or len(families) != len(alpha):
            raise ValueError("alpha, h and families must have matching length")
        for fam in families:
            report = _spins.validate_family(fam)
            if not report.ok:
                raise ValueError(f"inadmissible spin family {fam.label!r}: {report.failures}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "families", families)

    @property
    def nu(self) -> int:
        return len(self.alpha)

    @property
    def alpha_array(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)

    @property
    def h_array(self) -> np.ndarray:
        return np.asarray(self.h, dtype=float)

    @property
    def hull_max(self) -> np.ndarray:
        """Per-party maximal magnetisation (support hull radius)."""
        return np.asarray([f.hull_max for f in self.families], dtype=float)

    def with_beta(self, beta: float) -> "ModelSpec":
        return replace(self, beta=float(beta))

    def with_h(self, h) -> "ModelSpec":
        return replace(self, h=tuple(float(v) for v in h))

    def in_hull(self, m, margin: float = 0.0) -> bool:
        m = np.asarray(m, dtype=float)
        return bool(np.all(np.abs(m) <= self.hull_max + margin))

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "alpha": list(self.alpha),
            "h": list(self.h),
            "beta": self.beta,
            "families": [_spins.family_to_dict(f) for f in self.families],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        alpha = data["alpha"]
        if "nu" in data and int(data["nu"]) != len(alpha):
            raise ValueError("nu does not match the length of alpha")
        families = tuple(_spins.family_from_dict(d) for d in data.get("families", []))
        return cls(
            alpha=tuple(alpha),
            beta=float(data.get("beta", 0.0)),
            h=tuple(data.get("h", [0.0] * len(alpha))),
            families=families,
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        return cls.from_dict(json.loads(text))


def uniform_parties(nu: int, beta: float, h=None, family: SpinFamily | None = None) -> ModelSpec:
    """Equal-weight model with the same spin law in every party."""
    fam = family or _spins.rademacher()
    alpha = (1.0 / nu,) * nu
    hh = tuple(h) if h is not None else (0.0,) * nu
    return ModelSpec(alpha=alpha, beta=beta, h=hh, families=(fam,) * nu)


def bipartite_spec(
    alpha1: float,
    beta: float,
    h=(0.0, 0.0),
    families: tuple[SpinFamily, SpinFamily] | None = None,
) -> ModelSpec:
    """Two-party model with first-party weight alpha1."""
    fams = families or (_spins.rademacher(), _spins.rademacher())
    return ModelSpec(alpha=(alpha1, 1.0 - alpha1), beta=beta, h=tuple(h), families=fams)


def hamiltonian(spec: ModelSpec, m, N: int) -> float:
    """Energy of a magnetisation state at total size N (unordered pair sum)."""
    m = np.asarray(m, dtype=float)
    if m.shape != (spec.nu,):
        raise ValueError(f"magnetisation must have shape ({spec.nu},)")
    if N < spec.nu:
        raise ValueError("total spin count must be at least nu")
    if not spec.in_hull(m, margin=1e-12):
        raise ValueError("magnetisation outside the spin support hull")
    a = spec.alpha_array
    am = a * m
    pair = 0.5 * ((am.sum()) ** 2 - (am**2).sum())  # sum_{a<b} alpha_a alpha_b m_a m_b
    return float(-N * pair - N * np.dot(spec.h_array, am))


@dataclass(frozen=True)
class InteractionDecomposition:
    """Coupling matrix, counterterm completion and its square-root factor.

    Jc = c*diag(alpha^2) - J = P^T P = A Tc A with A = diag(alpha) and Tc
    the matrix with c on the diagonal and -1 elsewhere; Tc has eigenvalue
    c+1-nu on the constant vector and c+1 with multiplicity nu-1.
    """

    J: np.ndarray
    Jc: np.ndarray
    Tc: np.ndarray
    P: np.ndarray
    tc_eigenvalues: np.ndarray
    c: float


def interaction_matrices(spec: ModelSpec, c: float) -> InteractionDecomposition:
    """Build J, Jc, Tc and the explicit factor P (rows v^1..v^nu).

    Refuses c < nu - 1, where Jc stops being positive semidefinite and no
    real factorisation exists.
    """
    nu = spec.nu
    if c < nu - 1 - 1e-15:
        raise ValueError(
            f"factorisation requires c >= nu - 1 = {nu - 1}; got c = {c!r} "
            "(Jc is not positive semidefinite below that threshold)"
        )
    a = spec.alpha_array
    J = np.outer(a, a)
    np.fill_diagonal(J, 0.0)
    Jc = c * np.diag(a**2) - J
    Tc = np.full((nu, nu), -1.0)
    np.fill_diagonal(Tc, c)

    P = np.zeros((nu, nu))
    P[0] = math.sqrt(max(c + 1 - nu, 0.0)) / math.sqrt(nu) * a
    for k in range(2, nu + 1):
        row = np.zeros(nu)
        row[: k - 1] = a[: k - 1]
        row[k - 1] = (1 - k) * a[k - 1]
        P[k - 1] = math.sqrt(c + 1) / math.sqrt(k * (k - 1)) * row

    eigs = np.concatenate(([c + 1 - nu], np.full(nu - 1, c + 1.0)))
    return InteractionDecomposition(J=J, Jc=Jc, Tc=Tc, P=P, tc_eigenvalues=eigs, c=float(c))
