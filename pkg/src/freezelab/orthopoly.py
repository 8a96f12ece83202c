"""Hermite and Laguerre polynomials: evaluation, zeros, and zero identities.

Hermite polynomials use the physicists' normalization ``H_1(x) = 2x`` with
``H_{n+1} = 2x H_n - 2n H_{n-1}``. Laguerre polynomials are the generalized
``L_n^{(alpha)}`` orthogonal for ``x^alpha e^{-x}`` on the half line.

Zeros are computed by Golub-Welsch (eigenvalues of the Jacobi matrix of the
monic recurrence) followed by a short Newton polish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError
from .matkernel import eigh

__all__ = [
    "MAX_DEGREE",
    "ZeroSet",
    "IdentityEntry",
    "IdentityReport",
    "hermite_eval",
    "laguerre_eval",
    "hermite_zeros",
    "laguerre_zeros",
    "laguerre_zeros_alpha_minus_one",
    "inverse_zero_sum",
    "zero_identity_report",
]

MAX_DEGREE = 200
NEWTON_STEPS = 5
_RESCALE = 1e150


@dataclass(frozen=True)
class ZeroSet:
    family: str
    degree: int
    zeros: np.ndarray
    alpha: float | None = None

    def __len__(self) -> int:
        return self.degree


def _check_degree(n, lo: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidInputError(f"degree must be an integer, got {n!r}")
    if not lo <= n <= MAX_DEGREE:
        raise InvalidInputError(f"degree must lie in [{lo}, {MAX_DEGREE}], got {n}")
    return int(n)


def _check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= -1.0:
        raise InvalidInputError(f"alpha must be finite and > -1, got {alpha}")
    return alpha


def hermite_eval(n: int, x: float) -> tuple[float, float]:
    """Return ``(H_n(x), H_n'(x))`` from the three-term recurrence."""
    if n < 0:
        raise InvalidInputError("degree must be non-negative")
    prev, cur = 0.0, 1.0
    for j in range(n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * j * prev
    return cur, 2.0 * n * prev


def laguerre_eval(n: int, alpha: float, x: float) -> float:
    """Return ``L_n^{(alpha)}(x)``; ``alpha = -1`` is allowed here."""
    if n < 0:
        raise InvalidInputError("degree must be non-negative")
    if alpha < -1.0:
        raise InvalidInputError("alpha must be >= -1 for evaluation")
    prev, cur = 0.0, 1.0
    for j in range(n):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur


def _hermite_newton_step(n: int, x: float) -> float:
    # orthonormal recurrence h_{j+1} = (sqrt2 x h_j - sqrt(j) h_{j-1}) / sqrt(j+1), h_n' = sqrt(2n) h_{n-1}
    prev, cur = 0.0, 1.0
    for j in range(n):
        prev, cur = cur, (math.sqrt(2.0) * x * cur - math.sqrt(j) * prev) / math.sqrt(j + 1)
        if abs(cur) > _RESCALE:
            prev, cur = prev / _RESCALE, cur / _RESCALE
    return cur / (math.sqrt(2.0 * n) * prev)


def _laguerre_newton_step(n: int, alpha: float, x: float) -> float:
    # x L_n' = n L_n - (n + alpha) L_{n-1}
    prev, cur = 0.0, 1.0
    for j in range(n):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
        if abs(cur) > _RESCALE:
            prev, cur = prev / _RESCALE, cur / _RESCALE
    deriv = (n * cur - (n + alpha) * prev) / x
    return cur / deriv


def _polish(zeros: np.ndarray, step) -> np.ndarray:
    out = zeros.copy()
    for i, z in enumerate(out):
        for _ in range(NEWTON_STEPS):
            dz = step(z)
            if not math.isfinite(dz):
                break
            z -= dz
            if abs(dz) <= 1e-16 * max(1.0, abs(z)):
                break
        out[i] = z
    return out


def hermite_zeros(n: int) -> ZeroSet:
    """Zeros of ``H_n`` in strictly descending order."""
    n = _check_degree(n)
    if n == 1:
        return ZeroSet("hermite", 1, np.zeros(1))
    off = np.sqrt(np.arange(1, n) / 2.0)
    jac = np.diag(off, 1) + np.diag(off, -1)
    nodes = eigh(jac).eigenvalues[::-1]
    nodes = _polish(nodes, lambda x: _hermite_newton_step(n, x))
    # enforce exact symmetry about the origin
    nodes = 0.5 * (nodes - nodes[::-1])
    return ZeroSet("hermite", n, nodes)


def laguerre_zeros(n: int, alpha: float) -> ZeroSet:
    """Zeros of ``L_n^{(alpha)}``, all positive, in strictly descending order."""
    n = _check_degree(n)
    alpha = _check_alpha(alpha)
    k = np.arange(n)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(np.arange(1, n) * (np.arange(1, n) + alpha))
    jac = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    nodes = eigh(jac).eigenvalues[::-1]
    nodes = _polish(nodes, lambda x: _laguerre_newton_step(n, alpha, x))
    return ZeroSet("laguerre", n, nodes, alpha=alpha)


def laguerre_zeros_alpha_minus_one(n: int) -> ZeroSet:
    """Zeros of ``L_n^{(-1)}(x) = -(x/n) L_{n-1}^{(1)}(x)``: those of ``L_{n-1}^{(1)}`` then 0."""
    n = _check_degree(n)
    inner = laguerre_zeros(n - 1, 1.0).zeros if n > 1 else np.zeros(0)
    return ZeroSet("laguerre", n, np.concatenate([inner, [0.0]]), alpha=-1.0)


def inverse_zero_sum(n: int, alpha: float) -> float:
    """Sum of reciprocals of the zeros of ``L_n^{(alpha)}``; equals ``n / (alpha + 1)``."""
    return float(np.sum(1.0 / laguerre_zeros(n, alpha).zeros))


@dataclass(frozen=True)
class IdentityEntry:
    name: str
    value: float
    target: float
    asserted: bool = True
    note: str = ""

    @property
    def deviation(self) -> float:
        return abs(self.value - self.target)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "target": self.target,
            "deviation": self.deviation,
            "asserted": self.asserted,
            "note": self.note,
        }


@dataclass(frozen=True)
class IdentityReport:
    family: str
    degree: int
    parameter: float | None
    entries: list[IdentityEntry] = field(default_factory=list)

    def __getitem__(self, name: str) -> IdentityEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def passed(self, tol: float) -> bool:
        return all(e.deviation <= tol for e in self.entries if e.asserted)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "parameter": self.parameter,
            "entries": [e.as_dict() for e in self.entries],
        }


def _sum_j_log_j(n: int, offset: float = 0.0) -> float:
    return sum((offset + j) * math.log(offset + j) for j in range(1, n + 1) if offset + j > 0)


def zero_identity_report(family: str, n: int, nu: float | None = None) -> IdentityReport:
    """Evaluate the scalar identities satisfied by the zeros.

    ``family="hermite"``: sum of squared zeros and the pairwise log-potential.
    ``family="laguerre"``: with ``r_i^2 = 2 z_i`` for the zeros ``z_i`` of
    ``L_n^{(nu-1)}``, the squared norm of ``r`` (computed value against
    ``2n(n+nu-1)``, with the often quoted ``n(n+nu-1)`` recorded as an
    unasserted entry) and the weighted log-potential.
    """
    family = family.lower()
    if family == "hermite":
        z = hermite_zeros(n).zeros
        diffs = z[:, None] - z[None, :]
        iu = np.triu_indices(n, 1)
        potential = 2.0 * float(np.sum(np.log(diffs[iu])))
        entries = [
            IdentityEntry("sum_sq", float(np.sum(z * z)), n * (n - 1) / 2.0),
            IdentityEntry(
                "log_potential", potential, -n * (n - 1) / 2.0 * math.log(2.0) + _sum_j_log_j(n)
            ),
        ]
        return IdentityReport("hermite", n, None, entries)
    if family == "laguerre":
        if nu is None or not nu > 0:
            raise InvalidInputError("laguerre identities need nu > 0")
        nu = float(nu)
        r_sq = 2.0 * laguerre_zeros(n, nu - 1.0).zeros
        norm_sq = float(np.sum(r_sq))
        diffs = r_sq[:, None] - r_sq[None, :]
        iu = np.triu_indices(n, 1)
        potential = (
            -0.5 * norm_sq + nu * float(np.sum(np.log(r_sq))) + 2.0 * float(np.sum(np.log(diffs[iu])))
        )
        target = (
            n * (n + nu - 1) * (math.log(2.0) - 1.0)
            + _sum_j_log_j(n)
            + sum((nu + j - 1) * math.log(nu + j - 1) for j in range(1, n + 1))
        )
        entries = [
            IdentityEntry("norm_sq", norm_sq, 2.0 * n * (n + nu - 1)),
            IdentityEntry(
                "norm_sq_printed",
                norm_sq,
                n * (n + nu - 1),
                asserted=False,
                note="printed value n(n+nu-1) is half the computed squared norm",
            ),
            IdentityEntry("log_potential", potential, target),
        ]
        return IdentityReport("laguerre", n, nu, entries)
    raise InvalidInputError(f"unknown family {family!r}")
