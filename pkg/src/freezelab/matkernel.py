"""Dense symmetric linear algebra and scalar special functions.

Matrices are plain ``numpy.ndarray`` objects; :func:`as_symmetric` is the
single entry point that checks and enforces the symmetric storage invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, InvalidInputError, NumericError

__all__ = [
    "EigenDecomp",
    "as_symmetric",
    "eigh",
    "jacobi_eigh",
    "invert_spd",
    "cholesky",
    "log_gamma",
    "erfc",
]

JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def as_symmetric(m, *, rtol: float = 1e-12) -> np.ndarray:
    """Return a float copy of ``m`` with exactly symmetric storage.

    Asymmetry beyond ``rtol`` (relative to the largest entry) is an error;
    smaller asymmetry is removed by averaging with the transpose.
    """
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    scale = max(float(np.max(np.abs(a))), 1.0)
    if np.max(np.abs(a - a.T)) > rtol * scale:
        raise InvalidInputError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def eigh(m, method: str = "lapack") -> EigenDecomp:
    """Symmetric eigendecomposition with a deterministic sign convention.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` runs
    the cyclic Jacobi solver in :func:`jacobi_eigh`. Each eigenvector is
    normalized so that its largest-magnitude component is positive.
    """
    a = as_symmetric(m)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v = jacobi_eigh(a)
    else:
        raise InvalidInputError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivots, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return EigenDecomp(eigenvalues=w, eigenvectors=v * signs)


def jacobi_eigh(a: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi rotations; returns (eigenvalues, eigenvectors) unsorted."""
    a = as_symmetric(a)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if n == 1 or norm == 0.0:
        return np.diag(a).copy(), v
    threshold = 1e-14 * norm
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(a[mask] ** 2)))
        if off <= threshold:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 1e-18 * norm:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NumericError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def cholesky(m, *, tol: float = 1e-12) -> np.ndarray:
    """Lower-triangular factor of a symmetric positive semidefinite matrix.

    Pivots below ``tol * max(diag)`` are clamped to zero, which leaves a zero
    column for every null direction. A pivot below ``-tol * max(diag)`` means
    the matrix is indefinite and raises :class:`DomainError`.
    """
    a = as_symmetric(m)
    n = a.shape[0]
    cutoff = tol * max(float(np.max(np.diag(a))), 0.0)
    factor = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - factor[j, :j] @ factor[j, :j]
        if pivot < -cutoff:
            raise DomainError(f"matrix is not positive semidefinite (pivot {pivot:.3e} at {j})")
        if pivot <= cutoff:
            continue
        d = math.sqrt(pivot)
        factor[j, j] = d
        factor[j + 1:, j] = (a[j + 1:, j] - factor[j + 1:, :j] @ factor[j, :j]) / d
    return factor


def invert_spd(m) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via Cholesky."""
    a = as_symmetric(m)
    try:
        low = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise DomainError("matrix is not positive definite") from exc
    low_inv = np.linalg.solve(low, np.eye(a.shape[0]))
    inv = low_inv.T @ low_inv
    return 0.5 * (inv + inv.T)


def log_gamma(x: float) -> float:
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def erfc(x: float) -> float:
    return math.erfc(x)
