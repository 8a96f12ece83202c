"""Freezing-regime objects: peak vectors, frozen covariances, the anisotropic
rescaling maps and the half-space limit laws for root systems A, B and D.

The peak vector of type A is the vector ``z`` of Hermite zeros; for type B it
is ``r`` with ``r_i^2 = 2 z_i`` for the zeros of ``L_N^{(nu-1)}``; for type D
it is ``r`` built from the zeros of ``L_{N-1}^{(1)}`` padded with a zero.

Limit laws are mixtures over the subordinator ``S`` (inverse Gaussian with
``t = sqrt(2)``) of Gaussians ``N(sqrt(S) c, S A Sigma A)`` where ``c`` is the
mixture center and ``A`` projects onto ``c``'s orthogonal complement. For
type A the Bessel ensemble freezes around ``sqrt(2k) z``, so ``c = sqrt(2) z``;
for types B and D it freezes around ``sqrt(beta) r`` and ``c = r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import SQRT2, MultiplicitySpec, in_chamber, log_density, make_law, mode_A
from .exceptions import DomainError, InvalidInputError
from .matkernel import EigenDecomp, eigh, invert_spd
from .orthopoly import hermite_zeros, laguerre_zeros, laguerre_zeros_alpha_minus_one

__all__ = [
    "LIMIT_SYSTEMS",
    "PeakVector",
    "FrozenCovariance",
    "LimitLaw",
    "peak_vector",
    "w_objective",
    "stationarity_residual",
    "sigma_inv",
    "sigma_closed_A",
    "sigma_cauchy_relation_A",
    "sigma_cauchy_printed_A",
    "rescale",
    "limit_law",
    "limit_density",
    "limit_density_mixture",
    "ratio_constant_A",
    "ratio_limit_A",
    "cauchy_local_precision_A",
]

LIMIT_SYSTEMS = ("A", "B", "D", "B-one-sided")


def _check_n(n, lo: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < lo:
        raise InvalidInputError(f"N must be an integer >= {lo}, got {n!r}")
    return int(n)


def _check_nu(nu) -> float:
    if nu is None:
        raise InvalidInputError("type B needs nu > 0")
    nu = float(nu)
    if not (nu > 0 and math.isfinite(nu)):
        raise InvalidInputError(f"nu must be finite and > 0, got {nu}")
    return nu


@dataclass(frozen=True)
class PeakVector:
    system: str
    n: int
    coords: np.ndarray
    nu: float | None = None

    @property
    def norm_sq(self) -> float:
        return float(self.coords @ self.coords)

    @property
    def unit(self) -> np.ndarray:
        return self.coords / math.sqrt(self.norm_sq)


def peak_vector(system: str, n: int, nu: float | None = None) -> PeakVector:
    system = str(system).upper()
    if system == "A":
        n = _check_n(n, 2)
        return PeakVector("A", n, hermite_zeros(n).zeros.copy())
    if system == "B":
        n = _check_n(n, 1)
        nu = _check_nu(nu)
        r = np.sqrt(2.0 * laguerre_zeros(n, nu - 1.0).zeros)
        return PeakVector("B", n, r, nu=nu)
    if system == "D":
        n = _check_n(n, 2)
        r = np.sqrt(2.0 * laguerre_zeros_alpha_minus_one(n).zeros)
        return PeakVector("D", n, r)
    raise InvalidInputError(f"unknown root system {system!r}")


def w_objective(system: str, y, nu: float | None = None) -> float:
    """Log-potential maximized by the peak vector.

    A: ``sum_{i<j} ln(y_i - y_j) - |y|^2/2``.
    B: ``2 sum_{i<j} ln(y_i^2 - y_j^2) + 2 nu sum ln y_i - |y|^2/2``.
    D: the B objective without the ``nu`` term.
    """
    system = str(system).upper()
    y = np.asarray(y, dtype=float)
    iu, ju = np.triu_indices(len(y), 1)
    if system == "A":
        gaps = y[iu] - y[ju]
        if np.any(gaps <= 0) or not np.all(np.isfinite(y)):
            raise DomainError("y must be strictly decreasing")
        return float(np.sum(np.log(gaps)) - 0.5 * y @ y)
    if system in ("B", "D"):
        sq = y * y
        gaps = sq[iu] - sq[ju]
        if np.any(gaps <= 0) or not np.all(np.isfinite(y)):
            raise DomainError("y must have strictly decreasing squares")
        out = 2.0 * float(np.sum(np.log(gaps))) - 0.5 * float(y @ y)
        if system == "B":
            nu = _check_nu(nu)
            if np.any(y <= 0):
                raise DomainError("type B objective needs positive coordinates")
            out += 2.0 * nu * float(np.sum(np.log(y)))
        return out
    raise InvalidInputError(f"unknown root system {system!r}")


def stationarity_residual(peak: PeakVector) -> np.ndarray:
    """Per-coordinate residual of the fixed-point equations characterizing the peak.

    A: ``z_i - sum_{j != i} 1/(z_i - z_j)``. B: ``r_i/2 - sum_{j != i} 2 r_i/(r_i^2 - r_j^2)
    - nu/r_i``. D: the B equations with ``nu = 2`` on the first ``N-1`` coordinates.
    """
    c = peak.coords
    if peak.system == "A":
        diff = c[:, None] - c[None, :]
        np.fill_diagonal(diff, np.inf)
        return c - np.sum(1.0 / diff, axis=1)
    if peak.system == "B":
        r, nu = c, peak.nu
    else:
        r, nu = c[:-1], 2.0
    sq = r * r
    diff = sq[:, None] - sq[None, :]
    np.fill_diagonal(diff, np.inf)
    return 0.5 * r - np.sum(2.0 * r[:, None] / diff, axis=1) - nu / r


@dataclass(frozen=True)
class FrozenCovariance:
    system: str
    flavor: str
    sigma_inv: np.ndarray
    sigma: np.ndarray
    eigen: EigenDecomp

    @property
    def det_sigma_inv(self) -> float:
        return float(np.prod(self.eigen.eigenvalues))

    @property
    def logdet_sigma_inv(self) -> float:
        return float(np.sum(np.log(self.eigen.eigenvalues)))


def _pair_matrix_A(z: np.ndarray) -> np.ndarray:
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, np.inf)
    off = -1.0 / diff**2
    out = off.copy()
    np.fill_diagonal(out, 1.0 - np.sum(off, axis=1))
    return out


def _pair_matrix_B(r: np.ndarray, nu: float) -> np.ndarray:
    minus = r[:, None] - r[None, :]
    plus = r[:, None] + r[None, :]
    np.fill_diagonal(minus, np.inf)
    np.fill_diagonal(plus, np.inf)
    out = 2.0 / plus**2 - 2.0 / minus**2
    diag = 1.0 + 2.0 * np.sum(1.0 / minus**2, axis=1) + 2.0 * np.sum(1.0 / plus**2, axis=1)
    if nu:
        diag = diag + 2.0 * nu / r**2
    np.fill_diagonal(out, diag)
    return out


def _frozen(system: str, flavor: str, s_inv: np.ndarray) -> FrozenCovariance:
    s_inv = 0.5 * (s_inv + s_inv.T)
    return FrozenCovariance(system, flavor, s_inv, invert_spd(s_inv), eigh(s_inv))


def sigma_inv(system: str, flavor: str, n: int, nu: float | None = None) -> FrozenCovariance:
    """Inverse covariance of the freezing CLT, with its inverse and spectrum.

    Available combinations: A/bessel, A/cauchy, B/bessel, D/bessel.
    """
    system, flavor = str(system).upper(), str(flavor).lower()
    if flavor not in ("bessel", "cauchy"):
        raise InvalidInputError(f"unknown flavor {flavor!r}")
    if system == "A":
        z = peak_vector("A", n).coords
        s = _pair_matrix_A(z)
        if flavor == "cauchy":
            s = (n + 1) * (s + 2.0 * np.outer(z, z) / (z @ z))
        return _frozen("A", flavor, s)
    if flavor != "bessel":
        raise InvalidInputError(f"no frozen Cauchy covariance for type {system}")
    if system == "B":
        peak = peak_vector("B", n, nu)
        return _frozen("B", flavor, _pair_matrix_B(peak.coords, peak.nu))
    if system == "D":
        r = peak_vector("D", n).coords
        return _frozen("D", flavor, _pair_matrix_B(r, 0.0))
    raise InvalidInputError(f"unknown root system {system!r}")


def _normalized_hermite_table(n: int, z: np.ndarray) -> np.ndarray:
    """Rows ``k = 0..n-1`` of ``H_k(z) / sqrt(2^k k!)`` for every zero."""
    table = np.zeros((n, len(z)))
    table[0] = 1.0
    if n > 1:
        table[1] = SQRT2 * z
    for k in range(1, n - 1):
        table[k + 1] = (SQRT2 * z * table[k] - math.sqrt(k) * table[k - 1]) / math.sqrt(k + 1)
    return table


def _closed_form_core(n: int) -> np.ndarray:
    """Unsigned ratio of the dual-orthogonal-polynomial expression (no ``(-1)^{i+j}``)."""
    z = hermite_zeros(n).zeros
    h = _normalized_hermite_table(n, z)
    weights = 1.0 / (n - np.arange(n))
    num = (h * weights[:, None]).T @ h
    norms = np.sqrt(np.sum(h * h, axis=0))
    return num / np.outer(norms, norms)


def _alternating_signs(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.where((idx[:, None] + idx[None, :]) % 2 == 0, 1.0, -1.0)


def sigma_closed_A(n: int) -> np.ndarray:
    """Closed-form frozen covariance of type A from Hermite values at the zeros."""
    n = _check_n(n, 2)
    out = _alternating_signs(n) * _closed_form_core(n)
    return 0.5 * (out + out.T)


def sigma_cauchy_relation_A(n: int) -> np.ndarray:
    """``(Sigma - z z^T / (4 |z|^2)) / (N+1)``, the inverse of the Cauchy matrix."""
    n = _check_n(n, 2)
    z = hermite_zeros(n).zeros
    sigma = sigma_inv("A", "bessel", n).sigma
    return (sigma - np.outer(z, z) / (4.0 * (z @ z))) / (n + 1)


def sigma_cauchy_printed_A(n: int) -> np.ndarray:
    """Variant where the alternating sign also multiplies the ``z_i z_j`` term.

    Kept for comparison only: it disagrees with the direct inverse off the
    diagonal (1/24 against 1/8 at N = 2).
    """
    n = _check_n(n, 2)
    z = hermite_zeros(n).zeros
    core = _closed_form_core(n) - np.outer(z, z) / (2.0 * n * (n - 1))
    return _alternating_signs(n) * core / (n + 1)


def _peak_coords(peak) -> np.ndarray:
    if isinstance(peak, PeakVector):
        return peak.coords
    return np.asarray(peak, dtype=float)


def rescale(y, k: float, peak, direction: str = "forward") -> np.ndarray:
    """Shrink (forward) or stretch (inverse) the peak component of ``y`` by ``sqrt(k)``.

    forward: ``y + (1/sqrt(k) - 1) p(y)``; inverse: ``y + (sqrt(k) - 1) p(y)``,
    where ``p`` is the orthogonal projection onto the peak direction.
    """
    k = float(k)
    if not (k >= 1.0 and math.isfinite(k)):
        raise InvalidInputError(f"scale k must be finite and >= 1, got {k}")
    c = _peak_coords(peak)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise InvalidInputError("y must be finite")
    if direction == "forward":
        factor = 1.0 / math.sqrt(k) - 1.0
    elif direction == "inverse":
        factor = math.sqrt(k) - 1.0
    else:
        raise InvalidInputError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    coef = (y @ c) / (c @ c)
    return y + factor * np.multiply.outer(coef, c)


@dataclass(frozen=True)
class LimitLaw:
    """Freezing limit of the rescaled Cauchy-Bessel laws."""

    system: str
    n: int
    peak: PeakVector
    bessel_cov: FrozenCovariance
    projection_perp: np.ndarray
    peak_norm_sq: float
    center_scale: float
    nu: float | None = None

    @property
    def one_sided(self) -> bool:
        return self.system == "B-one-sided"

    @property
    def center(self) -> np.ndarray:
        return self.center_scale * self.peak.coords

    @property
    def center_norm_sq(self) -> float:
        return self.center_scale**2 * self.peak_norm_sq

    @property
    def mixture_cov(self) -> np.ndarray:
        a = self.projection_perp
        out = a @ self.bessel_cov.sigma @ a
        return 0.5 * (out + out.T)

    @property
    def peak_eigenvalue(self) -> float:
        u = self.peak.unit
        return float(u @ self.bessel_cov.sigma_inv @ u)

    def in_support(self, y) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        ok = np.all(np.isfinite(y), axis=1) & (y @ self.peak.coords > 0)
        if self.one_sided:
            ok &= y[:, -1] > 0
        return ok

    @property
    def log_constant(self) -> float:
        """Log normalizing constant of the closed-form density."""
        q, n = self.center_norm_sq, self.n
        lam = self.peak_eigenvalue
        out = (
            math.log(2.0)
            + 0.5 * n * math.log(q)
            - 0.5 * n * math.log(2 * math.pi)
            + 0.5 * (self.bessel_cov.logdet_sigma_inv - math.log(lam))
            + 0.5 * lam * q
        )
        return out + (math.log(2.0) if self.one_sided else 0.0)


def limit_law(system: str, n: int, nu: float | None = None) -> LimitLaw:
    system = str(system).upper()
    if system not in ("A", "B", "D", "B-ONE-SIDED"):
        raise InvalidInputError(f"unknown limit system {system!r}")
    if system == "B-ONE-SIDED":
        system = "B-one-sided"
    base = "D" if system == "B-one-sided" else system
    if base in ("A", "D"):
        n = _check_n(n, 2)
    peak = peak_vector(base, n, nu if base == "B" else None)
    cov = sigma_inv(base, "bessel", n, peak.nu)
    u = peak.unit
    proj = np.eye(peak.n) - np.outer(u, u)
    proj = 0.5 * (proj + proj.T)
    return LimitLaw(
        system=system,
        n=peak.n,
        peak=peak,
        bessel_cov=cov,
        projection_perp=proj,
        peak_norm_sq=peak.norm_sq,
        center_scale=SQRT2 if base == "A" else 1.0,
        nu=peak.nu,
    )


def _support_check(law: LimitLaw, y) -> np.ndarray:
    y2 = np.atleast_2d(np.asarray(y, dtype=float))
    if y2.shape[1] != law.n:
        raise InvalidInputError(f"expected vectors of length {law.n}, got {y2.shape[1]}")
    if not np.all(law.in_support(y2)):
        raise DomainError("point(s) not in the interior of the limit law's support")
    return y2


def limit_density(law: LimitLaw, y, log: bool = False):
    """Closed-form density of the limit law.

    With ``u = <y, c>/|c|``, ``q = |c|^2`` for the mixture center ``c``::

        f(y) = K u^{-(N+1)} exp(-q (y^T Sigma^{-1} y + 1) / (2 u^2))

    where ``K`` (see :attr:`LimitLaw.log_constant`) depends only on ``q``,
    ``det Sigma^{-1}`` and the eigenvalue of ``Sigma^{-1}`` along ``c``.
    The one-sided law carries an extra factor 2 on its quarter space.
    """
    arr = np.asarray(y, dtype=float)
    y2 = _support_check(law, arr)
    q = law.center_norm_sq
    u = y2 @ law.peak.unit
    quad = np.einsum("ij,jk,ik->i", y2, law.bessel_cov.sigma_inv, y2)
    out = law.log_constant - (law.n + 1) * np.log(u) - q * (quad + 1.0) / (2.0 * u * u)
    if not log:
        out = np.exp(out)
    return float(out[0]) if arr.ndim == 1 else out


def limit_density_mixture(law: LimitLaw, y, log: bool = False):
    """Density of the subordinated Gaussian mixture, derived without using
    that the center is an eigenvector of ``Sigma^{-1}``.

    The radial coordinate ``u`` has the law of ``|c| sqrt(S)`` and, given
    ``u``, the orthogonal part is ``N(0, (u^2/q) A Sigma A)`` on ``c^perp``.
    """
    arr = np.asarray(y, dtype=float)
    y2 = _support_check(law, arr)
    n, q = law.n, law.center_norm_sq
    unit = law.peak.unit
    basis = eigh(law.projection_perp).eigenvectors[:, 1:]
    m = basis.T @ law.bessel_cov.sigma @ basis
    m_inv = invert_spd(m)
    logdet_m = float(np.linalg.slogdet(m)[1])
    u = y2 @ unit
    w = y2 @ basis
    quad = np.einsum("ij,jk,ik->i", w, m_inv, w)
    log_fu = math.log(2.0) + 0.5 * math.log(q) - 0.5 * math.log(2 * math.pi) - 2 * np.log(u) - q / (2 * u * u)
    log_fw = -0.5 * (n - 1) * np.log(2 * math.pi * u * u / q) - 0.5 * logdet_m - q * quad / (2 * u * u)
    out = log_fu + log_fw + (math.log(2.0) if law.one_sided else 0.0)
    if not log:
        out = np.exp(out)
    return float(out[0]) if arr.ndim == 1 else out


def ratio_constant_A(n: int, k: float, x) -> float:
    """Normalized ratio of the centered Cauchy-Bessel density to ``N(0, Sigma_Cauchy)``.

    Returns ``f~_k(x) / f(x) * sqrt(k) (N+1)^{N/2} sqrt(N(N-1)) e^{(N+1)/2}``
    with ``f~_k`` the density shifted to its mode and ``f`` the normal density
    with precision ``sigma_inv("A", "cauchy", N)``. This quantity does not tend
    to 1: its limit is :func:`ratio_limit_A`.
    """
    n = _check_n(n, 2)
    k = float(k)
    if not k > 0:
        raise InvalidInputError("k must be > 0")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise InvalidInputError(f"x must have length {n}")
    shifted = x + mode_A(n, k)
    if not in_chamber("A", shifted)[0]:
        raise DomainError("shifted point lies outside the type A chamber")
    law = make_law(MultiplicitySpec.type_a(n, k), "cauchy", SQRT2)
    log_shifted = log_density(law, shifted)
    cov = sigma_inv("A", "cauchy", n)
    log_normal = (
        -0.5 * n * math.log(2 * math.pi) + 0.5 * cov.logdet_sigma_inv - 0.5 * x @ cov.sigma_inv @ x
    )
    log_scale = 0.5 * math.log(k) + 0.5 * n * math.log(n + 1) + 0.5 * math.log(n * (n - 1)) + (n + 1) / 2.0
    return math.exp(log_shifted - log_normal + log_scale)


def cauchy_local_precision_A(n: int) -> np.ndarray:
    """Curvature of ``-log f~_k`` at the mode as ``k`` grows (type A, Cauchy flavor).

    Equals ``(N+1)(Sigma^{-1} - 2 z z^T / |z|^2)``: positive semidefinite with
    a null direction along ``z``, because the subordinator spreads the mass
    along the peak direction on the scale ``sqrt(k)``.
    """
    n = _check_n(n, 2)
    z = peak_vector("A", n).unit
    out = (n + 1) * (sigma_inv("A", "bessel", n).sigma_inv - 2.0 * np.outer(z, z))
    return 0.5 * (out + out.T)


def ratio_limit_A(n: int, x) -> float:
    """Large-``k`` limit of :func:`ratio_constant_A`: ``(N+1)^{(N+1)/2} exp(2(N+1)<x, z/|z|>^2)``."""
    n = _check_n(n, 2)
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise InvalidInputError(f"x must have length {n}")
    proj = float(x @ peak_vector("A", n).unit)
    return math.exp(0.5 * (n + 1) * math.log(n + 1) + 2.0 * (n + 1) * proj * proj)
