"""Log-densities of the beta-Hermite/Laguerre ensembles and their Cauchy-Bessel
counterparts for the root systems A, B and D, started in the origin.

Two flavors share one weight ``w_k`` and exponent ``gamma``:

* ``"bessel"``: ``c_k t^{-gamma-N/2} exp(-|y|^2 / 2t) w_k(y)``
* ``"cauchy"``: ``c_k t Gamma(p) / sqrt(4 pi) (4 / (t^2 + 2|y|^2))^p w_k(y)``
  with ``p = gamma + (N+1)/2``; the Bessel law subordinated by the
  inverse Gaussian (one-sided 1/2-stable) law with parameter ``t``.

Every constant is assembled in log space from ``lgamma`` terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, InvalidInputError
from .matkernel import log_gamma
from .orthopoly import hermite_zeros

__all__ = [
    "SQRT2",
    "SYSTEMS",
    "FLAVORS",
    "MultiplicitySpec",
    "EnsembleLaw",
    "make_law",
    "log_density",
    "log_weight",
    "in_chamber",
    "check_chamber",
    "log_selberg_constant",
    "log_cauchy_constant_sqrt2",
    "mode_A",
    "cog_marginal_cdf",
    "weyl_group_order",
    "fold_to_chamber",
]

SQRT2 = math.sqrt(2.0)
SYSTEMS = ("A", "B", "D")
FLAVORS = ("bessel", "cauchy")


@dataclass(frozen=True)
class MultiplicitySpec:
    """Root system tag, particle number and multiplicities.

    Type A and D use the single multiplicity ``k``; type B uses ``(k1, k2)``,
    often parameterized as ``(nu * beta, beta)``.
    """

    system: str
    n: int
    k: float = 0.0
    k1: float = 0.0
    k2: float = 0.0

    def __post_init__(self):
        system = str(self.system).upper()
        if system not in SYSTEMS:
            raise InvalidInputError(f"unknown root system {self.system!r}")
        object.__setattr__(self, "system", system)
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"N must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("k", "k1", "k2"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise InvalidInputError(f"multiplicity {name} must be finite and >= 0, got {value}")
            object.__setattr__(self, name, value)
        if system == "B" and self.k != 0.0:
            raise InvalidInputError("type B uses k1 and k2, not k")
        if system != "B" and (self.k1 != 0.0 or self.k2 != 0.0):
            raise InvalidInputError(f"type {system} uses k, not k1/k2")

    @classmethod
    def type_a(cls, n: int, k: float) -> "MultiplicitySpec":
        return cls("A", n, k=k)

    @classmethod
    def type_b(cls, n: int, k1: float, k2: float) -> "MultiplicitySpec":
        return cls("B", n, k1=k1, k2=k2)

    @classmethod
    def type_b_nu(cls, n: int, nu: float, beta: float) -> "MultiplicitySpec":
        return cls("B", n, k1=nu * beta, k2=beta)

    @classmethod
    def type_d(cls, n: int, k: float) -> "MultiplicitySpec":
        return cls("D", n, k=k)

    @property
    def nu(self) -> float | None:
        if self.system == "B" and self.k2 > 0:
            return self.k1 / self.k2
        return None

    @property
    def gamma(self) -> float:
        """Homogeneity exponent: the weight has degree ``2 * gamma``."""
        n = self.n
        if self.system == "A":
            return self.k * n * (n - 1) / 2.0
        if self.system == "B":
            return self.k2 * n * (n - 1) + self.k1 * n
        return self.k * n * (n - 1)


@dataclass(frozen=True)
class EnsembleLaw:
    spec: MultiplicitySpec
    flavor: str
    t: float
    gamma: float
    log_norm: float

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def power(self) -> float:
        """Exponent ``gamma + (N+1)/2`` of the Cauchy radial factor."""
        return self.gamma + (self.spec.n + 1) / 2.0


def weyl_group_order(system: str, n: int) -> int:
    if system == "A":
        return math.factorial(n)
    if system == "B":
        return 2**n * math.factorial(n)
    return 2 ** (n - 1) * math.factorial(n)


def log_selberg_constant(spec: MultiplicitySpec) -> float:
    """``log c_k``: inverse of the integral of ``exp(-|y|^2/2) w_k`` over the chamber."""
    n = spec.n
    lg = log_gamma
    if spec.system == "A":
        k = spec.k
        out = math.log(math.factorial(n)) - 0.5 * n * math.log(2 * math.pi)
        return out + sum(lg(1 + k) - lg(1 + j * k) for j in range(1, n + 1))
    if spec.system == "B":
        k1, k2 = spec.k1, spec.k2
        out = math.log(math.factorial(n)) - n * (k1 + (n - 1) * k2 - 0.5) * math.log(2.0)
        return out + sum(
            lg(1 + k2) - lg(1 + j * k2) - lg(0.5 + k1 + (j - 1) * k2) for j in range(1, n + 1)
        )
    k = spec.k
    out = math.log(math.factorial(n)) - (n * (n - 1) * k - n / 2.0 + 1.0) * math.log(2.0)
    return out + sum(lg(1 + k) - lg(1 + j * k) - lg(0.5 + (j - 1) * k) for j in range(1, n + 1))


def log_cauchy_constant_sqrt2(spec: MultiplicitySpec) -> float:
    """Log of the norming constant of the Cauchy-Bessel law at ``t = sqrt(2)``
    written against the radial factor ``(1 + |y|^2)^{-gamma-(N+1)/2}``.

    Assembled from the closed forms specialized to each root system, so it
    provides an independent route to the general ``t``-dependent constant.
    """
    n = spec.n
    lg = log_gamma
    p = spec.gamma + (n + 1) / 2.0
    fact = math.log(math.factorial(n))
    if spec.system == "A":
        k = spec.k
        out = k * n * (n - 1) / 2.0 * math.log(2.0) + fact + lg(p) - (n + 1) / 2.0 * math.log(math.pi)
        return out + sum(lg(1 + k) - lg(1 + j * k) for j in range(1, n + 1))
    if spec.system == "B":
        k1, k2 = spec.k1, spec.k2
        out = fact + n * math.log(2.0) + lg(p) - 0.5 * math.log(math.pi)
        return out + sum(
            lg(1 + k2) - lg(1 + j * k2) - lg(0.5 + k1 + (j - 1) * k2) for j in range(1, n + 1)
        )
    k = spec.k
    out = (n - 1) * math.log(2.0) + fact + lg(p) - 0.5 * math.log(math.pi)
    return out + sum(lg(1 + k) - lg(1 + j * k) - lg(0.5 + k * (j - 1)) for j in range(1, n + 1))


def make_law(spec: MultiplicitySpec, flavor: str = "cauchy", t: float = SQRT2) -> EnsembleLaw:
    flavor = str(flavor).lower()
    if flavor not in FLAVORS:
        raise InvalidInputError(f"unknown flavor {flavor!r}")
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise InvalidInputError(f"t must be finite and > 0, got {t}")
    gamma = spec.gamma
    log_c = log_selberg_constant(spec)
    if flavor == "bessel":
        log_norm = log_c - (gamma + spec.n / 2.0) * math.log(t)
    else:
        p = gamma + (spec.n + 1) / 2.0
        log_norm = (
            log_c + math.log(t) + log_gamma(p) - 0.5 * math.log(4 * math.pi) + p * math.log(4.0)
        )
    return EnsembleLaw(spec=spec, flavor=flavor, t=t, gamma=gamma, log_norm=log_norm)


def in_chamber(system: str, y) -> np.ndarray:
    """Row-wise test for the open Weyl chamber of ``system``."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    ok = np.all(np.isfinite(y), axis=1)
    n = y.shape[1]
    if system == "A":
        return ok & np.all(y[:, :-1] > y[:, 1:], axis=1)
    if system == "B":
        return ok & np.all(y[:, :-1] > y[:, 1:], axis=1) & (y[:, -1] > 0)
    if n == 1:
        return ok
    ordered = np.all(y[:, :-2] > y[:, 1:-1], axis=1) if n > 2 else np.ones(len(y), bool)
    return ok & ordered & (y[:, -2] > np.abs(y[:, -1]))


def check_chamber(system: str, y) -> np.ndarray:
    y2 = np.atleast_2d(np.asarray(y, dtype=float))
    if not np.all(in_chamber(system, y2)):
        raise DomainError(f"point(s) not in the interior of the type {system} chamber")
    return y2


def log_weight(spec: MultiplicitySpec, y) -> np.ndarray:
    """``log w_k(y)`` row-wise for points inside the chamber."""
    y = check_chamber(spec.system, y)
    n = spec.n
    if y.shape[1] != n:
        raise InvalidInputError(f"expected vectors of length {n}, got {y.shape[1]}")
    iu, ju = np.triu_indices(n, 1)
    if spec.system == "A":
        return 2.0 * spec.k * np.sum(np.log(y[:, iu] - y[:, ju]), axis=1)
    sq = y * y
    pair = np.sum(np.log(sq[:, iu] - sq[:, ju]), axis=1)
    if spec.system == "B":
        out = 2.0 * spec.k2 * pair
        if spec.k1 != 0.0:
            out = out + spec.k1 * np.sum(np.log(sq), axis=1)
        return out
    return 2.0 * spec.k * pair


def log_density(law: EnsembleLaw, y):
    """Log of the exact density at ``y`` (one point or a batch of rows).

    Points must lie strictly inside the chamber; ties and boundary points
    raise :class:`DomainError`.
    """
    arr = np.asarray(y, dtype=float)
    single = arr.ndim == 1
    y2 = np.atleast_2d(arr)
    lw = log_weight(law.spec, y2)
    norm_sq = np.sum(y2 * y2, axis=1)
    if law.flavor == "bessel":
        out = law.log_norm + lw - norm_sq / (2.0 * law.t)
    else:
        out = law.log_norm + lw - law.power * np.log(law.t**2 + 2.0 * norm_sq)
    return float(out[0]) if single else out


def mode_A(n: int, k: float) -> np.ndarray:
    """Location ``sqrt(2k/(N+1)) z`` of the maximum of the type A Cauchy-Bessel density."""
    if int(n) != n or n < 2:
        raise InvalidInputError("mode_A needs N >= 2")
    if not k > 0:
        raise InvalidInputError("mode_A needs k > 0")
    return math.sqrt(2.0 * k / (n + 1)) * hermite_zeros(int(n)).zeros


def cog_marginal_cdf(x):
    """Standard Cauchy CDF, the law of ``sum(y) / sqrt(N)`` under type A Cauchy-Bessel."""
    return 0.5 + np.arctan(x) / math.pi


def fold_to_chamber(system: str, y) -> np.ndarray:
    """Map points of R^N onto the closed chamber by the Weyl group action.

    Type A sorts, type B sorts absolute values, and type D sorts absolute
    values and gives the last coordinate the product of the input signs.
    """
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if system == "A":
        return -np.sort(-y, axis=1)
    folded = -np.sort(-np.abs(y), axis=1)
    if system == "D":
        sign = np.prod(np.sign(y), axis=1)
        sign[sign == 0] = 1.0
        folded[:, -1] *= sign
    return folded
