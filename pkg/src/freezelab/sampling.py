"""Random generation: the inverse Gaussian subordinator, tridiagonal matrix
models for the Bessel ensembles, subordinated Cauchy-Bessel draws and
limit-law mixture draws.

All samplers take a ``numpy.random.Generator`` and an optional ``size``; with
``size=None`` a single draw is returned, otherwise a stacked array.
Reproducible streams come from :class:`RngStream`.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .ensembles import SQRT2, MultiplicitySpec
from .exceptions import InvalidInputError
from .freezing import LimitLaw, limit_law
from .matkernel import cholesky

__all__ = [
    "RngStream",
    "LawDescriptor",
    "SampleBatch",
    "parse_law",
    "sample_subordinator",
    "subordinator_from_normal",
    "subordinator_cdf",
    "sample_bessel_ensemble",
    "sample_cauchy_bessel",
    "sample_limit",
    "sample_mvn",
    "sample_law",
    "generate_batch",
]

DEFAULT_CHUNK = 50_000


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream id) pair naming an independent PCG64 substream."""

    seed: int
    stream: int = 0

    def generator(self, *subkey: int) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream), *map(int, subkey)))
        return np.random.Generator(np.random.PCG64(seq))

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, (self.stream << 20) + int(index) + 1)


def subordinator_from_normal(t, z):
    """Deterministic transform ``S = t^2 / (2 Z^2)`` used by the sampler."""
    return np.asarray(t, dtype=float) ** 2 / (2.0 * np.asarray(z, dtype=float) ** 2)


def subordinator_cdf(s, t: float):
    """``P(S <= s) = erfc(t / (2 sqrt(s)))`` for ``s > 0``."""
    from scipy.special import erfc

    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(s > 0, erfc(t / (2.0 * np.sqrt(np.maximum(s, 0.0)))), 0.0)


def sample_subordinator(t: float, rng: np.random.Generator, size=None):
    """Draw from ``t s^{-3/2} exp(-t^2/(4s)) / sqrt(4 pi)`` on ``(0, inf)``."""
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise InvalidInputError(f"t must be finite and > 0, got {t}")
    z = rng.standard_normal(size)
    z = np.atleast_1d(z)
    while np.any(z == 0.0):
        zero = z == 0.0
        z[zero] = rng.standard_normal(int(zero.sum()))
    out = subordinator_from_normal(t, z)
    return float(out[0]) if size is None else out


def _chi(df: float, rng: np.random.Generator, size: int) -> np.ndarray:
    if df <= 0.0:
        return np.zeros(size)
    return np.sqrt(rng.chisquare(df, size))


def _times(t, m: int) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(t, dtype=float), (m,))
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise InvalidInputError("times must be finite and > 0")
    return arr


def _hermite_model(n: int, k: float, m: int, rng: np.random.Generator) -> np.ndarray:
    # eigenvalues of tridiag(N(0,1) diagonal, chi_{2k(N-i)}/sqrt2 off-diagonal), density ~ |Delta|^{2k} e^{-|y|^2/2}
    diag = rng.standard_normal((m, n))
    if n == 1:
        return diag
    off = np.stack([_chi(2.0 * k * (n - i), rng, m) for i in range(1, n)], axis=1) / SQRT2
    mats = np.zeros((m, n, n))
    idx = np.arange(n)
    mats[:, idx, idx] = diag
    mats[:, idx[:-1], idx[1:]] = off
    mats[:, idx[1:], idx[:-1]] = off
    return np.linalg.eigvalsh(mats)[:, ::-1]


def _laguerre_model(n: int, k1: float, k2: float, m: int, rng: np.random.Generator) -> np.ndarray:
    # singular values of the lower bidiagonal with diagonal chi_{2k1+1+2k2(N-i)} and
    # subdiagonal chi_{2k2(N-i)}; squares follow the beta = 2k2 Laguerre law with
    # exponent k1 - 1/2, i.e. y has density ~ prod (y_i^2 - y_j^2)^{2k2} y_i^{2k1} e^{-|y|^2/2}
    diag = np.stack([_chi(2.0 * k1 + 1.0 + 2.0 * k2 * (n - i), rng, m) for i in range(1, n + 1)], axis=1)
    if n == 1:
        return diag
    sub = np.stack([_chi(2.0 * k2 * (n - i), rng, m) for i in range(1, n)], axis=1)
    mats = np.zeros((m, n, n))
    idx = np.arange(n)
    mats[:, idx, idx] = diag
    mats[:, idx[1:], idx[:-1]] = sub
    return np.linalg.svd(mats, compute_uv=False)


def sample_bessel_ensemble(spec: MultiplicitySpec, t, rng: np.random.Generator, size=None):
    """Ordered draw(s) from the Bessel ensemble at time ``t`` started in 0.

    ``t`` may be an array of per-draw times (used for subordination).
    """
    m = 1 if size is None else int(size)
    times = _times(t, m)
    n = spec.n
    if spec.system == "A":
        y = _hermite_model(n, spec.k, m, rng)
    elif spec.system == "B":
        y = _laguerre_model(n, spec.k1, spec.k2, m, rng)
    else:
        y = _laguerre_model(n, 0.0, spec.k, m, rng)
        flip = rng.random(m) < 0.5
        y[flip, -1] *= -1.0
    y = y * np.sqrt(times)[:, None]
    return y[0] if size is None else y


def sample_cauchy_bessel(spec: MultiplicitySpec, t, rng: np.random.Generator, size=None):
    """Subordinated draw(s): ``S ~ mu_t`` then the Bessel ensemble at time ``S``."""
    m = 1 if size is None else int(size)
    s = sample_subordinator(t, rng, m)
    y = sample_bessel_ensemble(spec, s, rng, m)
    return y[0] if size is None else y


def sample_mvn(mean, chol_factor, rng: np.random.Generator, size=None):
    """``mean + L g`` with ``g`` standard normal."""
    mean = np.asarray(mean, dtype=float)
    low = np.asarray(chol_factor, dtype=float)
    if low.ndim != 2 or low.shape[0] != mean.shape[0]:
        raise InvalidInputError("Cholesky factor does not match the mean's dimension")
    m = 1 if size is None else int(size)
    g = rng.standard_normal((m, low.shape[1]))
    out = mean + g @ low.T
    return out[0] if size is None else out


def sample_limit(law: LimitLaw, rng: np.random.Generator, size=None):
    """Draw(s) from the limit mixture ``sqrt(S) c + sqrt(S) L g``, ``S ~ mu_sqrt2``.

    ``L`` is the PSD Cholesky factor of ``A Sigma A``; the one-sided law
    replaces the last coordinate by its absolute value.
    """
    m = 1 if size is None else int(size)
    s = sample_subordinator(SQRT2, rng, m)
    low = cholesky(law.mixture_cov)
    g = sample_mvn(np.zeros(law.n), low, rng, m)
    y = np.sqrt(s)[:, None] * (law.center + g)
    if law.one_sided:
        y[:, -1] = np.abs(y[:, -1])
    return y[0] if size is None else y


# -- law descriptors and batches -------------------------------------------------

_KINDS = ("bessel", "cauchy", "limit")


@dataclass(frozen=True)
class LawDescriptor:
    """Which law to sample: ``kind`` in bessel/cauchy/limit plus parameters.

    Type B multiplicities are given either as ``(k1, k2)`` or as ``(nu, beta)``;
    limit laws of type B only need ``nu``.
    """

    kind: str
    system: str
    n: int
    k: float | None = None
    k1: float | None = None
    k2: float | None = None
    nu: float | None = None
    beta: float | None = None
    t: float = SQRT2

    @property
    def name(self) -> str:
        return f"{self.kind}-{self.system.lower()}"

    def spec(self) -> MultiplicitySpec:
        if self.system == "A":
            return MultiplicitySpec.type_a(self.n, _need(self.k, "k"))
        if self.system == "D":
            return MultiplicitySpec.type_d(self.n, _need(self.k, "k"))
        if self.system == "B":
            if self.k1 is not None or self.k2 is not None:
                return MultiplicitySpec.type_b(self.n, self.k1 or 0.0, self.k2 or 0.0)
            return MultiplicitySpec.type_b_nu(self.n, _need(self.nu, "nu"), _need(self.beta, "beta"))
        raise InvalidInputError(f"no ensemble for system {self.system}")

    def limit(self) -> LimitLaw:
        return limit_law(self.system, self.n, self.nu)

    def as_dict(self) -> dict:
        out = {"law": self.name, "system": self.system, "n": self.n}
        for key in ("k", "k1", "k2", "nu", "beta"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.kind != "limit":
            out["t"] = self.t
        return out


def _need(value, name):
    if value is None:
        raise InvalidInputError(f"parameter {name} is required for this law")
    return value


def parse_law(name: str, n: int, **params) -> LawDescriptor:
    """Build a descriptor from names like ``cauchy-a``, ``bessel-b``, ``limit-b-one-sided``."""
    name = name.lower()
    kind, _, system = name.partition("-")
    if kind not in _KINDS or not system:
        raise InvalidInputError(f"unknown law {name!r}")
    system = "B-one-sided" if system == "b-one-sided" else system.upper()
    allowed = ("A", "B", "D", "B-one-sided") if kind == "limit" else ("A", "B", "D")
    if system not in allowed:
        raise InvalidInputError(f"unknown law {name!r}")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidInputError(f"N must be a positive integer, got {n!r}")
    clean = {k: float(v) for k, v in params.items() if v is not None}
    desc = LawDescriptor(kind=kind, system=system, n=int(n), **clean)
    # validate eagerly so usage errors surface before any sampling
    if kind == "limit":
        desc.limit()
    else:
        desc.spec()
    return desc


def sample_law(desc: LawDescriptor, rng: np.random.Generator, size: int) -> np.ndarray:
    if desc.kind == "limit":
        return sample_limit(desc.limit(), rng, size)
    if desc.kind == "bessel":
        return sample_bessel_ensemble(desc.spec(), desc.t, rng, size)
    return sample_cauchy_bessel(desc.spec(), desc.t, rng, size)


@dataclass
class SampleBatch:
    descriptor: dict
    seed: int
    stream: int
    samples: np.ndarray
    config: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    def header(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "seed": self.seed,
            "stream": self.stream,
            "count": self.count,
            "config": self.config,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header())]
        lines.extend(json.dumps([float(v) for v in row]) for row in self.samples)
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.header()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"y{i + 1}" for i in range(self.samples.shape[1])])
        for row in self.samples:
            writer.writerow(["%.17g" % v for v in row])
        return buf.getvalue()

    @classmethod
    def from_jsonl(cls, text: str) -> "SampleBatch":
        lines = [line for line in text.splitlines() if line.strip()]
        head = json.loads(lines[0])
        rows = np.array([json.loads(line) for line in lines[1:]], dtype=float)
        return cls(head["descriptor"], head["seed"], head["stream"], rows, head.get("config", {}))


def generate_batch(
    desc: LawDescriptor, count: int, seed: int, stream: int = 0, chunk: int = DEFAULT_CHUNK
) -> SampleBatch:
    """Sample ``count`` rows in chunks; chunk ``i`` always uses substream ``i``."""
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    root = RngStream(seed, stream)
    parts = []
    for i, start in enumerate(range(0, count, chunk)):
        size = min(chunk, count - start)
        parts.append(sample_law(desc, root.generator(i), size))
    return SampleBatch(desc.as_dict(), int(seed), int(stream), np.concatenate(parts, axis=0))
