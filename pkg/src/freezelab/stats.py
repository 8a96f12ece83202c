"""Statistical verification kernel: KS and energy tests, importance-sampling
normalization checks, finite-difference gradients and sample moments."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .ensembles import fold_to_chamber, weyl_group_order
from .exceptions import DomainError, InvalidInputError

__all__ = [
    "ALPHA",
    "KS_C_ALPHA",
    "TestReport",
    "MCEstimate",
    "GaussianProposal",
    "CauchyProposal",
    "FoldedProposal",
    "HalfSpaceProposal",
    "ks_one_sample",
    "energy_statistic",
    "energy_two_sample",
    "bounded_transform",
    "mc_normalize",
    "fd_gradient",
    "empirical_moments",
]

ALPHA = 0.01
KS_C_ALPHA = 1.628
ENERGY_BLOCK = 512


@dataclass
class TestReport:
    """Outcome of one statistical or numerical check.

    ``direction`` is ``"statistic<=threshold"`` or ``"p_value>alpha"`` and
    determines how ``passed`` relates to the numbers.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    statistic: float
    threshold: float | None = None
    p_value: float | None = None
    alpha: float = ALPHA
    direction: str = "statistic<=threshold"
    sizes: list = field(default_factory=list)
    passed: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.direction == "statistic<=threshold":
            self.passed = bool(self.statistic <= self.threshold)
        elif self.direction == "p_value>alpha":
            self.passed = bool(self.p_value > self.alpha)
        else:
            raise InvalidInputError(f"unknown direction {self.direction!r}")

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), default=_jsonable)


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def ks_one_sample(samples, cdf, *, c_alpha: float = KS_C_ALPHA, name: str = "ks", metadata=None) -> TestReport:
    """One-sample Kolmogorov-Smirnov test; passes iff ``D_n <= c_alpha / sqrt(n)``."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise InvalidInputError("no samples")
    if n < 10:
        raise InvalidInputError("KS test needs at least 10 samples")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    return TestReport(
        name=name,
        statistic=d,
        threshold=c_alpha / math.sqrt(n),
        sizes=[n],
        metadata=dict(metadata or {}),
    )


def bounded_transform(y) -> np.ndarray:
    """``y / (1 + |y|)``: a bijection of R^N onto the open unit ball.

    Energy distance needs finite first moments; applying a fixed bijection
    to both samples preserves equality in law and tames heavy tails.
    """
    y = np.asarray(y, dtype=float)
    return y / (1.0 + np.linalg.norm(y, axis=-1, keepdims=True))


def _pair_sums(z: np.ndarray, labels: np.ndarray, block: int):
    # row sums of the distance matrix and l^T D l for every label column
    m = z.shape[0]
    row = np.empty(m)
    quad = np.zeros(labels.shape[1])
    for start in range(0, m, block):
        stop = min(start + block, m)
        dist = cdist(z[start:stop], z)
        row[start:stop] = dist.sum(axis=1)
        quad += np.einsum("ij,ij->j", labels[start:stop], dist @ labels)
    return row, quad


def _energy_from_sums(total, row, quad, labels, n_a, n_b):
    s_aa = quad
    s_bb = total - 2.0 * (row @ labels) + quad
    s_ab = 0.5 * (total - s_aa - s_bb)
    return 2.0 * s_ab / (n_a * n_b) - s_aa / n_a**2 - s_bb / n_b**2


def energy_statistic(a, b) -> float:
    """``2 E|X-Y| - E|X-X'| - E|Y-Y'|`` with V-statistic averages."""
    a, b = _check_pair(a, b)
    return float(
        2.0 * cdist(a, b).mean() - cdist(a, a).mean() - cdist(b, b).mean()
    )


def _check_pair(a, b):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise InvalidInputError("batches must be 2-D with the same dimension")
    if len(a) < 2 or len(b) < 2:
        raise InvalidInputError("each batch needs at least two rows")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidInputError("batches must be finite")
    return a, b


def energy_two_sample(
    a, b, permutations: int = 200, rng: np.random.Generator | None = None, *,
    name: str = "energy", metadata=None, block: int = ENERGY_BLOCK,
) -> TestReport:
    """Energy-distance two-sample test with a permutation p-value.

    The pooled distance matrix is never stored: each row block contributes
    its row sums and ``D @ L`` for the matrix ``L`` of label indicators, one
    column per labeling.
    """
    a, b = _check_pair(a, b)
    if permutations < 100:
        raise InvalidInputError("at least 100 permutations are required")
    rng = rng if rng is not None else np.random.default_rng(0)
    n_a, n_b = len(a), len(b)
    z = np.concatenate([a, b])
    m = n_a + n_b
    labels = np.zeros((m, permutations + 1))
    labels[:n_a, 0] = 1.0
    for j in range(1, permutations + 1):
        labels[rng.permutation(m)[:n_a], j] = 1.0
    row, quad = _pair_sums(z, labels, block)
    stats_ = _energy_from_sums(row.sum(), row, quad, labels, n_a, n_b)
    observed = float(stats_[0])
    # labelings that reproduce the observed one tie exactly; ties count as exceedances
    exceed = int(np.sum(stats_[1:] >= observed - 1e-12 * max(abs(observed), 1e-300)))
    p = (1 + exceed) / (permutations + 1)
    return TestReport(
        name=name,
        statistic=observed,
        p_value=p,
        direction="p_value>alpha",
        sizes=[n_a, n_b],
        metadata={"permutations": permutations, **(metadata or {})},
    )


# -- importance-sampling normalization --------------------------------------------


@dataclass(frozen=True)
class GaussianProposal:
    dim: int
    scale: float = 1.0

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.scale * rng.standard_normal((n, self.dim))

    def logpdf(self, y) -> np.ndarray:
        y = np.atleast_2d(y)
        return -0.5 * np.sum(y * y, axis=1) / self.scale**2 - self.dim * (
            math.log(self.scale) + 0.5 * math.log(2 * math.pi)
        )


@dataclass(frozen=True)
class CauchyProposal:
    """Rotation-invariant multivariate Cauchy (Student t with one degree of freedom)."""

    dim: int
    scale: float = 1.0

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.standard_normal((n, self.dim))
        w = np.abs(rng.standard_normal(n))
        w[w == 0.0] = np.finfo(float).tiny
        return self.scale * g / w[:, None]

    def logpdf(self, y) -> np.ndarray:
        y = np.atleast_2d(y)
        d = self.dim
        r2 = np.sum(y * y, axis=1) / self.scale**2
        const = math.lgamma((d + 1) / 2.0) - 0.5 * (d + 1) * math.log(math.pi) - d * math.log(self.scale)
        return const - 0.5 * (d + 1) * np.log1p(r2)


@dataclass(frozen=True)
class FoldedProposal:
    """A Weyl-invariant base proposal folded into the closed chamber."""

    base: object
    system: str

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return fold_to_chamber(self.system, self.base.sample(n, rng))

    def logpdf(self, y) -> np.ndarray:
        y = np.atleast_2d(y)
        return self.base.logpdf(y) + math.log(weyl_group_order(self.system, y.shape[1]))


@dataclass(frozen=True)
class HalfSpaceProposal:
    """Proposal on ``{<y, d> > 0}``: ``u`` half-Cauchy with scale ``radial``,
    and given ``u`` the orthogonal part is ``u * perp`` times a Student t
    vector with ``df`` degrees of freedom on ``d``'s complement."""

    direction: np.ndarray
    radial: float
    perp: float = 1.0
    df: float = 3.0

    def _basis(self):
        d = np.asarray(self.direction, dtype=float)
        d = d / np.linalg.norm(d)
        q, _ = np.linalg.qr(np.column_stack([d, np.eye(d.size)]))
        return d, q[:, 1:d.size]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        d, basis = self._basis()
        u = self.radial * np.abs(rng.standard_cauchy(n))
        u[u == 0.0] = np.finfo(float).tiny
        m = basis.shape[1]
        g = rng.standard_normal((n, m))
        chi = np.sqrt(rng.chisquare(self.df, n) / self.df)
        w = self.perp * u[:, None] * g / chi[:, None]
        return np.outer(u, d) + w @ basis.T

    def logpdf(self, y) -> np.ndarray:
        d, basis = self._basis()
        y = np.atleast_2d(y)
        u = y @ d
        w = y @ basis
        m = basis.shape[1]
        out = np.full(len(y), -np.inf)
        ok = u > 0
        u, w = u[ok], w[ok]
        log_u = math.log(2.0 / (math.pi * self.radial)) - np.log1p((u / self.radial) ** 2)
        s = self.perp * u
        nu = self.df
        log_t = (
            math.lgamma((nu + m) / 2.0) - math.lgamma(nu / 2.0) - 0.5 * m * math.log(nu * math.pi)
            - m * np.log(s) - 0.5 * (nu + m) * np.log1p(np.sum(w * w, axis=1) / (nu * s * s))
        )
        out[ok] = log_u + log_t
        return out


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    n: int
    tolerance: float

    @property
    def ok(self) -> bool:
        return abs(self.estimate - 1.0) <= self.tolerance

    def report(self, name: str = "normalization", metadata=None) -> TestReport:
        return TestReport(
            name=name,
            statistic=abs(self.estimate - 1.0),
            threshold=self.tolerance,
            sizes=[self.n],
            metadata={"estimate": self.estimate, "stderr": self.stderr, **(metadata or {})},
        )


def mc_normalize(log_density, proposal, n: int, rng: np.random.Generator, *, support=None) -> MCEstimate:
    """Importance-sampling estimate of the integral of ``exp(log_density)``.

    ``support`` is a row-wise boolean predicate; points outside it get weight
    zero and ``log_density`` is only evaluated inside. Infinite weights mean
    the proposal misses part of the support and raise :class:`DomainError`.
    """
    if n < 10_000:
        raise InvalidInputError("mc_normalize needs n >= 10^4")
    y = proposal.sample(n, rng)
    lq = proposal.logpdf(y)
    inside = np.all(np.isfinite(y), axis=1)
    if support is not None:
        inside &= np.asarray(support(y), dtype=bool)
    weights = np.zeros(n)
    if np.any(inside):
        lw = np.asarray(log_density(y[inside]), dtype=float) - lq[inside]
        if np.any(np.isnan(lw)) or np.any(lw == np.inf):
            raise DomainError("invalid proposal: zero proposal density where the target is positive")
        weights[inside] = np.exp(lw)
    est = float(weights.mean())
    err = float(weights.std(ddof=1) / math.sqrt(n))
    return MCEstimate(est, err, n, max(3.0 * err, 0.01))


def fd_gradient(f, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with step ``h`` in every coordinate."""
    x = np.asarray(x, dtype=float)
    if not h > 0:
        raise InvalidInputError("step h must be > 0")
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        try:
            up, down = float(f(x + e)), float(f(x - e))
        except (ValueError, ArithmeticError) as exc:
            raise DomainError(f"function evaluation failed inside the stencil: {exc}") from exc
        if not (math.isfinite(up) and math.isfinite(down)):
            raise DomainError("non-finite function value inside the stencil")
        grad[i] = (up - down) / (2.0 * h)
    return grad


def empirical_moments(batch):
    """Sample mean and unbiased covariance of the rows of ``batch``."""
    y = np.asarray(batch, dtype=float)
    if y.ndim != 2 or y.shape[0] < 2:
        raise InvalidInputError("need a 2-D batch with at least two rows")
    return y.mean(axis=0), np.cov(y, rowvar=False, ddof=1).reshape(y.shape[1], y.shape[1])
