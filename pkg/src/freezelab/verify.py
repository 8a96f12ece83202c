"""Verification suites shared by the command line and the acceptance tests.

Each function returns :class:`~freezelab.stats.TestReport` objects (or plain
rows for the convergence sweeps) and is deterministic given its seed.
"""
from __future__ import annotations

import math

import numpy as np

from .ensembles import SQRT2, MultiplicitySpec, in_chamber, log_density, make_law
from .freezing import (
    limit_density,
    limit_law,
    peak_vector,
    ratio_constant_A,
    rescale,
    sigma_inv,
)
from .matkernel import cholesky
from .orthopoly import inverse_zero_sum, zero_identity_report
from .sampling import RngStream, sample_bessel_ensemble, sample_cauchy_bessel, sample_limit, sample_mvn
from .stats import (
    CauchyProposal,
    FoldedProposal,
    GaussianProposal,
    HalfSpaceProposal,
    TestReport,
    bounded_transform,
    energy_two_sample,
    mc_normalize,
)

__all__ = [
    "NU_VALUES",
    "ALPHA_VALUES",
    "RATIO_POINTS",
    "claimed_spectrum",
    "spectrum_report",
    "identity_reports",
    "ensemble_proposal",
    "limit_proposal",
    "normalization_reports",
    "clt_report",
    "limit_report",
    "ratio_rows",
    "weak_rows",
]

NU_VALUES = (0.5, 1.0, 2.0, 5.0)
ALPHA_VALUES = (0.0, 1.0, 2.0, 0.5)
RATIO_POINTS = {2: ([0.0, 0.0], [0.2, -0.1], [0.05, 0.05]), 3: ([0.0, 0.0, 0.0], [0.1, 0.05, -0.2], [0.1, 0.1, 0.1])}
SPECTRUM_TOL = 1e-8


def claimed_spectrum(system: str, flavor: str, n: int) -> np.ndarray | None:
    """Integer spectrum claimed for ``Sigma^{-1}``; ``None`` where no claim exists (type D)."""
    if system == "A" and flavor == "bessel":
        return np.arange(1.0, n + 1)
    if system == "A" and flavor == "cauchy":
        base = np.concatenate([[1.0, 4.0], np.arange(3.0, n + 1)]) if n >= 2 else np.array([1.0])
        return (n + 1) * np.sort(base)
    if system == "B":
        return 2.0 * np.arange(1.0, n + 1)
    return None


def spectrum_report(system: str, flavor: str, n: int, nu: float | None = None) -> TestReport:
    cov = sigma_inv(system, flavor, n, nu)
    meta = {"system": system, "flavor": flavor, "n": n, "nu": nu}
    claim = claimed_spectrum(system, flavor, n)
    if claim is None:
        s = cov.sigma_inv
        dev = max(abs(s[-1, -1] - n), float(np.max(np.abs(s[-1, :-1]))) if n > 1 else 0.0)
        return TestReport("spectrum_D", dev, 1e-10, sizes=[n], metadata=meta)
    dev = float(np.max(np.abs(cov.eigen.eigenvalues - claim)))
    return TestReport(f"spectrum_{system}_{flavor}", dev, SPECTRUM_TOL, sizes=[n], metadata=meta)


def identity_reports(n: int) -> list[TestReport]:
    """Zero identities, inverse-zero sums and spectrum claims at size ``n``."""
    out = []
    rep = zero_identity_report("hermite", n)
    out.append(TestReport("hermite_sum_sq", rep["sum_sq"].deviation, 1e-10, sizes=[n]))
    out.append(TestReport("hermite_log_potential", rep["log_potential"].deviation, 1e-8, sizes=[n]))
    for alpha in ALPHA_VALUES:
        dev = abs(inverse_zero_sum(n, alpha) - n / (alpha + 1.0))
        out.append(TestReport("laguerre_inverse_sum", dev, 1e-10, sizes=[n], metadata={"alpha": alpha}))
    for nu in NU_VALUES:
        rep = zero_identity_report("laguerre", n, nu)
        meta = {"nu": nu, "printed_norm_sq_deviation": rep["norm_sq_printed"].deviation}
        out.append(TestReport("laguerre_norm_sq", rep["norm_sq"].deviation, 1e-9, sizes=[n], metadata=meta))
        out.append(TestReport("laguerre_log_potential", rep["log_potential"].deviation, 1e-8, sizes=[n],
                              metadata={"nu": nu}))
        out.append(spectrum_report("B", "bessel", n, nu))
    out.append(spectrum_report("A", "bessel", n))
    if n >= 2:
        out.append(spectrum_report("A", "cauchy", n))
        out.append(spectrum_report("D", "bessel", n))
    return out


def ensemble_proposal(spec: MultiplicitySpec, flavor: str, t: float = SQRT2):
    """Weyl-folded proposal: multivariate Cauchy for the Cauchy flavor,
    a widened Gaussian for the Bessel flavor."""
    n = spec.n
    spread = math.sqrt(max(1.0, 2.0 * spec.gamma / (n + 1)))
    if flavor == "cauchy":
        base = CauchyProposal(n, spread * t / SQRT2)
    else:
        base = GaussianProposal(n, 1.3 * spread * math.sqrt(t))
    return FoldedProposal(base, spec.system)


def limit_proposal(law):
    q = law.center_norm_sq
    perp = math.sqrt(float(np.linalg.eigvalsh(law.mixture_cov).max()) / q)
    return HalfSpaceProposal(law.peak.unit, math.sqrt(q), perp)


def _default_specs(n: int):
    specs = [MultiplicitySpec.type_a(n, 1.0), MultiplicitySpec.type_a(n, 3.0),
             MultiplicitySpec.type_b(n, 1.0, 1.0), MultiplicitySpec.type_b(n, 0.5, 2.0),
             MultiplicitySpec.type_d(n, 1.0)]
    return specs


def normalization_reports(ns=(1, 2, 3), limit_ns=(2, 3), count: int = 100_000, seed: int = 0,
                          systems=("A", "B", "D")) -> list[TestReport]:
    root = RngStream(seed, 1)
    out = []
    idx = 0
    for n in ns:
        for spec in _default_specs(n):
            if spec.system not in systems:
                continue
            for flavor in ("bessel", "cauchy"):
                law = make_law(spec, flavor, SQRT2)
                est = mc_normalize(lambda y, law=law: log_density(law, y), ensemble_proposal(spec, flavor),
                                   count, root.generator(idx), support=lambda y, s=spec.system: in_chamber(s, y))
                idx += 1
                out.append(est.report("normalization", {
                    "system": spec.system, "n": n, "k": spec.k, "k1": spec.k1, "k2": spec.k2,
                    "flavor": flavor, "seed": seed}))
    limit_cases = [("A", None), ("B", 2.0), ("B", 0.5), ("D", None), ("B-one-sided", None)]
    for n in limit_ns:
        for system, nu in limit_cases:
            if system.split("-")[0] not in systems:
                continue
            law = limit_law(system, n, nu)
            est = mc_normalize(lambda y, law=law: limit_density(law, y, log=True), limit_proposal(law),
                               count, root.generator(idx), support=law.in_support)
            idx += 1
            out.append(est.report("normalization_limit", {"system": system, "n": n, "nu": nu, "seed": seed}))
    return out


def clt_report(system: str, n: int, k: float, nu: float | None = None, count: int = 10_000,
               permutations: int = 200, seed: int = 0) -> TestReport:
    """Bessel freezing CLT: ``X - sqrt(2k) z`` (A) or ``X - sqrt(beta) r`` (B) at ``t = 1`` against ``N(0, Sigma)``."""
    root = RngStream(seed, 2)
    if system == "A":
        spec = MultiplicitySpec.type_a(n, k)
        center = math.sqrt(2.0 * k) * peak_vector("A", n).coords
        cov = sigma_inv("A", "bessel", n)
    elif system == "B":
        nu = 2.0 if nu is None else nu
        spec = MultiplicitySpec.type_b_nu(n, nu, k)
        center = math.sqrt(k) * peak_vector("B", n, nu).coords
        cov = sigma_inv("B", "bessel", n, nu)
    else:
        spec = MultiplicitySpec.type_d(n, k)
        center = math.sqrt(k) * peak_vector("D", n).coords
        cov = sigma_inv("D", "bessel", n)
    x = sample_bessel_ensemble(spec, 1.0, root.generator(0), count) - center
    g = sample_mvn(np.zeros(n), cholesky(cov.sigma), root.generator(1), count)
    return energy_two_sample(x, g, permutations, root.generator(2), name=f"clt_{system}",
                             metadata={"system": system, "n": n, "k": k, "nu": nu, "seed": seed})


def _limit_pair(system: str, n: int, k: float, nu, count: int, root: RngStream):
    if system == "A":
        spec = MultiplicitySpec.type_a(n, k)
    elif system == "B":
        nu = 2.0 if nu is None else nu
        spec = MultiplicitySpec.type_b_nu(n, nu, k)
    elif system == "D":
        spec = MultiplicitySpec.type_d(n, k)
    else:
        spec = MultiplicitySpec.type_b(n, 0.0, k)
    law = limit_law(system, n, nu)
    y = rescale(sample_cauchy_bessel(spec, SQRT2, root.generator(0), count), k, law.peak)
    ref = sample_limit(law, root.generator(1), count)
    return y, ref, law


def limit_report(system: str, n: int, k: float, nu: float | None = None, count: int = 10_000,
                 permutations: int = 200, seed: int = 0) -> TestReport:
    """Rescaled Cauchy-Bessel draws against the limit mixture, energy test after
    the bounded transform."""
    root = RngStream(seed, 3)
    y, ref, _ = _limit_pair(system, n, k, nu, count, root)
    return energy_two_sample(bounded_transform(y), bounded_transform(ref), permutations, root.generator(2),
                             name=f"limit_{system}",
                             metadata={"system": system, "n": n, "k": k, "nu": nu, "seed": seed})


def ratio_rows(n: int, k_grid, points=None) -> list[list[float]]:
    points = RATIO_POINTS[n] if points is None else points
    return [[float(k)] + [ratio_constant_A(n, k, np.asarray(x, dtype=float)) for x in points] for k in k_grid]


def weak_rows(system: str, n: int, k_grid, nu=None, count: int = 10_000, permutations: int = 200,
              seed: int = 0) -> list[list[float]]:
    rows = []
    for i, k in enumerate(k_grid):
        rep = limit_report(system, n, k, nu, count, permutations, seed + i)
        rows.append([float(k), rep.statistic, rep.p_value])
    return rows
