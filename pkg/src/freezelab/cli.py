"""Command line interface: ``freezelab {zeros,cov,sample,verify,converge}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Primary data goes to stdout (or ``--out``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from .exceptions import FreezelabError
from .freezing import sigma_inv
from .orthopoly import hermite_zeros, laguerre_zeros, zero_identity_report
from .sampling import generate_batch, parse_law
from .verify import (
    claimed_spectrum,
    clt_report,
    identity_reports,
    limit_report,
    normalization_reports,
    ratio_rows,
    weak_rows,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SEED_ENV = "FREEZELAB_SEED"
IDENTITY_TOL = 1e-8
COV_TOL = 1e-8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Effective settings of one run; round-trips through JSON."""

    command: str | None = None
    system: str | None = None
    n: int | None = None
    k: float | None = None
    k1: float | None = None
    k2: float | None = None
    nu: float | None = None
    beta: float | None = None
    t: float | None = None
    count: int | None = None
    seed: int | None = None
    k_grid: list | None = None
    out: str | None = None
    format: str | None = None
    family: str | None = None
    alpha: float | None = None
    flavor: str | None = None
    law: str | None = None
    suite: str | None = None
    mode: str | None = None
    permutations: int | None = None
    stream: int | None = None
    verify: bool | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def as_dict(self) -> dict:
        # the output path is left out so that reruns into different files hash equal
        return {k: v for k, v in asdict(self).items() if v is not None and k != "out"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _k_grid(text: str) -> list[float]:
    try:
        grid = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad k-grid {text!r}") from exc
    return grid


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freezelab", description="Freezing limits of Cauchy-Bessel ensembles.")
    parser.add_argument("--config", help="JSON RunConfig file; explicit flags override it")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, *names):
        table = {
            "system": lambda: p.add_argument("--system", type=str.upper, choices=["A", "B", "D"]),
            "n": lambda: p.add_argument("--n", type=int),
            "k": lambda: p.add_argument("--k", type=float),
            "nu": lambda: p.add_argument("--nu", type=float),
            "seed": lambda: p.add_argument("--seed", type=int),
            "count": lambda: p.add_argument("--count", type=int),
            "permutations": lambda: p.add_argument("--permutations", type=int),
            "out": lambda: p.add_argument("--out"),
        }
        for name in names:
            table[name]()

    p = sub.add_parser("zeros", help="zeros of H_n or L_n^(alpha) as CSV")
    p.add_argument("--family", choices=["hermite", "laguerre"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--verify", action="store_true", default=None)
    common(p, "n", "nu", "seed", "out")

    p = sub.add_parser("cov", help="frozen covariance as JSON")
    p.add_argument("--flavor", choices=["bessel", "cauchy"])
    common(p, "system", "n", "nu", "seed", "out")

    p = sub.add_parser("sample", help="sample a law as JSONL or CSV")
    p.add_argument("--law")
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--stream", type=int)
    p.add_argument("--format", choices=["jsonl", "csv"])
    common(p, "n", "k", "nu", "seed", "count", "out")

    p = sub.add_parser("verify", help="run verification suites, JSON report")
    p.add_argument("--suite")
    common(p, "system", "n", "k", "nu", "seed", "count", "permutations", "out")

    p = sub.add_parser("converge", help="sweep k, CSV table")
    p.add_argument("--mode", choices=["ratio", "weak"])
    p.add_argument("--k-grid", dest="k_grid", type=_k_grid)
    common(p, "system", "n", "nu", "seed", "count", "permutations", "out")
    return parser


def _effective_config(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        try:
            base = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from exc
        RunConfig.from_dict(base)
    flags = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    if base.get("command") and flags.get("command") and base["command"] != flags["command"]:
        raise UsageError("config command does not match the subcommand")
    merged = {**base, **flags}
    cfg = RunConfig.from_dict(merged)
    if cfg.command is None:
        raise UsageError("a subcommand is required")
    if cfg.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            cfg.seed = int(env) if env not in (None, "") else 0
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer") from exc
    return cfg


def _fmt(value: float) -> str:
    return "%.17g" % value


def _csv(header: list[str], rows, cfg: RunConfig) -> str:
    buf = io.StringIO()
    buf.write("# " + cfg.to_json() + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, str)) else _fmt(v) for v in row])
    return buf.getvalue()


def _json(payload) -> str:
    return json.dumps(payload, indent=2, default=_plain) + "\n"


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(type(value).__name__)


def _need(cfg: RunConfig, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command}: missing required option(s): {', '.join('--' + m for m in missing)}")


def run_zeros(cfg: RunConfig):
    _need(cfg, "family", "n")
    if cfg.family == "hermite":
        zs = hermite_zeros(cfg.n).zeros
    else:
        alpha = cfg.alpha if cfg.alpha is not None else (cfg.nu - 1.0 if cfg.nu is not None else 0.0)
        zs = laguerre_zeros(cfg.n, alpha).zeros
    text = _csv(["index", "zero"], [(i + 1, float(z)) for i, z in enumerate(zs)], cfg)
    code = EXIT_OK
    if cfg.verify:
        if cfg.family == "hermite":
            rep = zero_identity_report("hermite", cfg.n)
        else:
            nu = cfg.nu if cfg.nu is not None else alpha + 1.0
            rep = zero_identity_report("laguerre", cfg.n, nu)
        ok = rep.passed(IDENTITY_TOL)
        text += json.dumps({"identities": rep.as_dict(), "tolerance": IDENTITY_TOL, "passed": ok},
                           default=_plain) + "\n"
        code = EXIT_OK if ok else EXIT_FAIL
    return text, code


def run_cov(cfg: RunConfig):
    _need(cfg, "system", "n")
    flavor = cfg.flavor or "bessel"
    if flavor == "cauchy" and cfg.system != "A":
        raise UsageError("cov: the Cauchy flavor is only defined for system A")
    nu = cfg.nu if cfg.system == "B" else None
    if cfg.system == "B" and nu is None:
        raise UsageError("cov: system B needs --nu")
    cov = sigma_inv(cfg.system, flavor, cfg.n, nu)
    payload = {
        "config": cfg.as_dict(),
        "sigma_inv": cov.sigma_inv,
        "sigma": cov.sigma,
        "eigenvalues": cov.eigen.eigenvalues,
        "determinant": cov.det_sigma_inv,
    }
    claim = claimed_spectrum(cfg.system, flavor, cfg.n)
    if claim is None:
        s = cov.sigma_inv
        n = cfg.n
        payload["s_nn"] = float(s[-1, -1])
        payload["claimed_s_nn"] = float(n)
        off = float(np.max(np.abs(s[-1, :-1]))) if n > 1 else 0.0
        deviation = max(abs(s[-1, -1] - n), off)
    else:
        payload["claimed_eigenvalues"] = claim
        deviation = float(np.max(np.abs(cov.eigen.eigenvalues - claim)))
    payload["deviation"] = deviation
    payload["passed"] = deviation <= COV_TOL
    return _json(payload), EXIT_OK if deviation <= COV_TOL else EXIT_FAIL


def run_sample(cfg: RunConfig):
    _need(cfg, "law", "n")
    count = cfg.count if cfg.count is not None else 1000
    params = {"k": cfg.k, "k1": cfg.k1, "k2": cfg.k2, "nu": cfg.nu, "beta": cfg.beta}
    if cfg.t is not None:
        params["t"] = cfg.t
    desc = parse_law(cfg.law, cfg.n, **params)
    batch = generate_batch(desc, count, cfg.seed, cfg.stream or 0)
    batch.config = cfg.as_dict()
    fmt = cfg.format or "jsonl"
    return (batch.to_csv() if fmt == "csv" else batch.to_jsonl()), EXIT_OK


SUITES = ("identities", "normalization", "clt", "limit", "all")


def run_verify(cfg: RunConfig):
    suite = cfg.suite or "all"
    if suite not in SUITES:
        raise UsageError(f"verify: unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    perms = cfg.permutations or 200
    count = cfg.count
    reports = []
    if suite in ("identities", "all"):
        for n in ([cfg.n] if cfg.n else range(1, 31)):
            reports += identity_reports(n)
    if suite in ("normalization", "all"):
        ns = (cfg.n,) if cfg.n else (1, 2, 3)
        limit_ns = tuple(n for n in ns if n >= 2) if cfg.n else (2, 3)
        systems = (cfg.system,) if cfg.system else ("A", "B", "D")
        reports += normalization_reports(ns, limit_ns, count or 100_000, cfg.seed, systems)
    if suite in ("clt", "all"):
        systems = (cfg.system,) if cfg.system else ("A", "B")
        for system in systems:
            reports.append(clt_report(system, cfg.n or 2, cfg.k or 200.0, cfg.nu, count or 10_000, perms, cfg.seed))
    if suite in ("limit", "all"):
        cases = [(cfg.system, cfg.nu)] if cfg.system else [("A", None), ("B", 2.0), ("D", None)]
        for system, nu in cases:
            reports.append(limit_report(system, cfg.n or 2, cfg.k or 200.0, nu, count or 10_000, perms, cfg.seed))
    failing = [r.name for r in reports if not r.passed]
    payload = {
        "config": cfg.as_dict(),
        "passed": not failing,
        "failing": failing,
        "reports": [r.as_dict() for r in reports],
    }
    return _json(payload), EXIT_OK if not failing else EXIT_FAIL


def run_converge(cfg: RunConfig):
    _need(cfg, "mode", "n")
    grid = cfg.k_grid or []
    if not grid:
        raise UsageError("converge: --k-grid must list at least one value")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError("converge: --k-grid must be strictly ascending")
    if cfg.mode == "ratio":
        if (cfg.system or "A") != "A" or cfg.n not in (2, 3):
            raise UsageError("converge --mode ratio supports system A with n in {2, 3}")
        rows = ratio_rows(cfg.n, grid)
        header = ["k"] + [f"ratio_x{i}" for i in range(len(rows[0]) - 1)]
    else:
        _need(cfg, "system")
        rows = weak_rows(cfg.system, cfg.n, grid, cfg.nu, cfg.count or 10_000, cfg.permutations or 200, cfg.seed)
        header = ["k", "energy", "p_value"]
    return _csv(header, rows, cfg), EXIT_OK


COMMANDS = {
    "zeros": run_zeros,
    "cov": run_cov,
    "sample": run_sample,
    "verify": run_verify,
    "converge": run_converge,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _effective_config(args)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (FreezelabError, TypeError) as exc:
        sys.stderr.write(f"freezelab: {exc}\n{parser.format_usage()}")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"freezelab: {exc}\n")
        return EXIT_IO
    try:
        _emit(text, cfg.out)
    except OSError as exc:
        sys.stderr.write(f"freezelab: cannot write output: {exc}\n")
        return EXIT_IO
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
