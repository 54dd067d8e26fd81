"""Command-line front end.

Subcommands: metric, verify, constant, ode, abm, profile.  Exit codes:
0 success, 1 malformed input, 2 precondition violation, 3 inequality
violation found by verify, 4 integration failure.  Output files embed the
configuration digest and the seed, and contain no timestamps, so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import config_digest
from .dists import DiscreteDist, dirac, load_dist, poisson_dist
from .errors import (
    DomainError,
    EmptyVector,
    GenerationFailed,
    IntegrationError,
    NegativeMass,
    NotNormalized,
    PgfMetricsError,
    UnequalMeans,
    UnsupportedOrder,
)
from .metrics import estimate_norm_constant, toscani_distance, toscani_profile
from .reshuffle import agent_sim, integrate_ode
from .transport import wasserstein1_cdf, wasserstein_p
from .verify import report_to_json, sweep

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3
EXIT_INTEGRATION = 4


@dataclass
class RunConfig:
    """Everything that determines a run's outputs, digest-able."""

    command: str
    seed: int = 0
    params: dict = field(default_factory=dict)

    def digest(self) -> str:
        return config_digest({"command": self.command, "seed": self.seed, **self.params})


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _header_lines(cfg: RunConfig) -> list[str]:
    return [f"config_digest={cfg.digest()}", f"seed={cfg.seed}"]


def _write_csv(path: str, cfg: RunConfig, columns: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        for line in _header_lines(cfg):
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _cmd_metric(args) -> int:
    a = load_dist(args.dist_a)
    b = load_dist(args.dist_b)
    if args.kind == "d1":
        value = toscani_distance(a, b, 1).value
    elif args.kind == "d2":
        value = toscani_distance(a, b, 2).value
        if math.isinf(value) and not args.allow_infinite:
            raise UnequalMeans(
                "order-2 distance is infinite for unequal means; "
                "pass --allow-infinite to print 'inf'"
            )
    elif args.kind == "w1":
        value = wasserstein1_cdf(a, b)
    else:
        value = wasserstein_p(a, b, 2)
    print(_fmt(value))
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = RunConfig(
        "verify",
        args.seed,
        {
            "which": args.which,
            "trials": args.trials,
            "K": args.support,
            "alpha": args.alpha,
            "workers": args.workers,
        },
    )
    report = sweep(
        args.which, args.trials, args.support,
        alpha=args.alpha, seed=args.seed, workers=args.workers,
    )
    # elapsed is the one run-varying quantity; keep it out of the file body
    payload = report_to_json(report, include_elapsed=False)
    payload["config_digest"] = cfg.digest()
    payload["seed"] = args.seed
    payload["K"] = args.support
    payload["alpha"] = args.alpha
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"{report.name}: trials={report.trials} violations={report.violations}"
        + (f" min_slack={_fmt(report.min_slack)}" if report.min_slack is not None else "")
        + (f" max_ratio={_fmt(report.max_ratio)}" if report.max_ratio is not None else "")
    )
    print(f"elapsed: {report.elapsed:.3f} s", file=sys.stderr)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def _cmd_constant(args) -> int:
    rng = np.random.default_rng(args.seed)
    value = estimate_norm_constant(args.dim, args.trials, rng)
    print(_fmt(value))
    return EXIT_OK


def _initial_dist(init: str, mu: float) -> DiscreteDist:
    if init == "dirac":
        m = round(mu)
        if abs(mu - m) > 1e-9:
            raise DomainError("dirac initial condition needs an integer mu")
        return dirac(int(m))
    if init == "poisson":
        return poisson_dist(mu, 1e-12)
    if init.startswith("file:"):
        return load_dist(init[len("file:"):])
    raise DomainError(f"unknown init {init!r}; use dirac, poisson, or file:PATH")


def _cmd_ode(args) -> int:
    cfg = RunConfig(
        "ode",
        args.seed,
        {
            "mu": args.mu,
            "init": args.init,
            "dt": args.dt,
            "t_end": args.t_end,
            "sample_every": args.sample_every,
            "n_max": args.n_max,
        },
    )
    p0 = _initial_dist(args.init, args.mu)
    traj = integrate_ode(
        p0, args.mu, args.dt, args.t_end,
        sample_every=args.sample_every, n_max=args.n_max,
    )
    rows = (
        [_fmt(s.t), _fmt(s.d2), _fmt(s.w1), _fmt(s.w2), _fmt(s.mass_defect), _fmt(s.mean)]
        for s in traj.samples
    )
    _write_csv(args.out, cfg, ["t", "D2", "W1", "W2", "mass_defect", "mean"], rows)
    print(f"wrote {len(traj.samples)} samples to {args.out}")
    return EXIT_OK


def _cmd_abm(args) -> int:
    snapshots = [float(s) for s in args.snapshots.split(",") if s.strip()]
    cfg = RunConfig(
        "abm",
        args.seed,
        {
            "agents": args.agents,
            "mu": args.mu,
            "t_end": args.t_end,
            "snapshots": snapshots,
        },
    )
    rng = np.random.default_rng(args.seed)
    snaps = agent_sim(args.agents, args.mu, args.t_end, snapshots, rng)

    def rows():
        for t, dist in snaps:
            for n, frac in enumerate(dist.probs):
                yield [_fmt(t), str(n), str(int(round(frac * args.agents))), _fmt(frac)]

    _write_csv(args.out, cfg, ["t", "n", "count", "fraction"], rows())
    print(f"wrote {len(snaps)} snapshots to {args.out}")
    return EXIT_OK


def _cmd_profile(args) -> int:
    cfg = RunConfig(
        "profile",
        args.seed,
        {
            "dist_a": args.dist_a,
            "dist_b": args.dist_b,
            "order": args.order,
            "grid": args.grid,
        },
    )
    a = load_dist(args.dist_a)
    b = load_dist(args.dist_b)
    pairs = toscani_profile(a, b, args.order, args.grid)
    _write_csv(args.out, cfg, ["z", "ratio"], ([_fmt(z), _fmt(r)] for z, r in pairs))
    print(f"wrote {len(pairs)} grid points to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgfmetrics",
        description="Generating-function metrics, Wasserstein distances, and the reshuffling model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="distance between two distribution files")
    p.add_argument("--dist-a", required=True)
    p.add_argument("--dist-b", required=True)
    p.add_argument("--kind", required=True, choices=["d1", "d2", "w1", "w2"])
    p.add_argument("--allow-infinite", action="store_true",
                   help="print 'inf' instead of failing when d2 diverges")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_metric)

    p = sub.add_parser("verify", help="randomized inequality sweep")
    p.add_argument("--which", required=True, choices=["part1", "part2", "part3", "w1w2"])
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--support", "-K", type=int, required=True, dest="support")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("constant", help="lower bound on the norm equivalence constant")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_constant)

    p = sub.add_parser("ode", help="mean-field integration toward equilibrium")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--init", default="dirac", help="dirac, poisson, or file:PATH")
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--sample-every", type=float, default=0.5)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_ode)

    p = sub.add_parser("abm", help="finite-N agent-based simulation")
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--snapshots", required=True, help="comma-separated times")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_abm)

    p = sub.add_parser("profile", help="ratio profile over the unit interval")
    p.add_argument("--dist-a", required=True)
    p.add_argument("--dist-b", required=True)
    p.add_argument("--order", type=int, required=True, choices=[1, 2])
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_profile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (NotNormalized, NegativeMass, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except IntegrationError as exc:
        print(f"error: integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except (UnequalMeans, DomainError, UnsupportedOrder, EmptyVector, GenerationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PgfMetricsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
