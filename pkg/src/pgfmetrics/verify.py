"""Numerical verification harness for the metric comparison inequalities.

Three pass/fail inequalities (order-1 domination, order-2 domination, and
the W_1 -> W_2 moment interpolation) plus one bounded-ratio study for the
compact-support reverse bound, whose comparison constant is existential:
there we report the empirical worst ratio rather than asserting a bound.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .dists import DiscreteDist, digest, moment, random_dist, random_equal_mean_pair
from .errors import DegenerateDistance, DomainError, UnequalMeans
from .metrics import toscani_distance
from .transport import wasserstein1_cdf, wasserstein_p

SWEEP_KINDS = ("part1", "part2", "part3", "w1w2")


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated inequality instance: lhs <= rhs up to slack tolerance."""

    name: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    inputs_digest: str

    @classmethod
    def from_sides(cls, name: str, lhs: float, rhs: float, inputs_digest: str):
        slack = rhs - lhs
        return cls(name, lhs, rhs, slack, slack >= -TOL.slack, inputs_digest)


@dataclass(frozen=True)
class Part3Witness:
    """One empirical witness of the compact-support comparison constant."""

    w2_squared: float
    d2_power: float
    ratio: float


@dataclass(frozen=True)
class SweepReport:
    """Aggregate over randomized inequality trials.

    ``min_slack``/``worst_case`` describe the closest call among inequality
    trials; for the part3 ratio study they are None and ``max_ratio`` /
    ``skipped`` carry the useful aggregates instead.  Deterministic given
    (name, trials, K, alpha, seed) regardless of worker scheduling.
    """

    name: str
    trials: int
    violations: int
    min_slack: float | None
    worst_case: tuple[str, str] | None
    worst_seed: int | None
    elapsed: float
    max_ratio: float | None = None
    skipped: int = 0


def check_part1(f: DiscreteDist, g: DiscreteDist, inputs_digest: str | None = None):
    """Order-1 metric dominated by W_1: lhs = D_1(f,g), rhs = W_1(f,g)."""
    lhs = toscani_distance(f, g, 1).value
    rhs = wasserstein1_cdf(f, g)
    return InequalityReport.from_sides("part1", lhs, rhs, inputs_digest or _pair_digest(f, g))


def check_part2(f: DiscreteDist, g: DiscreteDist, inputs_digest: str | None = None):
    """Order-2 metric dominated by W_2 under equal means:

        D_2 <= W_2^2 / 2 + min(second moments)^(1/2) * W_2
    """
    if abs(f.mean - g.mean) >= TOL.mean_gate:
        raise UnequalMeans(
            f"means differ by {abs(f.mean - g.mean):.3e} (gate {TOL.mean_gate:g})"
        )
    lhs = toscani_distance(f, g, 2).value
    w2 = wasserstein_p(f, g, 2)
    m2 = min(moment(f, 2), moment(g, 2))
    rhs = 0.5 * w2 * w2 + math.sqrt(m2) * w2
    return InequalityReport.from_sides("part2", lhs, rhs, inputs_digest or _pair_digest(f, g))


def check_part3(f: DiscreteDist, g: DiscreteDist, alpha: float) -> Part3Witness | None:
    """Empirical witness for W_2^2 <= C * D_2^(alpha/(1+alpha)).

    Returns None (a skip marker) when both sides are numerically zero.  A
    vanishing D_2 with a non-vanishing W_2 would falsify the bound and is
    escalated as DegenerateDistance.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    if abs(f.mean - g.mean) >= TOL.mean_gate:
        raise UnequalMeans(
            f"means differ by {abs(f.mean - g.mean):.3e} (gate {TOL.mean_gate:g})"
        )
    d2 = toscani_distance(f, g, 2).value
    w2 = wasserstein_p(f, g, 2)
    if d2 <= TOL.degenerate_d2:
        if w2 > 1e-9:
            raise DegenerateDistance(
                f"D_2={d2:.3e} but W_2={w2:.3e}; contradicts the comparison bound"
            )
        return None
    d2_power = d2 ** (alpha / (1.0 + alpha))
    return Part3Witness(w2 * w2, d2_power, w2 * w2 / d2_power)


def check_w1w2_interpolation(
    f: DiscreteDist, g: DiscreteDist, alpha: float, inputs_digest: str | None = None
):
    """Moment interpolation bounding W_2^2 by a power of W_1:

        W_2^2 <= 2^((2+a)/(1+a)) (a^(1/(1+a)) + a^(-a/(1+a)))
                 * m_{2+a}^(1/(1+a)) * W_1^(a/(1+a))

    with m_{2+a} the larger of the two (2+a)-th moments.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    w2 = wasserstein_p(f, g, 2)
    w1 = wasserstein1_cdf(f, g)
    m = max(moment(f, 2.0 + alpha), moment(g, 2.0 + alpha))
    e = 1.0 / (1.0 + alpha)
    rhs = 2.0 ** ((2.0 + alpha) * e) * (alpha**e + alpha ** (-alpha * e)) * m**e * w1 ** (alpha * e)
    return InequalityReport.from_sides(
        "w1w2", w2 * w2, rhs, inputs_digest or _pair_digest(f, g)
    )


def _pair_digest(f: DiscreteDist, g: DiscreteDist) -> str:
    return f"f={digest(f)};g={digest(g)}"


def _run_trials(which: str, K: int, alpha: float | None, seed: int, lo: int, hi: int):
    """Aggregate trials [lo, hi) with per-trial generators seeded seed + t."""
    violations = 0
    skipped = 0
    worst = None  # (slack, trial, fdig, gdig)
    best_ratio = None  # (ratio, trial, fdig, gdig)
    for t in range(lo, hi):
        rng = np.random.default_rng(seed + t)
        token = f"{which}:K={K}:seed={seed + t}"
        if which in ("part2", "part3"):
            f, g = random_equal_mean_pair(K, rng)
        else:
            f = random_dist(K, rng)
            g = random_dist(K, rng)
        if which == "part3":
            witness = check_part3(f, g, alpha)
            if witness is None:
                skipped += 1
                continue
            if best_ratio is None or witness.ratio > best_ratio[0]:
                best_ratio = (witness.ratio, t, digest(f), digest(g))
            continue
        if which == "part1":
            report = check_part1(f, g, token)
        elif which == "part2":
            report = check_part2(f, g, token)
        else:
            report = check_w1w2_interpolation(f, g, alpha, token)
        if not report.satisfied:
            violations += 1
        if worst is None or (report.slack, t) < (worst[0], worst[1]):
            worst = (report.slack, t, digest(f), digest(g))
    return violations, skipped, worst, best_ratio


def _merge(p1, p2):
    v1, s1, w1, r1 = p1
    v2, s2, w2, r2 = p2
    worst = w1
    if worst is None or (w2 is not None and (w2[0], w2[1]) < (worst[0], worst[1])):
        worst = w2
    best = r1
    if best is None or (r2 is not None and (r2[0], -r2[1]) > (best[0], -best[1])):
        best = r2
    return v1 + v2, s1 + s2, worst, best


def sweep(
    which: str,
    trials: int,
    K: int,
    alpha: float | None = None,
    seed: int = 0,
    workers: int = 1,
) -> SweepReport:
    """Run one named check over ``trials`` randomized pairs.

    Pairs come from the plain simplex sampler, or the equal-mean sampler
    where the inequality requires it.  Trial t draws from a generator seeded
    ``seed + t``, so reports are identical for a fixed seed no matter how
    trials are chunked over workers.
    """
    if which not in SWEEP_KINDS:
        raise DomainError(f"unknown sweep kind {which!r}; choose from {SWEEP_KINDS}")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if which in ("part3", "w1w2") and alpha is None:
        raise DomainError(f"sweep {which!r} requires alpha")
    start = time.perf_counter()
    if workers <= 1:
        partial = _run_trials(which, K, alpha, seed, 0, trials)
    else:
        bounds = np.linspace(0, trials, 4 * workers + 1).astype(int)
        chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        partial = (0, 0, None, None)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_trials, which, K, alpha, seed, lo, hi)
                for lo, hi in chunks
            ]
            for fut in futures:
                partial = _merge(partial, fut.result())
    elapsed = time.perf_counter() - start
    violations, skipped, worst, best_ratio = partial
    if which == "part3":
        return SweepReport(
            name=which,
            trials=trials,
            violations=0,
            min_slack=None,
            worst_case=None if best_ratio is None else (best_ratio[2], best_ratio[3]),
            worst_seed=None if best_ratio is None else seed + best_ratio[1],
            elapsed=elapsed,
            max_ratio=None if best_ratio is None else best_ratio[0],
            skipped=skipped,
        )
    return SweepReport(
        name=which,
        trials=trials,
        violations=violations,
        min_slack=worst[0],
        worst_case=(worst[2], worst[3]),
        worst_seed=seed + worst[1],
        elapsed=elapsed,
    )


def report_to_json(report: SweepReport, include_elapsed: bool = True) -> dict:
    """JSON-ready mapping; elapsed may be suppressed for byte-stable files."""
    payload = {
        "name": report.name,
        "trials": report.trials,
        "violations": report.violations,
        "min_slack": report.min_slack,
        "worst_case_seed": report.worst_seed,
        "elapsed_sec": report.elapsed if include_elapsed else None,
    }
    if report.max_ratio is not None or report.name == "part3":
        payload["max_ratio"] = report.max_ratio
        payload["skipped"] = report.skipped
    return payload
