"""Binomial reshuffling money-exchange model.

Paired agents pool their (integer) wealth and split it by a Binomial(total,
1/2) draw.  The module provides the mean-field collision operator and a
fixed-step RK4 integrator for the law of a single agent, tracking distance
to the Poisson equilibrium, plus the finite-N event-driven simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import TOL, config_digest
from .dists import DiscreteDist, make_dist, poisson_dist
from .errors import (
    DomainError,
    InsufficientSamples,
    MassLeak,
    MeanDrift,
    MetricUnderflow,
    NegativeProbability,
    UnequalMeans,
)
from .metrics import max_abs_on_unit_interval, ratio_poly_coeffs
from .transport import w1_from_probs, wp_from_probs


def _binomial_rows(t_max: int) -> list[np.ndarray]:
    """rows[T][n] = C(T, n) / 2^T for n = 0..T, by the Pascal recurrence.

    rows[0] = [1.0]: the empty pool returns to state 0 with probability one,
    which is the mass-conserving reading of the (0,0) interaction.
    """
    rows = [np.array([1.0])]
    for T in range(1, t_max + 1):
        prev = rows[-1]
        row = np.zeros(T + 1)
        row[:T] += 0.5 * prev
        row[1:] += 0.5 * prev
        rows.append(row)
    return rows


def _gain(p: np.ndarray, rows: list[np.ndarray]) -> np.ndarray:
    """Post-collision law of one member of a random pair drawn from p.

    Grouped by pooled total: the self-convolution of p weights the
    Binomial(total, 1/2) rows.  Output length 2*len(p) - 1.
    """
    conv = np.convolve(p, p)
    gain = np.zeros(conv.size)
    for total, w in enumerate(conv):
        if w != 0.0:
            gain[: total + 1] += w * rows[total]
    return gain


def _q_field(p: np.ndarray, rows: list[np.ndarray]) -> np.ndarray:
    # Loss evaluated as p_n * (total mass): identical to p_n on the simplex,
    # but it makes total mass and mean neutral directions of the flow instead
    # of exponentially unstable ones, so rounding noise does not blow up.
    q = _gain(p, rows)
    q[: p.size] -= p * p.sum()
    return q


def collision_operator(p: DiscreteDist) -> np.ndarray:
    """Mean-field gain-minus-loss vector field Q[p].

    Returns a signed vector of length 2K+1 (collisions can double the
    support).  Conserves total mass and mean: sum Q = 0 and sum n*Q_n = 0 up
    to rounding.  Note the (0,0) interaction keeps the pair at state 0, so
    the empty-economy point mass is a fixed point.
    """
    rows = _binomial_rows(2 * p.K)
    return _q_field(p.probs, rows)


@dataclass(frozen=True)
class MeanFieldState:
    """Snapshot of the mean-field law with its conservation diagnostics."""

    p: DiscreteDist
    t: float
    mass_defect: float
    mean: float


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    d2: float
    w1: float
    w2: float
    mass_defect: float
    mean: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled metric time series along one mean-field integration."""

    samples: tuple[TrajectoryPoint, ...]
    config_digest: str
    final_state: MeanFieldState

    def __post_init__(self):
        ts = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("sample times must be strictly increasing")


def _default_n_max(mu: float) -> int:
    tail_based = poisson_dist(mu, 1e-12).K
    return max(int(math.ceil(4.0 * mu + 40.0)), tail_based)


def integrate_ode(
    p0: DiscreteDist,
    mu: float,
    dt: float,
    t_end: float,
    sample_every: float = 0.5,
    n_max: int | None = None,
) -> Trajectory:
    """Integrate dp/dt = Q[p] from p0 with classical fixed-step RK4.

    The state lives on {0, ..., n_max}; gain flowing past n_max is dropped
    and shows up in the monitored mass defect, never silently renormalized.
    At each sample time the order-2 metric, W_1 and W_2 against the
    truncated Poisson(mu) equilibrium are recorded together with the mass
    defect and the mean.  Aborts with MassLeak / NegativeProbability /
    MeanDrift when the respective tolerance is breached.
    """
    if abs(p0.mean - mu) > TOL.mean_gate:
        raise UnequalMeans(
            f"initial mean {p0.mean:.6g} does not match mu={mu:.6g} within {TOL.mean_gate:g}"
        )
    if not (0.0 < dt <= 0.1):
        raise DomainError("dt must lie in (0, 0.1]")
    if t_end <= 0.0:
        raise DomainError("t_end must be positive")
    if sample_every <= 0.0:
        raise DomainError("sample_every must be positive")
    if n_max is None:
        n_max = _default_n_max(mu)
    if n_max < p0.K:
        raise DomainError(f"n_max={n_max} smaller than the initial support bound {p0.K}")

    size = n_max + 1
    state = np.zeros(size)
    state[: p0.probs.size] = p0.probs
    rows = _binomial_rows(2 * n_max)
    pstar = poisson_dist(mu, 1e-12).probs  # metric helpers pad as needed
    mean0 = float(np.arange(size) @ state)
    ns = np.arange(size, dtype=np.float64)

    def rhs(p: np.ndarray) -> np.ndarray:
        return _q_field(p, rows)[:size]

    points: list[TrajectoryPoint] = []

    def record(t: float):
        defect = abs(1.0 - float(state.sum()))
        mean = float(ns @ state)
        clean = np.maximum(state, 0.0)
        clean /= clean.sum()
        d2, _, _ = max_abs_on_unit_interval(ratio_poly_coeffs(clean, pstar, 2))
        points.append(
            TrajectoryPoint(
                t=t,
                d2=d2,
                w1=w1_from_probs(clean, pstar),
                w2=wp_from_probs(clean, pstar, 2),
                mass_defect=defect,
                mean=mean,
            )
        )

    record(0.0)
    n_steps = int(math.ceil(t_end / dt - 1e-12))
    next_sample = sample_every
    t = 0.0
    for k in range(1, n_steps + 1):
        h = min(dt, t_end - t)
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = min(k * dt, t_end)

        defect = abs(1.0 - float(state.sum()))
        if defect > TOL.mass_defect:
            raise MassLeak("mass defect exceeded tolerance", t, defect)
        low = float(state.min())
        if low < -TOL.negative_prob:
            raise NegativeProbability("state entry went negative", t, low)
        drift = abs(float(ns @ state) - mean0)
        if drift > TOL.mean_drift:
            raise MeanDrift("conserved mean drifted", t, drift)

        if t >= next_sample - 1e-9 or k == n_steps:
            if t > points[-1].t + 1e-12:
                record(t)
            while next_sample <= t + 1e-9:
                next_sample += sample_every

    digest = config_digest(
        {
            "mu": mu,
            "dt": dt,
            "t_end": t_end,
            "sample_every": sample_every,
            "n_max": n_max,
            "p0": p0.probs.tobytes().hex(),
        }
    )
    clean = np.maximum(state, 0.0)
    clean /= clean.sum()
    final = MeanFieldState(
        p=make_dist(clean),
        t=t,
        mass_defect=abs(1.0 - float(state.sum())),
        mean=float(ns @ state),
    )
    return Trajectory(tuple(points), digest, final)


@dataclass(frozen=True)
class AgentState:
    """Integer wealth vector; the total is conserved exactly by exchanges."""

    wealths: np.ndarray
    t: float
    total: int

    def __post_init__(self):
        arr = np.asarray(self.wealths)
        if not np.issubdtype(arr.dtype, np.integer):
            raise DomainError("wealths must be integers")
        if arr.min(initial=0) < 0:
            raise DomainError("wealths must be non-negative")
        if int(arr.sum()) != self.total:
            raise DomainError(
                f"wealth total {int(arr.sum())} differs from the conserved {self.total}"
            )


def _binomial_half(total: int, word: int, rng: np.random.Generator) -> int:
    """Exact Binomial(total, 1/2) draw.

    totals <= 64: popcount of `total` fair bits taken from one uniform
    machine word.  Larger totals: inversion by sequential pmf summation,
    seeded by the same word mapped to a uniform in [0, 1).  Totals past the
    float underflow point of 0.5^total (not reachable in practice) fall back
    to chunked popcounts, which stay exact.
    """
    if total <= 64:
        return int((word & ((1 << total) - 1)).bit_count())
    if total <= 1000:
        u = word / 2.0**64
        pmf = 0.5**total
        cum = pmf
        n = 0
        while u > cum and n < total:
            n += 1
            pmf *= (total - n + 1) / n
            cum += pmf
        return n
    n = 0
    left = total
    while left > 0:
        take = min(left, 64)
        w = int(rng.integers(0, 2**64, dtype=np.uint64)) & ((1 << take) - 1)
        n += w.bit_count()
        left -= take
    return n


def agent_sim(
    N: int,
    mu: int,
    t_end: float,
    snapshot_times: Sequence[float],
    rng: np.random.Generator,
) -> list[tuple[float, DiscreteDist]]:
    """Event-driven finite-N simulation of the reshuffling dynamics.

    All N agents start with exactly ``mu`` dollars.  Events arrive with
    exponential inter-arrival times at rate N; each event picks an unordered
    agent pair uniformly and redistributes their pooled wealth by a fair
    binomial split.  Snapshots record the empirical wealth distribution at
    the requested times (state right after all events up to that time).
    """
    if N < 2:
        raise DomainError("need at least 2 agents")
    if not (isinstance(mu, (int, np.integer)) and mu > 0):
        raise DomainError("mu must be a positive integer")
    if t_end <= 0.0:
        raise DomainError("t_end must be positive")
    snaps = sorted(float(s) for s in snapshot_times)
    if not snaps:
        raise DomainError("at least one snapshot time is required")
    if snaps[0] < 0.0 or snaps[-1] > t_end:
        raise DomainError("snapshot times must lie within [0, t_end]")

    wealths = np.full(N, mu, dtype=np.int64)
    total = N * int(mu)
    out: list[tuple[float, DiscreteDist]] = []

    def empirical(t: float) -> DiscreteDist:
        AgentState(wealths, t, total)  # conservation check at every snapshot
        counts = np.bincount(wealths)
        return make_dist(counts / float(N))

    chunk = 1 << 14
    idx = chunk
    waits = ii = jj = words = None
    t = 0.0
    ptr = 0
    while ptr < len(snaps):
        if idx == chunk:
            waits = rng.standard_exponential(chunk) / N
            ii = rng.integers(0, N, chunk)
            jj = rng.integers(0, N - 1, chunk)
            words = rng.integers(0, 2**64, chunk, dtype=np.uint64)
            idx = 0
        t_next = t + waits[idx]
        while ptr < len(snaps) and snaps[ptr] < t_next:
            out.append((snaps[ptr], empirical(snaps[ptr])))
            ptr += 1
        if ptr >= len(snaps):
            break
        i = int(ii[idx])
        j = int(jj[idx])
        if j >= i:
            j += 1
        pool = int(wealths[i]) + int(wealths[j])
        b = _binomial_half(pool, int(words[idx]), rng)
        wealths[i] = b
        wealths[j] = pool - b
        t = t_next
        idx += 1
    return out


@dataclass(frozen=True)
class DecayFit:
    rate: float
    r_squared: float


def fit_decay_rate(
    traj: Trajectory, metric: str, window: tuple[float, float]
) -> DecayFit:
    """Least-squares decay fit over a time window of a trajectory.

    metric "D2": slope of log(value) vs t; ``rate`` is the decay rate
    (positive when the metric decays exponentially).  metric "W2": slope of
    log(value) vs log(t); ``rate`` is the power-law exponent (negative when
    the metric decays).  Requires at least 10 usable samples in the window;
    values at or below 1e-13 (and t <= 0 for the log-log fit) are unusable.
    """
    if metric not in ("D2", "W2"):
        raise DomainError("metric selector must be 'D2' or 'W2'")
    lo, hi = window
    in_window = [s for s in traj.samples if lo <= s.t <= hi]
    if len(in_window) < 10:
        raise InsufficientSamples(
            f"{len(in_window)} samples in window [{lo:g}, {hi:g}], need 10"
        )
    if metric == "D2":
        pts = [(s.t, s.d2) for s in in_window if s.d2 > 1e-13]
    else:
        pts = [(s.t, s.w2) for s in in_window if s.w2 > 1e-13 and s.t > 0.0]
    if len(pts) < 10:
        raise MetricUnderflow(
            f"only {len(pts)} usable metric values in window, need 10"
        )
    ts = np.array([p[0] for p in pts])
    ys = np.log(np.array([p[1] for p in pts]))
    xs = ts if metric == "D2" else np.log(ts)
    slope, intercept = np.polyfit(xs, ys, 1)
    residuals = ys - (slope * xs + intercept)
    ss_res = float(residuals @ residuals)
    centered = ys - ys.mean()
    ss_tot = float(centered @ centered)
    r2 = 1.0 if ss_tot == 0.0 and ss_res < 1e-30 else 1.0 - ss_res / ss_tot
    rate = -float(slope) if metric == "D2" else float(slope)
    return DecayFit(rate=rate, r_squared=r2)
