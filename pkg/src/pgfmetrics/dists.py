"""Finitely supported probability distributions on the non-negative integers.

A distribution is a dense vector of probabilities indexed by n = 0, 1, ..., K.
Construction validates; it never silently renormalizes (the one exception is
the truncated Poisson builder, which renormalizes its own truncation and
records the removed mass).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .config import TOL
from .errors import DomainError, GenerationFailed, NegativeMass, NotNormalized


def _trim_trailing_zeros(arr: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return arr[:1]
    return arr[: nz[-1] + 1]


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """Probability vector on {0, ..., K}.

    Invariants: every entry >= 0 and the entries sum to 1 within
    ``TOL.normalization``.  Trailing zeros carry no meaning: two
    distributions are equal iff their zero-padded vectors agree entrywise.
    """

    probs: np.ndarray
    renorm_defect: float = field(default=0.0, compare=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.probs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("probability vector must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise NotNormalized("probability vector contains non-finite entries")
        if np.any(arr < 0.0):
            raise NegativeMass(f"negative probability entry: min={arr.min():.3e}")
        total = float(arr.sum())
        if abs(total - 1.0) > TOL.normalization:
            raise NotNormalized(f"probabilities sum to {total!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def K(self) -> int:
        """Largest retained index (support bound)."""
        return self.probs.size - 1

    @property
    def mean(self) -> float:
        return float(np.arange(self.probs.size) @ self.probs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteDist):
            return NotImplemented
        return np.array_equal(
            _trim_trailing_zeros(self.probs), _trim_trailing_zeros(other.probs)
        )

    def __hash__(self) -> int:
        return hash(_trim_trailing_zeros(self.probs).tobytes())

    def __repr__(self) -> str:
        return f"DiscreteDist(K={self.K}, mean={self.mean:.6g})"


def make_dist(probs: Sequence[float]) -> DiscreteDist:
    """Validate a raw sequence into a DiscreteDist.

    Entries with magnitude below ``TOL.clamp`` are clamped to exact zero, as
    are tolerated rounding negatives in (-TOL.negative_mass, 0).  Anything
    below -TOL.negative_mass raises NegativeMass; a sum off by more than
    TOL.normalization raises NotNormalized.  Never renormalizes.
    """
    arr = np.array(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("probability vector must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise NotNormalized("probability vector contains non-finite entries")
    if np.any(arr < -TOL.negative_mass):
        raise NegativeMass(f"negative probability entry: min={arr.min():.3e}")
    arr[np.abs(arr) < TOL.clamp] = 0.0
    np.maximum(arr, 0.0, out=arr)
    total = float(arr.sum())
    if abs(total - 1.0) > TOL.normalization:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1")
    return DiscreteDist(arr)


def dirac(n: int) -> DiscreteDist:
    """Point mass at the non-negative integer n."""
    if n < 0:
        raise DomainError("point mass location must be a non-negative integer")
    arr = np.zeros(n + 1)
    arr[n] = 1.0
    return DiscreteDist(arr)


def poisson_dist(mu: float, tail_tol: float = 1e-12) -> DiscreteDist:
    """Truncated Poisson(mu), renormalized.

    The truncation point is the smallest K whose omitted tail mass is below
    ``tail_tol``; the retained mass is renormalized to 1 and the removed mass
    is recorded in ``renorm_defect``.
    """
    if not (mu > 0):
        raise DomainError("mu must be positive")
    if not (0 < tail_tol <= 1e-6):
        raise DomainError("tail_tol must lie in (0, 1e-6]")
    hi = int(mu + 20.0 * math.sqrt(mu) + 80.0)
    while True:
        ns = np.arange(hi + 1)
        sf = stats.poisson.sf(ns, mu)
        below = np.flatnonzero(sf < tail_tol)
        if below.size:
            K = int(below[0])
            break
        hi *= 2
    probs = stats.poisson.pmf(np.arange(K + 1), mu)
    retained = float(probs.sum())
    return DiscreteDist(probs / retained, renorm_defect=1.0 - retained)


def moment(f: DiscreteDist, r: float) -> float:
    """Raw moment sum_n n^r f_n, with the convention 0^0 = 1."""
    if r < 0:
        raise DomainError("moment order must be non-negative")
    n = np.arange(f.probs.size, dtype=np.float64)
    return float(np.sum(np.power(n, r) * f.probs))


@dataclass(frozen=True)
class CdfVector:
    """Running sums F_0 <= F_1 <= ... <= F_K = 1 (within tolerance)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("cdf vector must be a non-empty 1-D sequence")
        if np.any(np.diff(arr) < 0.0):
            raise DomainError("cdf vector must be non-decreasing")
        if abs(float(arr[-1]) - 1.0) > TOL.normalization:
            raise NotNormalized(f"cdf ends at {float(arr[-1])!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


def cdf(f: DiscreteDist) -> CdfVector:
    return CdfVector(np.cumsum(f.probs))


def pgf_eval(f: DiscreteDist, z: float) -> float:
    """Probability generating function sum_n z^n f_n, via Horner's scheme."""
    if not (0.0 <= z <= 1.0):
        raise DomainError(f"generating function argument {z!r} outside [0, 1]")
    acc = 0.0
    for p in f.probs[::-1]:
        acc = acc * z + p
    return acc


def random_dist(K: int, rng: np.random.Generator) -> DiscreteDist:
    """Uniform draw from the probability simplex on {0, ..., K}.

    K+1 independent standard-exponential draws, normalized.
    """
    if K < 0:
        raise DomainError("support bound must be non-negative")
    draws = rng.standard_exponential(K + 1)
    return make_dist(draws / draws.sum())


def _shift_mean_to(probs: np.ndarray, target: float, rng: np.random.Generator):
    """Move mass between one random feasible index pair to hit a target mean.

    Returns the adjusted copy, or None when no single-pair transfer can
    absorb the gap.  Iterates a few polish passes so the residual mean
    difference lands under TOL.mean_equality.
    """
    out = probs.copy()
    n = np.arange(out.size, dtype=np.float64)
    span = n[None, :] - n[:, None]          # span[i, j] = j - i
    upper = span > 0
    for _ in range(6):
        gap = target - float(n @ out)
        if abs(gap) < TOL.mean_equality:
            return out
        with np.errstate(divide="ignore"):
            need = np.where(upper, abs(gap) / span, np.inf)
        # gap > 0: donor i sends mass up to j; gap < 0: donor j sends it down to i
        donor = out[:, None] if gap > 0 else out[None, :]
        pairs = np.argwhere(upper & (donor >= need))
        if pairs.size == 0:
            return None
        i, j = pairs[rng.integers(pairs.shape[0])]
        m = abs(gap) / (j - i)
        if gap > 0:
            out[i] -= m
            out[j] += m
        else:
            out[j] -= m
            out[i] += m
    gap = target - float(n @ out)
    return out if abs(gap) < TOL.mean_equality else None


def random_equal_mean_pair(
    K: int, rng: np.random.Generator
) -> tuple[DiscreteDist, DiscreteDist]:
    """Two independent simplex draws, the second nudged to match means exactly.

    Resamples up to 100 times when no feasible single-pair transfer exists;
    raises GenerationFailed afterwards.  The returned means differ by less
    than TOL.mean_equality.
    """
    if K < 2:
        raise DomainError("equal-mean pairs need a support bound of at least 2")
    for _ in range(100):
        f = random_dist(K, rng)
        g_raw = random_dist(K, rng)
        shifted = _shift_mean_to(g_raw.probs, f.mean, rng)
        if shifted is None:
            continue
        g = make_dist(shifted)
        if abs(f.mean - g.mean) < TOL.mean_equality:
            return f, g
    raise GenerationFailed(f"no equal-mean pair found in 100 attempts (K={K})")


def pad_to_common(pf: np.ndarray, pg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zero-pad two probability vectors to a shared length."""
    size = max(pf.size, pg.size)
    if pf.size < size:
        pf = np.pad(pf, (0, size - pf.size))
    if pg.size < size:
        pg = np.pad(pg, (0, size - pg.size))
    return pf, pg


def digest(f: DiscreteDist) -> str:
    """Short content hash, invariant under trailing-zero padding."""
    return hashlib.sha256(_trim_trailing_zeros(f.probs).tobytes()).hexdigest()[:12]


def load_dist(path: str | Path) -> DiscreteDist:
    """Read a distribution from a JSON file of the form {"probs": [...]}."""
    with open(path) as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or "probs" not in payload:
        raise DomainError(f"{path}: expected a JSON object with a 'probs' array")
    return make_dist(payload["probs"])


def dump_dist(f: DiscreteDist, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump({"probs": [float(p) for p in f.probs]}, fh)
        fh.write("\n")
