"""Generating-function (Toscani) distances of order 1 and 2, and the
auxiliary staircase norm used to compare them with transport distances.

The order-s distance is sup over z in (0,1) of |f^(z) - g^(z)| / (1-z)^s,
where f^ is the probability generating function.  For finitely supported
distributions both orders admit a singularity-free rewrite as the absolute
value of a polynomial in z:

    order 1:  sum_n z^n (F_n - G_n)                (F, G the CDFs)
    order 2:  sum_n z^n T_n,  T_n = sum_{k<=n} (F_k - G_k)   (equal means)

so the supremum over the open interval equals the maximum of |polynomial|
over the closed interval [0, 1], which we find with a dense grid followed by
golden-section refinement around the best cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .config import SUP, TOL
from .dists import DiscreteDist, pad_to_common, pgf_eval
from .errors import DomainError, EmptyVector, UnsupportedOrder

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ToscaniResult:
    """Value of an order-s distance plus where and how it was found.

    ``value`` may be +inf (order 2 with unequal means); ``argmax_z`` is the
    location of the maximum of the continuous extension on [0, 1] and is
    present whenever the value is finite.  ``evaluations`` counts objective
    evaluations spent by the search.
    """

    value: float
    argmax_z: float | None
    evaluations: int

    def __post_init__(self):
        if not (self.value >= 0.0):
            raise DomainError("distance value must be non-negative")
        if math.isfinite(self.value) and self.argmax_z is None:
            raise DomainError("finite distance requires an argmax location")


def max_abs_on_unit_interval(
    coeffs: np.ndarray,
    grid_size: int = SUP.grid_size,
    refine_tol: float = SUP.refine_tol,
) -> tuple[float, float, int]:
    """Maximize |polynomial(z)| over [0, 1].

    ``coeffs`` are ascending-degree coefficients.  Returns (value, argmax,
    evaluations).  Dense grid first, then golden-section refinement on the
    cell pair around the best grid point down to ``refine_tol`` width.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    zs = np.linspace(0.0, 1.0, grid_size)
    vals = np.abs(npoly.polyval(zs, coeffs))
    k = int(np.argmax(vals))
    best_val = float(vals[k])
    best_z = float(zs[k])
    evals = grid_size

    rev = [float(c) for c in coeffs[::-1]]

    def objective(z: float) -> float:
        acc = 0.0
        for c in rev:
            acc = acc * z + c
        return abs(acc)

    a = float(zs[max(k - 1, 0)])
    b = float(zs[min(k + 1, grid_size - 1)])
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1 = objective(x1)
    f2 = objective(x2)
    evals += 2
    while b - a > refine_tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = objective(x2)
        evals += 1
    for z, v in ((x1, f1), (x2, f2)):
        if v > best_val:
            best_val, best_z = v, z
    return best_val, best_z, evals


def ratio_poly_coeffs(pf: np.ndarray, pg: np.ndarray, s: int) -> np.ndarray:
    """Coefficients of the singularity-free polynomial form of the ratio.

    For s=2 the rewrite assumes equal means; callers enforce the gate.
    """
    a, b = pad_to_common(np.asarray(pf, float), np.asarray(pg, float))
    diff = np.cumsum(a) - np.cumsum(b)
    if s == 1:
        return diff
    return np.cumsum(diff)


def toscani_distance(
    f: DiscreteDist,
    g: DiscreteDist,
    s: int,
    grid_size: int = SUP.grid_size,
    refine_tol: float = SUP.refine_tol,
) -> ToscaniResult:
    """Order-s generating-function distance between f and g.

    For s=2, means differing by more than ``TOL.mean_gate`` make the ratio
    diverge as z -> 1, so the result is declared +inf; means within the gate
    are treated as exactly equal by the polynomial rewrite.
    """
    if s not in (1, 2):
        raise UnsupportedOrder(f"order must be 1 or 2, got {s!r}")
    if s == 2 and abs(f.mean - g.mean) > TOL.mean_gate:
        return ToscaniResult(math.inf, None, 0)
    coeffs = ratio_poly_coeffs(f.probs, g.probs, s)
    value, z, evals = max_abs_on_unit_interval(coeffs, grid_size, refine_tol)
    return ToscaniResult(value, z, evals)


def toscani_profile(
    f: DiscreteDist, g: DiscreteDist, s: int, grid_size: int
) -> list[tuple[float, float]]:
    """Ratio |f^(z) - g^(z)| / (1-z)^s on a uniform grid over [0, 1].

    Uses the singularity-free polynomial whenever it is valid (always for
    s=1; equal means for s=2); endpoints come from the continuous extension.
    For s=2 with unequal means the ratio is evaluated directly and diverges
    at z=1, reported as +inf.
    """
    if s not in (1, 2):
        raise UnsupportedOrder(f"order must be 1 or 2, got {s!r}")
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    zs = np.linspace(0.0, 1.0, grid_size)
    if s == 2 and abs(f.mean - g.mean) > TOL.mean_gate:
        out = []
        for z in zs:
            if z == 1.0:
                out.append((1.0, math.inf))
            else:
                num = abs(pgf_eval(f, float(z)) - pgf_eval(g, float(z)))
                out.append((float(z), num / (1.0 - float(z)) ** s))
        return out
    coeffs = ratio_poly_coeffs(f.probs, g.probs, s)
    vals = np.abs(npoly.polyval(zs, coeffs))
    return [(float(z), float(v)) for z, v in zip(zs, vals)]


def ell_norm(
    a,
    grid_size: int = SUP.grid_size,
    refine_tol: float = SUP.refine_tol,
) -> float:
    """Staircase norm on R^N (entries indexed 1..N):

        ell[a] = sup over z in (0,1) of | sum_n a_n (1 + z + ... + z^{n-1}) |

    which equals the max over [0, 1] of |polynomial| with coefficient of z^k
    given by the suffix sum a_{k+1} + ... + a_N.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError("ell_norm expects a 1-D vector")
    if arr.size == 0:
        raise EmptyVector("ell_norm of an empty vector is undefined")
    suffix = np.cumsum(arr[::-1])[::-1]
    value, _, _ = max_abs_on_unit_interval(suffix, grid_size, refine_tol)
    return value


def _coordinate_ascent(a: np.ndarray, ratio: float) -> tuple[np.ndarray, float]:
    """Greedy per-coordinate improvement of ||a||_1 / ell[a], accept-only."""
    a = a / np.abs(a).sum()
    step = 0.5
    while step > 1e-7:
        for _ in range(50):  # passes per step; each strictly improves
            improved = False
            for i in range(a.size):
                for sgn in (1.0, -1.0):
                    cand = a.copy()
                    cand[i] += sgn * step
                    l1 = float(np.abs(cand).sum())
                    if l1 == 0.0:
                        continue
                    r = l1 / ell_norm(cand)
                    if r > ratio * (1.0 + 1e-12):
                        a, ratio = cand / l1, r
                        improved = True
            if not improved:
                break
        step *= 0.5
    return a, ratio


def estimate_norm_constant(N: int, trials: int, rng: np.random.Generator) -> float:
    """Empirical lower bound on C(N) = sup_{a != 0} ||a||_1 / ell[a].

    Random Gaussian directions, with coordinate-wise hill climbing launched
    from each record-breaking draw.  The returned value is a running maximum,
    hence non-decreasing in ``trials`` for a fixed seed, and is a lower
    bound on the true constant, not the constant itself.
    """
    if N < 1:
        raise DomainError("dimension must be at least 1")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    best = 0.0
    for _ in range(trials):
        a = rng.standard_normal(N)
        l1 = float(np.abs(a).sum())
        if l1 == 0.0:
            continue
        r = l1 / ell_norm(a)
        if r > best:
            _, climbed = _coordinate_ascent(a, r)
            best = max(best, climbed)
    return best


def total_variation(f: DiscreteDist, g: DiscreteDist) -> float:
    """Half the l1 distance between the padded probability vectors."""
    a, b = pad_to_common(f.probs, g.probs)
    return 0.5 * float(np.abs(a - b).sum())
