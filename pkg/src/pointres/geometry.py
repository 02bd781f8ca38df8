"""Finite point configurations in R^3.

A configuration is a set of N distinct interaction centers Y_1..Y_N together
with the complex strength parameter alpha. Geometry supplies the pairwise
distance matrix, the diameter, and the size functional

    V(Y) = max over permutations sigma of sum_j |Y_j - Y_sigma(j)|,

a max-weight perfect assignment on the distance matrix (fixed points allowed,
diagonal weight 0). V controls the asymptotic density of resonances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DuplicatePoints, EmptyConfiguration, TooLarge

DEDUP_TOL = 1e-12      # relative coincidence threshold, floored at unit scale
BRUTE_FORCE_MAX = 8    # N! enumeration cutoff
_LEX_TIEBREAK_MAX = 10  # prefix-fixing canonicalization is O(N^5); skip above this


@dataclass(frozen=True)
class Configuration:
    """Validated centers, strength parameter, and the cached distance matrix."""

    points: np.ndarray          # (N, 3) float64, read-only
    alpha: complex
    min_sep: float              # +inf when N <= 1
    dists: np.ndarray = field(repr=False, default=None)  # (N, N), read-only

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SizeResult:
    value: float
    argmax_permutation: tuple[int, ...]   # 0-based permutation word


def _pairwise(pts: np.ndarray) -> np.ndarray:
    # Mirror the upper triangle so the matrix is symmetric bit for bit.
    n = len(pts)
    d = np.zeros((n, n))
    if n >= 2:
        iu = np.triu_indices(n, 1)
        vec = pts[iu[0]] - pts[iu[1]]
        dd = np.sqrt((vec * vec).sum(axis=1))
        d[iu] = dd
        d[iu[1], iu[0]] = dd
    return d


def new_configuration(points, alpha=1.0) -> Configuration:
    """Validate points, reject coincident centers, cache distances."""
    pts = np.array(points, dtype=float)
    if pts.size == 0:
        pts = pts.reshape(0, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"points must be (N, 3), got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    d = _pairwise(pts)
    n = len(pts)
    if n >= 2:
        iu = np.triu_indices(n, 1)
        min_sep = float(d[iu].min())
        tol = DEDUP_TOL * max(1.0, float(np.abs(pts).max()))
        if min_sep <= tol:
            i, j = min(zip(*iu), key=lambda ij: d[ij])
            raise DuplicatePoints(
                f"centers {i} and {j} coincide within {tol:.3e} (separation {min_sep:.3e})",
                indices=(int(i), int(j)))
    else:
        min_sep = math.inf
    pts.flags.writeable = False
    d.flags.writeable = False
    return Configuration(pts, complex(alpha), min_sep, d)


def distance_matrix(c: Configuration) -> np.ndarray:
    """The (N, N) pairwise distance matrix (read-only, symmetric, zero diagonal)."""
    return c.dists


def diameter(c: Configuration) -> float:
    """Largest pairwise distance; 0 for N <= 1 (including the empty set)."""
    if c.n <= 1:
        return 0.0
    return float(c.dists.max())


def _objective(d: np.ndarray, perm) -> float:
    return float(d[np.arange(len(perm)), list(perm)].sum())


def _lex_argmax(d: np.ndarray, target: float) -> tuple[int, ...] | None:
    """Lexicographically smallest permutation attaining the assignment optimum.

    Fixes sigma(0), sigma(1), ... in order, keeping a candidate column only if
    the best completion still reaches the target. Ties among maximizers are
    ulp-scale, so the equality slack is a few machine epsilons of the value.
    """
    n = d.shape[0]
    tol = 64.0 * np.finfo(float).eps * max(1.0, abs(target))
    free = list(range(n))
    chosen: list[int] = []
    prefix = 0.0
    for row in range(n):
        rest_rows = list(range(row + 1, n))
        for col in free:
            rest_cols = [cc for cc in free if cc != col]
            if rest_rows:
                sub = d[np.ix_(rest_rows, rest_cols)]
                r, cc = linear_sum_assignment(sub, maximize=True)
                rest = float(sub[r, cc].sum())
            else:
                rest = 0.0
            if prefix + d[row, col] + rest >= target - tol:
                chosen.append(col)
                free.remove(col)
                prefix += float(d[row, col])
                break
        else:
            return None   # numerical corner; caller keeps the solver permutation
    return tuple(chosen)


def size_V(c: Configuration) -> SizeResult:
    """Size functional V(Y) via max-weight assignment, O(N^3).

    The reported permutation is the lexicographically smallest maximizer for
    N <= 10 (determinism in golden tests); above that the solver's own
    deterministic permutation is returned.
    """
    if c.n == 0:
        raise EmptyConfiguration("size of the empty configuration is undefined")
    if c.n == 1:
        return SizeResult(0.0, (0,))
    row, col = linear_sum_assignment(c.dists, maximize=True)
    perm = tuple(int(col[k]) for k in np.argsort(row))
    value = _objective(c.dists, perm)
    if c.n <= _LEX_TIEBREAK_MAX:
        lex = _lex_argmax(c.dists, value)
        if lex is not None:
            perm = lex
            value = _objective(c.dists, perm)
    return SizeResult(value, perm)


def assignment_value(d: np.ndarray) -> float:
    """Max-weight assignment objective only (Monte Carlo path, no tie-breaking)."""
    row, col = linear_sum_assignment(d, maximize=True)
    return float(d[row, col].sum())


def brute_force_V(c: Configuration) -> SizeResult:
    """Exhaustive S_N oracle for V(Y); first (lex-smallest) maximizer wins."""
    if c.n == 0:
        raise EmptyConfiguration("size of the empty configuration is undefined")
    if c.n > BRUTE_FORCE_MAX:
        raise TooLarge(f"brute force limited to N <= {BRUTE_FORCE_MAX}, got N = {c.n}")
    idx = np.arange(c.n)
    best = -1.0
    best_perm: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(c.n)):
        v = float(c.dists[idx, perm].sum())
        if v > best:
            best, best_perm = v, perm
    return SizeResult(best, best_perm)


def config_to_json(c: Configuration) -> dict:
    return {
        "alpha": [c.alpha.real, c.alpha.imag],
        "points": [[float(x) for x in p] for p in c.points],
    }


def config_from_json(obj: dict) -> Configuration:
    alpha = obj.get("alpha", [1.0, 0.0])
    return new_configuration(obj["points"], complex(alpha[0], alpha[1]))
