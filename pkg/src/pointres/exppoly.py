"""Exponential-polynomial form of the modified determinant.

Expanding D(z) = (-4 pi)^N det Gamma(z) over permutations gives, for each
sigma in S_N, the monomial

    eps_sigma * C(sigma) * (iz - 4 pi alpha)^{#fixed(sigma)} * exp(i z B_sigma),

with B_sigma = sum_j |Y_j - Y_sigma(j)| and C(sigma) the product of inverse
moved distances (C(id) = 1). Grouping equal frequencies yields the canonical
form sum_j P_j(z) exp(i B_j z) with 0 = B_1 < B_2 < ... and nontrivial P_j.

The distribution diagram is the upper concave hull of {(B_j, deg P_j)}
anchored at (0, N); each maximal segment of slope -1/K contributes deg-drop
copies of the chain parameter K to the multiset K(Y). The smallest parameter
always equals 1/diam(Y) with multiplicity at least two, and sum_j 1/K_j = B_max.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateSingleTerm, DiamMismatch, EmptyConfiguration,
                     FullCancellation, IndexOutOfRange, TooLarge)
from .geometry import Configuration

FOUR_PI = 4.0 * np.pi
DEFAULT_N_MAX = 8
FREQ_GROUP_TOL = 1e-9     # frequencies merged when within tol * (1 + |B|)
CANCEL_TOL = 1e-10        # relative to the largest pre-sum coefficient in the group


@dataclass(frozen=True)
class ExpMonomial:
    frequency: float
    coeffs: np.ndarray      # ascending powers of z, complex


@dataclass(frozen=True)
class CanonicalExpPoly:
    terms: tuple[tuple[float, np.ndarray], ...]   # (B_j, P_j coeffs ascending)
    n_points: int
    alpha: complex

    @property
    def b_max(self) -> float:
        return self.terms[-1][0]

    @property
    def degree_points(self) -> list[tuple[float, int]]:
        return [(b, len(p) - 1) for b, p in self.terms]


@dataclass(frozen=True)
class DistributionDiagram:
    hull: tuple[tuple[float, int], ...]   # vertices, B strictly increasing


@dataclass(frozen=True)
class KMultiset:
    values: tuple[float, ...]   # nondecreasing
    n1: int                     # total count (= N minus degree at the last hull vertex)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _linear_factor_powers(alpha: complex, n: int) -> list[np.ndarray]:
    """Coefficient arrays of (iz - 4 pi alpha)^f for f = 0..n, ascending powers."""
    base = np.array([-FOUR_PI * alpha, 1j], dtype=complex)
    out = [np.array([1.0 + 0.0j])]
    for _ in range(n):
        out.append(np.convolve(out[-1], base))
    return out


def expand_determinant(c: Configuration, n_max: int = DEFAULT_N_MAX) -> list[ExpMonomial]:
    """All N! exponential monomials of the modified determinant.

    Frequencies are computed by summing the sorted moved-distance multiset so
    that permutations sharing an edge multiset get bit-identical frequencies.
    """
    n = c.n
    if n == 0:
        raise EmptyConfiguration("expansion needs at least one center")
    if n > n_max:
        raise TooLarge(f"expansion is N! work; N = {n} exceeds n_max = {n_max} "
                       "(raise n_max to override)")
    d = c.dists
    powers = _linear_factor_powers(c.alpha, n)
    monomials = []
    for perm in itertools.permutations(range(n)):
        moved = [j for j in range(n) if perm[j] != j]
        dists = sorted(d[j, perm[j]] for j in moved)
        freq = math.fsum(dists)
        amp = 1.0
        for dd in dists:
            amp *= dd
        coeff = _perm_sign(perm) / amp
        monomials.append(ExpMonomial(freq, coeff * powers[n - len(moved)]))
    return monomials


def canonicalize(monomials, alpha) -> CanonicalExpPoly:
    """Group equal frequencies, sum polynomials, drop cancelled terms.

    Frequencies within FREQ_GROUP_TOL * (1 + |B|) of the group representative
    merge; a summed polynomial is trivial when every coefficient is below
    CANCEL_TOL times the largest pre-sum coefficient of its group.
    """
    if not monomials:
        raise ValueError("canonicalize needs at least one monomial")
    n_points = max(len(m.coeffs) - 1 for m in monomials)
    by_freq = sorted(monomials, key=lambda m: m.frequency)
    groups: list[list[ExpMonomial]] = []
    for m in by_freq:
        if groups and m.frequency - groups[-1][0].frequency \
                <= FREQ_GROUP_TOL * (1.0 + abs(groups[-1][0].frequency)):
            groups[-1].append(m)
        else:
            groups.append([m])
    terms: list[tuple[float, np.ndarray]] = []
    for group in groups:
        width = max(len(m.coeffs) for m in group)
        total = np.zeros(width, dtype=complex)
        scale = 0.0
        for m in group:
            total[:len(m.coeffs)] += m.coeffs
            scale = max(scale, float(np.abs(m.coeffs).max()))
        thresh = CANCEL_TOL * scale
        keep = np.nonzero(np.abs(total) > thresh)[0]
        if len(keep) == 0:
            continue   # full cancellation of this frequency
        # the representative is the group maximum: raw frequencies are
        # assignment sums, so the top group's representative then equals the
        # configuration size exactly rather than sitting a grouping-tolerance
        # below it
        terms.append((group[-1].frequency, total[:keep[-1] + 1]))
    if not terms:
        raise FullCancellation("every term cancelled; degenerate expansion")
    if n_points >= 2 and len(terms) == 1:
        raise FullCancellation("all nonconstant frequencies cancelled")
    return CanonicalExpPoly(tuple(terms), n_points, complex(alpha))


def canonical_form(c: Configuration, n_max: int = DEFAULT_N_MAX) -> CanonicalExpPoly:
    return canonicalize(expand_determinant(c, n_max), c.alpha)


def eval_canonical(p: CanonicalExpPoly, z) -> complex:
    """Horner evaluation of sum_j P_j(z) exp(i B_j z)."""
    z = complex(z)
    total = 0.0 + 0.0j
    for freq, coeffs in p.terms:
        acc = 0.0 + 0.0j
        for ck in coeffs[::-1]:
            acc = acc * z + ck
        total += acc * np.exp(1j * freq * z)
    return complex(total)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def distribution_diagram(p: CanonicalExpPoly) -> DistributionDiagram:
    """Upper concave hull of the (frequency, degree) points, collinear merged."""
    pts = p.degree_points
    hull: list[tuple[float, int]] = []
    for pt in pts:                      # B strictly increasing already
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) >= 0.0:
            hull.pop()
        hull.append(pt)
    # guard: anchored at frequency zero with full degree
    assert hull[0] == (0.0, p.n_points)
    return DistributionDiagram(tuple(hull))


def k_multiset(diag: DistributionDiagram, diam: float) -> KMultiset:
    """Chain parameters from the hull segments; cross-checked against 1/diam.

    Each segment (B, d) -> (B', d') yields (d - d') copies of
    K = (d - d') / (B' - B); the multiset is sorted nondecreasing.
    """
    hull = diag.hull
    if len(hull) == 1:
        return KMultiset((), 0)
    values: list[float] = []
    for (b0, d0), (b1, d1) in zip(hull, hull[1:]):
        drop = d0 - d1
        k = drop / (b1 - b0)
        values.extend([k] * drop)
    values.sort()
    if len(values) < 2:
        raise DiamMismatch("fewer than two chain parameters; hull is inconsistent")
    rel = 1e-9
    if abs(values[0] * diam - 1.0) > rel or abs(values[1] * diam - 1.0) > rel:
        raise DiamMismatch(
            f"smallest chain parameters {values[0]:.12g}, {values[1]:.12g} "
            f"disagree with 1/diam = {1.0 / diam:.12g}")
    bmax = hull[-1][0]
    recon = math.fsum(1.0 / k for k in values)
    if abs(recon - bmax) > rel * max(1.0, bmax):
        raise DiamMismatch(f"sum of inverse parameters {recon:.12g} != B_max {bmax:.12g}")
    return KMultiset(tuple(values), len(values))


def is_weyl(p: CanonicalExpPoly, v) -> bool:
    """Whether the top frequency attains the configuration size (|B_max - V| small)."""
    value = v.value if hasattr(v, "value") else float(v)
    return abs(p.b_max - value) <= 1e-9 * max(1.0, value)


def symbolic_density(p: CanonicalExpPoly) -> float:
    """Asymptotic resonance density B_max / pi."""
    if len(p.terms) == 1:
        raise DegenerateSingleTerm(
            "single-term exponential polynomial has finitely many zeros; no density")
    return p.b_max / math.pi


def chain_prediction(k: KMultiset, j: int, m: int) -> complex:
    """Two-term location of the m-th resonance on chain j (0-based).

        k_{j,m} ~ pi K_j (2m + 1) - i K_j ln|pi K_j (2m + 1)|

    m ranges over all integers; the real part is negative for m < 0.
    """
    if not 0 <= j < len(k.values):
        raise IndexOutOfRange(f"chain index {j} outside 0..{len(k.values) - 1}")
    kj = k.values[j]
    x = math.pi * kj * (2 * m + 1)
    return complex(x, -kj * math.log(abs(x)))


def canonical_to_json(p: CanonicalExpPoly) -> dict:
    """{"alpha": [re, im], "n": N, "terms": [{"freq": B, "coeffs": [[re, im], ...]}]}"""
    return {"alpha": [p.alpha.real, p.alpha.imag],
            "n": p.n_points,
            "terms": [{"freq": b, "coeffs": [[c.real, c.imag] for c in coeffs]}
                      for b, coeffs in p.terms]}


def canonical_from_json(obj: dict) -> CanonicalExpPoly:
    terms = tuple(
        (float(t["freq"]),
         np.array([complex(re, im) for re, im in t["coeffs"]], dtype=complex))
        for t in obj["terms"])
    return CanonicalExpPoly(terms, int(obj["n"]), complex(*obj["alpha"]))
