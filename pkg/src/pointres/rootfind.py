"""Resonance localization by contour counting and Newton refinement.

count_zeros integrates the phase of det Gamma around a rectangle or disc:
the winding number equals the number of enclosed zeros (no poles). The phase
is sampled adaptively until adjacent wrapped increments stay below pi/2 and
log-magnitude dips are resolved; a zero pinned on the contour keeps the
refinement from settling and triggers a deterministic jitter retry.

find_resonances subdivides the square circumscribing the search disc into a
quadtree until each cell holds one zero (cells at the minimum size with a
higher count are declared multiple zeros), then polishes each zero with
Newton's method on the logarithmic derivative tr(Gamma^-1 Gamma').
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .chardet import det_gamma_log, log_derivative
from .errors import (BoundaryZero, InsufficientRadius, NonConvergence,
                     RegionExceeded)
from .geometry import Configuration, config_to_json, diameter

TWO_PI = 2.0 * math.pi
JITTER = (0.0, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1)   # first attempt unshifted, then 5 retries
MIN_CELL_REL = 1e-6
RESIDUAL_TOL = 1e-8
NEWTON_TOL = 1e-13
NEWTON_MAX_ITER = 60
EXTRACT_MIN_RADIUS = 150.0
EXTRACT_MAX_H_STEP = 0.02
CLUSTER_GAP_H = 0.1
_DIP_NATS = 3.0        # refine where log|det| dips this far below both neighbors
_VMIN_NATS = 1.7       # ... or a V straddles the interval this far below its shoulders
_MAX_CONTOUR_PTS = 300_000


class _Uncertain(Exception):
    """Internal: winding not trustworthy (suspected zero on the contour)."""


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def sample(self, t: np.ndarray) -> np.ndarray:
        return self.center + self.radius * np.exp(2j * np.pi * t)

    def inflated(self, rel: float) -> "Disc":
        return Disc(self.center, self.radius * (1.0 + rel))

    @property
    def extent(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def sample(self, t: np.ndarray) -> np.ndarray:
        w = self.x1 - self.x0
        h = self.y1 - self.y0
        s = np.asarray(t) * (2.0 * (w + h))
        x = np.empty_like(s)
        y = np.empty_like(s)
        m1 = s < w
        m2 = (s >= w) & (s < w + h)
        m3 = (s >= w + h) & (s < 2 * w + h)
        m4 = s >= 2 * w + h
        x[m1] = self.x0 + s[m1]
        y[m1] = self.y0
        x[m2] = self.x1
        y[m2] = self.y0 + (s[m2] - w)
        x[m3] = self.x1 - (s[m3] - w - h)
        y[m3] = self.y1
        x[m4] = self.x0
        y[m4] = self.y1 - (s[m4] - 2 * w - h)
        return x + 1j * y

    def inflated(self, rel: float) -> "Rect":
        cx = 0.5 * (self.x0 + self.x1)
        cy = 0.5 * (self.y0 + self.y1)
        hw = 0.5 * (self.x1 - self.x0) * (1.0 + rel)
        hh = 0.5 * (self.y1 - self.y0) * (1.0 + rel)
        return Rect(cx - hw, cx + hw, cy - hh, cy + hh)

    @property
    def extent(self) -> float:
        return max(self.x1 - self.x0, self.y1 - self.y0)

    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.x0 - margin <= z.real <= self.x1 + margin
                and self.y0 - margin <= z.imag <= self.y1 + margin)


@dataclass(frozen=True)
class Root:
    k: complex
    multiplicity: int
    residual: float     # |det Gamma(k)| relative to the max over its cell boundary


@dataclass(frozen=True)
class ResonanceSet:
    roots: tuple[Root, ...]     # sorted by (Re k, Im k)
    region: float               # searched disc radius
    config_hash: str


def _wrap(x: np.ndarray) -> np.ndarray:
    return (x + np.pi) % TWO_PI - np.pi


def _freq_hint(c: Configuration) -> float:
    return max(1.0, c.n * diameter(c))


def _winding(c: Configuration, contour, hint: float):
    """Winding number of det Gamma around the contour and the boundary max log|det|.

    Refines the parameter grid wherever a wrapped phase increment reaches pi/2
    or the log-magnitude dips _DIP_NATS below both neighbors; raises _Uncertain
    when refinement bottoms out (zero on or hugging the boundary).
    """
    perim = (TWO_PI * contour.radius if isinstance(contour, Disc)
             else 2.0 * ((contour.x1 - contour.x0) + (contour.y1 - contour.y0)))
    n0 = int(min(8192, max(64, perim * hint * 1.5)))
    t = np.linspace(0.0, 1.0, n0, endpoint=False)
    ph, la = det_gamma_log(c, contour.sample(t))
    for _ in range(64):
        if not np.all(np.isfinite(ph)):
            raise _Uncertain("non-finite phase on contour")
        dph = _wrap(np.roll(ph, -1) - ph)
        bad = np.abs(dph) >= 0.5 * np.pi
        dip = (la < np.roll(la, 1) - _DIP_NATS) & (la < np.roll(la, -1) - _DIP_NATS)
        if dip.any():
            bad = bad | dip | np.roll(dip, -1)   # refine on both sides of a dip
        # a double zero hugging the contour can alias a full phase turn through
        # the pi/2 gate while its magnitude dip spreads over two samples and
        # stays under _DIP_NATS; the shape that survives both gates is a V with
        # its bottom inside one interval, so flag intervals whose endpoints both
        # descend inward while the bottom sits well below the higher shoulder
        left, right = np.roll(la, 1), np.roll(la, -1)
        outer = np.roll(la, -2)
        vmin = ((la < left) & (right < outer)
                & (np.minimum(la, right) <= np.maximum(left, outer) - _VMIN_NATS))
        bad = bad | vmin
        if not bad.any():
            break
        widths = (np.roll(t, -1) - t) % 1.0
        widths[-1] = (t[0] + 1.0) - t[-1]
        if len(t) >= _MAX_CONTOUR_PTS or widths[bad].min() < 1e-13:
            raise _Uncertain("refinement exhausted; zero suspected on contour")
        tm = (t[bad] + 0.5 * widths[bad]) % 1.0
        phm, lam = det_gamma_log(c, contour.sample(tm))
        t = np.concatenate([t, tm])
        order = np.argsort(t, kind="stable")
        t = t[order]
        ph = np.concatenate([ph, phm])[order]
        la = np.concatenate([la, lam])[order]
    else:
        raise _Uncertain("refinement did not settle")
    w = float(dph.sum() / TWO_PI)
    k = int(round(w))
    if abs(w - k) > 0.25 or k < 0:
        raise _Uncertain(f"winding {w} not a usable integer")
    return k, float(la.max())


def count_zeros(c: Configuration, contour) -> int:
    """Number of zeros of det Gamma inside the contour (with multiplicity).

    If a zero sits on the boundary the contour is inflated through the
    deterministic jitter sequence; BoundaryZero after the retries run out.
    """
    if c.n == 0:
        return 0
    hint = _freq_hint(c)
    for rel in JITTER:
        try:
            return _winding(c, contour.inflated(rel), hint)[0]
        except _Uncertain:
            continue
    raise BoundaryZero(f"zero pinned on {contour} after {len(JITTER) - 1} retries")


def _newton(c: Configuration, z0: complex, mult: int):
    """Newton on log det Gamma; step -mult/trace handles multiplicity mult."""
    z = z0
    for _ in range(NEWTON_MAX_ITER):
        g = log_derivative(c, z)
        if g is None:
            return z, True          # Gamma exactly singular: we are on the zero
        if g == 0:
            return z, False
        step = -mult / g
        z = z + step
        if abs(step) <= NEWTON_TOL * max(1.0, abs(z)):
            return z, True
    return z, False


def _split(c: Configuration, cell: Rect, cnt: int, hint: float):
    """Quarter the cell with jittered split lines until child counts conserve."""
    w = cell.x1 - cell.x0
    h = cell.y1 - cell.y0
    for jit in JITTER:
        xm = cell.x0 + (0.5 + jit) * w
        ym = cell.y0 + (0.5 - jit) * h
        children = (Rect(cell.x0, xm, cell.y0, ym), Rect(xm, cell.x1, cell.y0, ym),
                    Rect(cell.x0, xm, ym, cell.y1), Rect(xm, cell.x1, ym, cell.y1))
        out = []
        try:
            for child in children:
                k, la = _winding(c, child, hint)
                out.append((child, k, la))
        except _Uncertain:
            continue
        if sum(k for _, k, _ in out) == cnt:
            return out
    raise BoundaryZero(f"could not split cell {cell} conserving {cnt} zeros")


def _log_abs(c: Configuration, z: complex) -> float:
    return det_gamma_log(c, z)[1]


def _residual(c: Configuration, z: complex, la_bound: float) -> float:
    la_root = _log_abs(c, z)
    if la_root == -math.inf:
        return 0.0
    return float(math.exp(min(la_root - la_bound, 50.0)))


def _isolate_single(c, cell: Rect, la_bound: float, hint: float, min_cell: float,
                    residual_tol: float):
    """Best zero candidate for a count-1 cell.

    Returns (z, 1, residual, suspect). suspect means the residual gate failed
    even at the minimum cell size; the caller decides whether the point is a
    member of an unresolvable cluster (fine) or a genuine failure (fatal).
    """
    while True:
        size = cell.extent
        z, ok = _newton(c, cell.center(), 1)
        if ok and cell.contains(z, margin=1e-9 * size + 1e-14 * abs(z)):
            res = _residual(c, z, la_bound)
            if res <= residual_tol:
                return z, 1, res, False
        if size <= min_cell:
            zc = cell.center()
            if abs(z - zc) > 8.0 * min_cell:
                z = zc
            elif _log_abs(c, zc) < _log_abs(c, z):
                z = zc      # Newton wandered; the center is the better point
            res = _residual(c, z, la_bound)
            return z, 1, res, res > residual_tol
        for child, k, la in _split(c, cell, 1, hint):
            if k == 1:
                cell, la_bound = child, la
                break


def _locate_multiple(c, cell: Rect, cnt: int, la_bound: float, min_cell: float):
    # A min-size cell still holding cnt >= 2: positions closer than min_cell
    # are not distinguishable from a true multiple zero, so the cell is
    # reported as one root of multiplicity cnt.
    z, ok = _newton(c, cell.center(), cnt)
    if not (ok and abs(z - cell.center()) <= 8.0 * min_cell):
        z = cell.center()
    return z, cnt, _residual(c, z, la_bound), False


def _boundary_la_max(c: Configuration, box: Rect, n: int = 512) -> float:
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    return float(det_gamma_log(c, box.sample(t))[1].max())


def _merge_clusters(c: Configuration, found: list, min_cell: float,
                    residual_tol: float) -> list:
    """Collapse candidates within min_cell of each other into multiple roots.

    Subdivision can separate a sub-resolution pair when a split line happens
    to fall between its members; positions that close are one multiple zero
    by the resolution contract, so the members are re-joined here. A merged
    (or declared-multiple) root gets its residual against a probe box large
    enough to stand clear of the determinant's floating-point noise floor.
    A lone candidate whose residual gate failed stays fatal.
    """
    n = len(found)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(found[i][0] - found[j][0]) <= min_cell:
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(found[i])
    out = []
    for members in groups.values():
        total = sum(m[1] for m in members)
        if len(members) == 1 and total == 1:
            z, mult, res, suspect = members[0]
            if suspect:
                raise NonConvergence(f"no converged zero near {z}")
            out.append((z, mult, res))
            continue
        z = min(members, key=lambda m: _log_abs(c, m[0]))[0]
        half = 64.0 * min_cell
        box = Rect(z.real - half, z.real + half, z.imag - half, z.imag + half)
        res = _residual(c, z, _boundary_la_max(c, box))
        out.append((z, total, res))
    return out


def _config_hash(c: Configuration) -> str:
    blob = json.dumps(config_to_json(c), sort_keys=True)
    return hashlib.sha1(blob.encode()).hexdigest()[:16]


def find_resonances(c: Configuration, radius: float, *,
                    min_cell_rel: float = MIN_CELL_REL,
                    residual_tol: float = RESIDUAL_TOL) -> ResonanceSet:
    """All zeros of det Gamma with |k| <= radius, multiplicities and residuals.

    Searches the square circumscribing the disc, discards roots outside the
    disc after localization. Deterministic: identical inputs give an identical
    root list, sorted by (Re k, Im k).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if c.n == 0:
        return ResonanceSet((), radius, _config_hash(c))
    hint = _freq_hint(c)
    half = radius * (1.0 + 1e-6)
    top = Rect(-half, half, -half, half)
    total = None
    for rel in JITTER:
        try:
            total, la = _winding(c, top.inflated(rel), hint)
            top = top.inflated(rel)
            break
        except _Uncertain:
            continue
    if total is None:
        raise BoundaryZero("top-level square boundary could not be certified")
    min_cell = min_cell_rel * radius
    found: list[tuple[complex, int, float, bool]] = []
    stack = [(top, total, la)]
    while stack:
        cell, cnt, la_bound = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            found.append(_isolate_single(c, cell, la_bound, hint, min_cell, residual_tol))
        elif cell.extent <= min_cell:
            found.append(_locate_multiple(c, cell, cnt, la_bound, min_cell))
        else:
            for child, k, la_child in _split(c, cell, cnt, hint):
                if k:
                    stack.append((child, k, la_child))
    merged = _merge_clusters(c, found, min_cell, residual_tol)
    kept = [(z, m, r) for z, m, r in merged if abs(z) <= radius * (1.0 + 1e-12)]
    kept.sort(key=lambda t: (t[0].real, t[0].imag))
    roots = tuple(Root(z, m, r) for z, m, r in kept)
    return ResonanceSet(roots, radius, _config_hash(c))


# counting and chain extraction -------------------------------------------------

@dataclass(frozen=True)
class CountingReport:
    radii: tuple[float, ...]
    counts: tuple[int, ...]
    h_grid: tuple[float, ...]
    log_radii: tuple[float, float]          # (R/2, R)
    log_counts: tuple[tuple[int, ...], ...]  # one row per log radius
    ad_estimate: float                       # LSQ slope of N(R) over the upper radii
    ad_log_steps: tuple[tuple[float, float], ...]   # (location, height) jumps of Ad_log
    crossings: tuple[tuple[float, float, int], ...]  # per annulus root: (h, 1/ln(|Re|+1), mult)
    config_hash: str


@dataclass(frozen=True)
class KEstimate:
    locations: tuple[float, ...]
    weights: tuple[int, ...]
    confidences: tuple[float, ...]

    def as_values(self) -> tuple[float, ...]:
        out: list[float] = []
        for loc, w in zip(self.locations, self.weights):
            out.extend([loc] * w)
        return tuple(sorted(out))


@dataclass(frozen=True)
class ChainRow:
    k: complex
    chain: int       # index into the KMultiset values; -1 when unassignable
    residual: float  # |Im k + K ln(|Re k| + 1)|
    flagged: bool


@dataclass(frozen=True)
class ChainAssignment:
    rows: tuple[ChainRow, ...]
    bands: dict     # chain index -> max residual


def counting_function(rs: ResonanceSet, radii) -> np.ndarray:
    """N(R) = number of roots with |k| <= R, multiplicities counted."""
    radii = np.asarray(radii, dtype=float)
    if radii.size and float(radii.max()) > rs.region * (1.0 + 1e-9):
        raise RegionExceeded(f"radius {radii.max()} beyond searched region {rs.region}")
    absk = np.array([abs(r.k) for r in rs.roots])
    mult = np.array([r.multiplicity for r in rs.roots], dtype=int)
    if len(absk) == 0:
        return np.zeros(radii.shape, dtype=int)
    return np.array([(mult[absk <= R]).sum() for R in radii], dtype=int)


def _crossing(root: Root) -> float:
    """Smallest h whose log-strip contains the root; inf if never, -inf if always."""
    k = root.k
    if k.imag >= 0.0:
        return -math.inf
    den = math.log1p(abs(k.real))
    if den == 0.0:
        return math.inf          # ln(|Re k| + 1) = 0: excluded for every h
    return min(-k.imag / den, math.inf)


def log_counting(rs: ResonanceSet, h_grid, radius: float) -> np.ndarray:
    """N_log(h, R) = #{roots: -h ln(|Re k|+1) <= Im k, |k| <= R} over the h grid."""
    if radius > rs.region * (1.0 + 1e-9):
        raise RegionExceeded(f"radius {radius} beyond searched region {rs.region}")
    h_grid = np.asarray(h_grid, dtype=float)
    sel = [r for r in rs.roots if abs(r.k) <= radius]
    if not sel:
        return np.zeros(h_grid.shape, dtype=int)
    cross = np.array([_crossing(r) for r in sel])
    mult = np.array([r.multiplicity for r in sel], dtype=int)
    return np.array([(mult[cross <= h]).sum() for h in h_grid], dtype=int)


def _detect_jumps(h_grid, low_counts, high_counts, r0: float, r1: float,
                  gap_h: float = 0.1):
    """Cluster the annulus crossing histogram into (location, height, mass, spread)."""
    h = np.asarray(h_grid, dtype=float)
    ann = np.asarray(high_counts, dtype=int) - np.asarray(low_counts, dtype=int)
    inc = np.diff(ann)                       # crossings entering between grid nodes
    mids = 0.5 * (h[1:] + h[:-1])
    nz = np.nonzero(inc)[0]
    clusters = []
    if len(nz):
        step = float(h[1] - h[0]) if len(h) > 1 else gap_h
        gap_bins = max(1, int(round(gap_h / step)))
        start = prev = nz[0]
        for i in nz[1:]:
            if i - prev > gap_bins:
                clusters.append((start, prev))
                start = i
            prev = i
        clusters.append((start, prev))
    out = []
    for a, b in clusters:
        w = inc[a:b + 1].astype(float)
        x = mids[a:b + 1]
        mass = float(w.sum())
        loc = float((w * x).sum() / mass)
        spread = float(math.sqrt(max((w * (x - loc) ** 2).sum() / mass, 0.0)))
        height = mass / (r1 - r0)
        out.append((loc, height, mass, spread))
    return out


def build_counting_report(rs: ResonanceSet, radii, h_grid) -> CountingReport:
    radii = np.asarray(radii, dtype=float)
    h_grid = np.asarray(h_grid, dtype=float)
    counts = counting_function(rs, radii)
    r1 = rs.region
    r0 = 0.5 * r1
    low = log_counting(rs, h_grid, r0)
    high = log_counting(rs, h_grid, r1)
    # least-squares slope over the upper half of the radius grid
    mid = 0.5 * (radii.min() + radii.max()) if radii.size else 0.0
    sel = radii >= mid
    if sel.sum() >= 2:
        ad = float(np.polyfit(radii[sel], counts[sel].astype(float), 1)[0])
    else:
        ad = math.nan
    jumps = _detect_jumps(h_grid, low, high, r0, r1)
    steps = tuple((loc, height) for loc, height, _, _ in jumps)
    crossings = []
    for root in rs.roots:
        if not r0 < abs(root.k) <= r1 or root.k.imag >= 0.0:
            continue
        den = math.log1p(abs(root.k.real))
        if den == 0.0:
            continue
        crossings.append((-root.k.imag / den, 1.0 / den, root.multiplicity))
    crossings.sort()
    return CountingReport(tuple(float(r) for r in radii), tuple(int(x) for x in counts),
                          tuple(float(hh) for hh in h_grid), (r0, r1),
                          (tuple(int(x) for x in low), tuple(int(x) for x in high)),
                          ad, steps, tuple(crossings), rs.config_hash)


def extract_k_numeric(report: CountingReport) -> KEstimate:
    """Chain parameters and multiplicities from the annulus crossing structure.

    Along a chain with parameter K, each root's crossing value
    h = -Im k / ln(|Re k| + 1) equals K plus an offset that is linear in
    x = 1/ln(|Re k| + 1) (the chain's O(1) vertical shift divided by the
    logarithm). Crossings are clustered, and each cluster's K is read off as
    the intercept of h regressed on x; the weight is the cluster's share of
    the annulus count, round(pi * K * mass / (R - R/2)).

    Requires region >= 150 and h-grid resolution <= 0.02: smaller regions do
    not separate the clusters, and the coarse grid would hide that failure.
    """
    if report.log_radii[1] < EXTRACT_MIN_RADIUS:
        raise InsufficientRadius(
            f"extraction needs region >= {EXTRACT_MIN_RADIUS}, got {report.log_radii[1]}")
    h = np.asarray(report.h_grid)
    if len(h) < 2 or float(np.diff(h).max()) > EXTRACT_MAX_H_STEP + 1e-12:
        raise InsufficientRadius(f"h-grid resolution must be <= {EXTRACT_MAX_H_STEP}")
    r0, r1 = report.log_radii
    cross = [c for c in report.crossings if math.isfinite(c[0])]
    clusters = []
    start = 0
    for i in range(1, len(cross) + 1):
        if (i == len(cross)
                or cross[i][0] - cross[i - 1][0] > CLUSTER_GAP_H * (1.0 + cross[i - 1][0])):
            clusters.append(cross[start:i])
            start = i
    step = float(h[1] - h[0])
    locs, weights, confs = [], [], []
    for members in clusters:
        hv = np.array([m[0] for m in members])
        xv = np.array([m[1] for m in members])
        wv = np.array([m[2] for m in members], dtype=float)
        mass = float(wv.sum())
        spread = float(hv.max() - hv.min())
        mean_h = float((hv * wv).sum() / mass)
        k_hat, conf = mean_h, spread + step
        if len(members) >= 4 and xv.max() - xv.min() > 1e-9:
            coef = np.polyfit(xv, hv, 1, w=np.sqrt(wv))
            intercept = float(coef[1])
            resid = hv - np.polyval(coef, xv)
            # the intercept extrapolates far outside the x range, so it is
            # used only when the linear model actually holds: residuals must
            # be small against the slope's own contribution and a quadratic
            # refit must not bend the line
            quad = np.polyfit(xv, hv, 2, w=np.sqrt(wv))
            bend = abs(float(quad[0])) * (0.5 * (xv.max() - xv.min())) ** 2
            rms = float(np.sqrt(np.average(resid**2, weights=wv)))
            trusted = (bend <= max(0.01, 0.02 * mean_h)
                       and rms <= max(0.02, 0.05 * mean_h)
                       and mean_h / 3.0 <= intercept <= 3.0 * mean_h)
            if trusted:
                k_hat = intercept
                conf = rms + abs(float(coef[0])) * (xv.max() - xv.min())
        w = int(round(math.pi * k_hat * mass / (r1 - r0)))
        if w == 0:
            continue    # stragglers (isolated low roots), not a chain
        locs.append(k_hat)
        weights.append(w)
        confs.append(conf)
    return KEstimate(tuple(locs), tuple(weights), tuple(confs))


def chain_assignment(rs: ResonanceSet, k, rho_min: float = 30.0) -> ChainAssignment:
    """Assign each root with |root| >= rho_min to the nearest predicted chain.

    Distance is |Im k + K_j ln(|Re k| + 1)|. Roots with Re k = 0 or Im k > 0
    follow no chain and are flagged instead of assigned.
    """
    values = k.values if hasattr(k, "values") else tuple(k)
    rows = []
    bands: dict[int, float] = {}
    for root in rs.roots:
        if abs(root.k) < rho_min:
            continue
        lg = math.log1p(abs(root.k.real))
        if lg == 0.0 or root.k.imag > 0.0:
            rows.append(ChainRow(root.k, -1, math.nan, True))
            continue
        residuals = [abs(root.k.imag + kj * lg) for kj in values]
        j = int(np.argmin(residuals))
        rows.append(ChainRow(root.k, j, float(residuals[j]), False))
        bands[j] = max(bands.get(j, 0.0), float(residuals[j]))
    return ChainAssignment(tuple(rows), bands)


# serialization ------------------------------------------------------------------

def resonance_set_to_csv(rs: ResonanceSet) -> str:
    lines = ["re,im,multiplicity,residual"]
    for r in rs.roots:
        lines.append(f"{r.k.real!r},{r.k.imag!r},{r.multiplicity},{r.residual!r}")
    return "\n".join(lines) + "\n"


def resonance_set_to_json(rs: ResonanceSet) -> dict:
    return {
        "region": rs.region,
        "config_hash": rs.config_hash,
        "contains_zero_resonance": any(abs(r.k) <= 1e-9 for r in rs.roots),
        "roots": [{"re": r.k.real, "im": r.k.imag,
                   "multiplicity": r.multiplicity, "residual": r.residual}
                  for r in rs.roots],
    }


def resonance_set_from_json(obj: dict) -> ResonanceSet:
    roots = tuple(Root(complex(r["re"], r["im"]), int(r["multiplicity"]),
                       float(r["residual"])) for r in obj["roots"])
    return ResonanceSet(roots, float(obj["region"]), str(obj["config_hash"]))


def counting_report_to_json(cr: CountingReport) -> dict:
    return {
        "radii": list(cr.radii),
        "counts": list(cr.counts),
        "h_grid": list(cr.h_grid),
        "log_radii": list(cr.log_radii),
        "log_counts": [list(row) for row in cr.log_counts],
        "ad_estimate": cr.ad_estimate,
        "ad_log_steps": [[loc, height] for loc, height in cr.ad_log_steps],
        "crossings": [[h, x, m] for h, x, m in cr.crossings],
        "config_hash": cr.config_hash,
    }
