"""Monte Carlo experiments over random interaction configurations.

Each experiment maps independent trials (keyed by stream id) over a worker
pool and folds the results in trial order, so a report is bit-identical for
any worker count. Reports echo the experiment parameters (never the worker
count), store per-trial rows plus the aggregates the verdicts are computed
from, and carry the verdicts themselves.

Statistical targets are one-sided where the underlying statement is: the
exceedance bound is a liminf inequality, so only the >= direction is tested,
with a four-standard-error Monte Carlo allowance.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import ComputationError, EmptySample, UsageError
from .exppoly import (DEFAULT_N_MAX, KMultiset, canonical_form,
                      distribution_diagram, is_weyl, k_multiset,
                      symbolic_density)
from .geometry import new_configuration, size_V
from .sampler import SamplerConfig, UNIFORM_BALL, _ball_points, _generator, \
    sample_uniform_ball, to_configuration

KMIN_MIN_TRIALS = 100
PAIR_CHUNK = 1 << 14
LAMBDA_MEAN = 18.0 / 35.0
LAMBDA_SQ_MEAN = 3.0 / 10.0


def phi(t: float) -> float:
    """Standard normal CDF."""
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def kmin_limit_cdf(t, r: float = 1.0):
    """Limit CDF of the rescaled smallest chain parameter: 1 - exp(-48 r^3 t^3)."""
    t = np.asarray(t, dtype=float)
    out = np.where(t > 0.0, 1.0 - np.exp(-48.0 * r**3 * np.clip(t, 0.0, None) ** 3), 0.0)
    return float(out) if out.ndim == 0 else out


def ks_statistic(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance of a sample against a CDF."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if n == 0:
        raise EmptySample("KS statistic of an empty sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max((i / n - f).max(), (f - (i - 1) / n).max()))


@dataclass(frozen=True)
class TrialSummary:
    trial_id: int
    stream_id: int
    n_points: int
    diameter: float
    k_min: float
    v_size: float | None = None
    k_multiset: KMultiset | None = None
    weyl: bool | None = None
    ad_symbolic: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    config: dict
    trials: tuple[TrialSummary, ...]
    aggregates: dict
    targets: dict
    verdicts: dict
    cdf_table: tuple[tuple[float, float], ...] = ()
    ks: float | None = None

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


def _pmap(fn, args, workers: int):
    args = list(args)
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    chunk = max(1, len(args) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args, chunksize=chunk))


def _binom_se(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


# trial bodies (top level so worker processes can import them) -------------------

def _kmin_trial(args):
    seed, stream, m, r = args
    gen = _generator(seed, stream)
    pts = _ball_points(gen, m, r)
    return float(pdist(pts).max())


def _structure_trial(args):
    """Sample, expand, and reduce one configuration; shared by weyl and kmax."""
    seed, stream, m, r, alpha, n_max = args
    s = sample_uniform_ball(SamplerConfig(kind=UNIFORM_BALL, m=m, r=r,
                                          seed=seed, stream_id=stream))
    try:
        c = to_configuration(s, alpha)
        p = canonical_form(c, n_max)
        v = size_V(c)
        diam = float(c.dists.max())
        k = k_multiset(distribution_diagram(p), diam)
        return {"diameter": diam, "v": v.value, "weyl": is_weyl(p, v),
                "ad": symbolic_density(p), "k": k, "error": None}
    except ComputationError as exc:
        return {"diameter": math.nan, "v": math.nan, "weyl": None,
                "ad": None, "k": None, "error": f"{type(exc).__name__}: {exc}"}


def _vgrowth_trial(args):
    seed, stream, m, r = args
    gen = _generator(seed, stream)
    pts = _ball_points(gen, m, r)
    d = pdist(pts)
    c = new_configuration(pts, 1.0)
    v = size_V(c).value
    lam = d / (2.0 * r)
    return (float(d.max()), float(v), float(lam.sum()),
            float((lam * lam).sum()), len(lam))


def _pair_chunk(args):
    seed, stream, npairs, r = args
    gen = _generator(seed, stream)
    pts = _ball_points(gen, 2 * npairs, r)
    lam = np.linalg.norm(pts[0::2] - pts[1::2], axis=1) / (2.0 * r)
    sq = lam * lam
    return (float(lam.sum()), float(sq.sum()), float((sq * sq).sum()), len(lam))


# experiments --------------------------------------------------------------------

def run_kmin_experiment(m: int, r: float, trials: int, seed: int, *,
                        ks_gate: float | None = None,
                        workers: int = 1) -> ExperimentReport:
    """Empirical law of the rescaled smallest chain parameter.

    Per trial, K_min = 1/diameter of an m-point uniform-ball sample; the
    statistic m^(2/3)(K_min - 1/(2r)) is compared against the limit CDF
    1 - exp(-48 r^3 t^3) by KS distance. Also checks K_min >= 1/(2r) per
    trial (the diameter cannot exceed the ball diameter). A KS verdict is
    recorded only when ks_gate is given; the limit is attained as m grows,
    so the sensible gate depends on m.
    """
    if m < 2:
        raise UsageError("kmin experiment needs m >= 2")
    if trials < KMIN_MIN_TRIALS:
        raise UsageError(f"kmin experiment needs at least {KMIN_MIN_TRIALS} trials")
    diams = _pmap(_kmin_trial, [(seed, i, m, r) for i in range(trials)], workers)
    rows = []
    stats = np.empty(trials)
    scale = float(m) ** (2.0 / 3.0)
    for i, diam in enumerate(diams):
        kmin = 1.0 / diam
        stats[i] = scale * (kmin - 1.0 / (2.0 * r))
        rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                 diameter=diam, k_min=kmin))
    ks = ks_statistic(stats, lambda t: kmin_limit_cdf(t, r))
    order = np.sort(stats)
    ecdf = np.arange(1, trials + 1) / trials
    lower_ok = bool(np.all(stats >= -1e-12))
    aggregates = {
        "stats_sorted": [float(x) for x in order],
        "ks": float(ks),
        "min_stat": float(order[0]),
        "median_stat": float(np.median(order)),
        "kmin_lower_bound_ok": lower_ok,
    }
    target_median = (math.log(2.0) / (48.0 * r**3)) ** (1.0 / 3.0)
    targets = {"limit_cdf": "1 - exp(-48 r^3 t^3)", "median": target_median}
    verdicts = {"kmin_above_half_inverse_radius": lower_ok}
    config = {"m": m, "r": r, "trials": trials, "seed": seed}
    if ks_gate is not None:
        targets["ks_gate"] = float(ks_gate)
        verdicts["ks_within_gate"] = bool(ks <= ks_gate)
        config["ks_gate"] = float(ks_gate)
    table = tuple((float(t), float(f)) for t, f in zip(order, ecdf))
    return ExperimentReport(kind="kmin", trials=tuple(rows),
                            config=config, aggregates=aggregates, targets=targets,
                            verdicts=verdicts, cdf_table=table, ks=float(ks))


def run_weyl_experiment(m: int, r: float, trials: int, seed: int, *,
                        alpha: complex = 1.0, n_max: int = DEFAULT_N_MAX,
                        workers: int = 1) -> ExperimentReport:
    """Fraction of sampled configurations with full-density asymptotics.

    Per trial: expand the determinant, check that the top frequency equals the
    assignment value (no top-term cancellation), that the symbolic density is
    V/pi, and that the chain multiset has exactly m members. Failed trials are
    kept in the report with their error strings.
    """
    if not 2 <= m <= n_max:
        raise UsageError(f"weyl experiment needs 2 <= m <= {n_max}")
    outs = _pmap(_structure_trial,
                 [(seed, i, m, r, alpha, n_max) for i in range(trials)], workers)
    rows = []
    weyl_hits = 0
    kcount_hits = 0
    failures = 0
    max_dev = 0.0
    for i, o in enumerate(outs):
        if o["error"] is not None:
            failures += 1
            rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                     diameter=o["diameter"], k_min=math.nan,
                                     error=o["error"]))
            continue
        dev = abs(o["ad"] - o["v"] / math.pi)
        max_dev = max(max_dev, dev)
        weyl_hits += bool(o["weyl"])
        kcount_hits += len(o["k"].values) == m
        rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                 diameter=o["diameter"], k_min=1.0 / o["diameter"],
                                 v_size=o["v"], k_multiset=o["k"], weyl=o["weyl"],
                                 ad_symbolic=o["ad"]))
    aggregates = {"weyl_fraction": weyl_hits / trials,
                  "k_count_fraction": kcount_hits / trials,
                  "max_ad_deviation": max_dev,
                  "failures": failures}
    targets = {"weyl_fraction": 1.0, "k_count_fraction": 1.0,
               "max_ad_deviation": 1e-9}
    verdicts = {"all_weyl": weyl_hits == trials,
                "all_k_counts": kcount_hits == trials,
                "density_matches_v": max_dev <= 1e-9,
                "no_failures": failures == 0}
    ca = complex(alpha)
    return ExperimentReport(kind="weyl", trials=tuple(rows),
                            config={"m": m, "r": r, "trials": trials, "seed": seed,
                                    "alpha": [ca.real, ca.imag], "n_max": n_max},
                            aggregates=aggregates, targets=targets, verdicts=verdicts)


def run_vgrowth_experiment(m: int, r: float, trials: int, seed: int, *,
                           t_grid=(0.0, 1.0), workers: int = 1) -> ExperimentReport:
    """One-sided check of the assignment-size growth bound.

    The claim is liminf P{V/r > 36m/35 + (2 sqrt(87)/35) t sqrt(m)} >= 1 - Phi(t);
    the verdict requires the empirical exceedance to clear the target minus four
    binomial standard errors at each t. Pair-moment estimates ride along from
    the same samples.
    """
    if m < 2:
        raise UsageError("vgrowth experiment needs m >= 2")
    outs = _pmap(_vgrowth_trial, [(seed, i, m, r) for i in range(trials)], workers)
    rows = []
    vs = np.empty(trials)
    lam_sum = 0.0
    lam_sq_sum = 0.0
    lam_n = 0
    for i, (diam, v, ls, lss, ln) in enumerate(outs):
        vs[i] = v
        lam_sum += ls
        lam_sq_sum += lss
        lam_n += ln
        rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                 diameter=diam, k_min=1.0 / diam, v_size=v))
    slope = 2.0 * math.sqrt(87.0) / 35.0
    exceedance = {}
    verdicts = {}
    targets = {}
    for t in t_grid:
        thr = r * (36.0 * m / 35.0 + slope * t * math.sqrt(m))
        p_hat = float(np.mean(vs > thr))
        target = 1.0 - phi(t)
        se = _binom_se(p_hat, trials)
        exceedance[f"t={t:g}"] = {"threshold": thr, "empirical": p_hat,
                                  "target": target, "allowance": 4.0 * se}
        verdicts[f"exceedance_t={t:g}"] = p_hat >= target - 4.0 * se
        targets[f"t={t:g}"] = target
    p_big = float(np.mean(vs > m * r))
    exceedance["v_over_mr"] = {"threshold": m * r, "empirical": p_big,
                               "target": 0.95, "allowance": 0.0}
    verdicts["v_exceeds_mr"] = p_big >= 0.95
    mean_lam = lam_sum / lam_n
    mean_lam_sq = lam_sq_sum / lam_n
    aggregates = {"v_values": [float(v) for v in vs],
                  "exceedance": exceedance,
                  "pair_moment_mean": mean_lam,
                  "pair_moment_sq_mean": mean_lam_sq,
                  "pair_count": lam_n}
    targets["pair_moment_mean"] = LAMBDA_MEAN
    targets["pair_moment_sq_mean"] = LAMBDA_SQ_MEAN
    return ExperimentReport(kind="vgrowth", trials=tuple(rows),
                            config={"m": m, "r": r, "trials": trials, "seed": seed,
                                    "t_grid": [float(t) for t in t_grid]},
                            aggregates=aggregates, targets=targets, verdicts=verdicts)


def run_kmax_bound_check(m: int, r: float, trials: int, seed: int, *,
                         alpha: complex = 1.0, n_max: int = DEFAULT_N_MAX,
                         workers: int = 1) -> ExperimentReport:
    """Largest chain parameter against its convexity lower bound m/V."""
    if not 2 <= m <= n_max:
        raise UsageError(f"kmax check needs 2 <= m <= {n_max}")
    outs = _pmap(_structure_trial,
                 [(seed, i, m, r, alpha, n_max) for i in range(trials)], workers)
    rows = []
    hits = 0
    failures = 0
    min_margin = math.inf
    for i, o in enumerate(outs):
        if o["error"] is not None:
            failures += 1
            rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                     diameter=o["diameter"], k_min=math.nan,
                                     error=o["error"]))
            continue
        kmax = max(o["k"].values)
        bound = m / o["v"]
        margin = kmax - bound
        min_margin = min(min_margin, margin)
        hits += margin >= -1e-9 * bound
        rows.append(TrialSummary(trial_id=i, stream_id=i, n_points=m,
                                 diameter=o["diameter"], k_min=1.0 / o["diameter"],
                                 v_size=o["v"], k_multiset=o["k"]))
    aggregates = {"satisfied": hits, "failures": failures,
                  "min_margin": min_margin if min_margin < math.inf else None}
    verdicts = {"kmax_bound_all": hits == trials and failures == 0}
    ca = complex(alpha)
    return ExperimentReport(kind="kmax", trials=tuple(rows),
                            config={"m": m, "r": r, "trials": trials, "seed": seed,
                                    "alpha": [ca.real, ca.imag], "n_max": n_max},
                            aggregates=aggregates,
                            targets={"bound": "max K >= m/V"}, verdicts=verdicts)


def run_pair_moments(pairs: int, seed: int, *, r: float = 1.0,
                     chunk: int = PAIR_CHUNK, workers: int = 1) -> ExperimentReport:
    """First two moments of the normalized pair distance in a ball.

    lambda = |xi - xi'|/(2r) for two independent uniform-ball points; the exact
    moments are 18/35 and 3/10. Verdicts allow four standard errors.
    """
    if pairs < 1:
        raise UsageError("need at least one pair")
    sizes = []
    left = pairs
    while left > 0:
        take = min(chunk, left)
        sizes.append(take)
        left -= take
    outs = _pmap(_pair_chunk,
                 [(seed, i, npairs, r) for i, npairs in enumerate(sizes)], workers)
    lam_sum = math.fsum(o[0] for o in outs)
    lam_sq_sum = math.fsum(o[1] for o in outs)
    lam_4_sum = math.fsum(o[2] for o in outs)
    n = sum(o[3] for o in outs)
    mean = lam_sum / n
    mean_sq = lam_sq_sum / n
    mean_4 = lam_4_sum / n
    se_mean = math.sqrt(max(mean_sq - mean * mean, 0.0) / n)
    se_sq = math.sqrt(max(mean_4 - mean_sq * mean_sq, 0.0) / n)
    aggregates = {"mean": mean, "mean_sq": mean_sq, "n": n,
                  "se_mean": se_mean, "se_sq": se_sq}
    verdicts = {"mean_within_4se": abs(mean - LAMBDA_MEAN) <= 4.0 * se_mean,
                "sq_within_4se": abs(mean_sq - LAMBDA_SQ_MEAN) <= 4.0 * se_sq}
    return ExperimentReport(kind="moments", trials=(),
                            config={"pairs": pairs, "r": r, "seed": seed,
                                    "chunk": chunk},
                            aggregates=aggregates,
                            targets={"mean": LAMBDA_MEAN, "mean_sq": LAMBDA_SQ_MEAN},
                            verdicts=verdicts)


# serialization ------------------------------------------------------------------

def _trial_to_json(t: TrialSummary) -> dict:
    out = {"trial_id": t.trial_id, "stream_id": t.stream_id,
           "n_points": t.n_points, "diameter": t.diameter, "k_min": t.k_min}
    if t.v_size is not None:
        out["v_size"] = t.v_size
    if t.k_multiset is not None:
        out["k_values"] = list(t.k_multiset.values)
        out["n1"] = t.k_multiset.n1
    if t.weyl is not None:
        out["weyl"] = t.weyl
    if t.ad_symbolic is not None:
        out["ad_symbolic"] = t.ad_symbolic
    if t.error is not None:
        out["error"] = t.error
    return out


def report_to_json(rep: ExperimentReport) -> dict:
    return {"kind": rep.kind, "config": rep.config,
            "aggregates": rep.aggregates, "targets": rep.targets,
            "verdicts": rep.verdicts, "passed": rep.passed,
            "ks": rep.ks,
            "cdf_table": [[t, f] for t, f in rep.cdf_table],
            "trials": [_trial_to_json(t) for t in rep.trials]}


_CSV_FIELDS = ("trial_id", "stream_id", "n_points", "diameter", "k_min",
               "v_size", "weyl", "ad_symbolic", "error")


def report_to_csv(rep: ExperimentReport) -> str:
    lines = [",".join(_CSV_FIELDS)]
    for t in rep.trials:
        row = []
        for f in _CSV_FIELDS:
            v = getattr(t, f)
            if v is None:
                row.append("")
            elif isinstance(v, bool):
                row.append("true" if v else "false")
            elif isinstance(v, float):
                row.append(repr(v))
            else:
                s = str(v)
                if "," in s or '"' in s:
                    s = '"' + s.replace('"', '""') + '"'
                row.append(s)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def cdf_table_to_csv(rep: ExperimentReport) -> str:
    lines = ["t,empirical_cdf"]
    for t, f in rep.cdf_table:
        lines.append(f"{t!r},{f!r}")
    return "\n".join(lines) + "\n"
