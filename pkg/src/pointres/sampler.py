"""Seeded point-process generators.

Two laws: a fixed number of points uniform in a ball, and a mixed binomial
process (random count, then i.i.d. standard-normal points). Generation is
counter-based (Philox keyed by seed and stream id), so any subset of streams
can be produced in any order, on any worker, with bit-identical results.

The draw order inside a stream is part of the contract: ball sampling draws
the (m, 3) normal block first, then the m radial uniforms. Regression
baselines depend on this order; do not reorder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePoints, UsageError
from .geometry import Configuration, new_configuration

UNIFORM_BALL = "uniform_ball"
MIXED_BINOMIAL = "mixed_binomial"


@dataclass(frozen=True)
class SamplerConfig:
    kind: str
    m: int = 0
    r: float = 1.0
    mixing: tuple = ()          # ((count, probability), ...) for mixed_binomial
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if self.kind not in (UNIFORM_BALL, MIXED_BINOMIAL):
            raise UsageError(f"unknown sampler kind {self.kind!r}")
        if self.kind == UNIFORM_BALL:
            if self.m < 0:
                raise UsageError("sample size must be nonnegative")
            if not self.r > 0:
                raise UsageError("ball radius must be positive")
        else:
            if not self.mixing:
                raise UsageError("mixed_binomial needs a mixing table")
            probs = [p for _, p in self.mixing]
            if any(p < 0 for p in probs):
                raise UsageError("mixing probabilities must be nonnegative")
            if abs(sum(probs) - 1.0) > 1e-12:
                raise UsageError("mixing probabilities must sum to 1")
            if any(int(c) != c or c < 0 for c, _ in self.mixing):
                raise UsageError("mixing counts must be nonnegative integers")


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray          # (n, 3)
    seed_used: int
    stream_id: int

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


def _generator(seed: int, stream_id: int) -> np.random.Generator:
    key = np.array([seed, stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_uniform_ball(cfg: SamplerConfig) -> SampleSet:
    """m i.i.d. points uniform in the ball of radius r.

    Radial coordinate r*U^(1/3), direction normal/|normal|. Deterministic in
    (seed, stream_id).
    """
    if cfg.kind != UNIFORM_BALL:
        raise UsageError("config kind is not uniform_ball")
    gen = _generator(cfg.seed, cfg.stream_id)
    pts = _ball_points(gen, cfg.m, cfg.r)
    return SampleSet(pts, cfg.seed, cfg.stream_id)


def _ball_points(gen: np.random.Generator, m: int, r: float) -> np.ndarray:
    if m == 0:
        return np.zeros((0, 3))
    normals = gen.standard_normal((m, 3))
    u = gen.random(m)
    return (r * np.cbrt(u))[:, None] * normals / np.linalg.norm(normals, axis=1)[:, None]


def sample_mixed_binomial(cfg: SamplerConfig) -> SampleSet:
    """Draw a count from the mixing table, then that many standard-normal points."""
    if cfg.kind != MIXED_BINOMIAL:
        raise UsageError("config kind is not mixed_binomial")
    gen = _generator(cfg.seed, cfg.stream_id)
    counts = np.array([c for c, _ in cfg.mixing], dtype=int)
    probs = np.array([p for _, p in cfg.mixing], dtype=float)
    cum = np.cumsum(probs)
    cum[-1] = 1.0               # guard the top edge against rounding
    nu = int(counts[np.searchsorted(cum, gen.random(), side="left")])
    pts = gen.standard_normal((nu, 3)) if nu else np.zeros((0, 3))
    return SampleSet(pts, cfg.seed, cfg.stream_id)


def to_configuration(s: SampleSet, alpha: complex = 1.0) -> Configuration:
    """Validated Configuration from a sample.

    A floating-point collision between two sampled points (probability zero,
    reachable only through rounding) is healed by redrawing the later point
    from the same stream: the generator replays every draw that produced the
    sample, so the replacement draws are the next ones the stream would have
    produced.
    """
    pts = s.points
    for _ in range(16):
        try:
            return new_configuration(pts, alpha)
        except DuplicatePoints as exc:
            j = max(exc.indices)
            gen = _generator(s.seed_used, s.stream_id)
            gen.standard_normal((len(pts), 3))
            gen.random(len(pts))
            normal = gen.standard_normal(3)
            u = gen.random()
            scale = float(np.abs(pts).max()) or 1.0
            pts = pts.copy()
            pts[j] = scale * np.cbrt(u) * normal / np.linalg.norm(normal)
    raise DuplicatePoints("could not separate colliding sample points", indices=())


def sampleset_to_json(s: SampleSet) -> dict:
    return {"points": [[float(x) for x in p] for p in s.points],
            "seed": s.seed_used, "stream_id": s.stream_id}
