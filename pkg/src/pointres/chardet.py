"""Characteristic matrix of a point-interaction Hamiltonian.

For centers Y_1..Y_N and strength alpha the characteristic matrix is

    Gamma(z)_jj' = (alpha - i z / 4 pi) delta_jj' - G_z(Y_j - Y_j') (j != j'),

with the free outgoing Green function G_z(v) = exp(i z |v|) / (4 pi |v|).
Resonances are the zeros of det Gamma in the lower half-plane (continued
branch). The modified determinant D(z) = (-4 pi)^N det Gamma(z) is the
exponential polynomial handled by exppoly.

Numerical note: for Im z << 0 the off-diagonal entries grow like
exp(|Im z| d) and the raw determinant overflows quickly; det_gamma_log
evaluates phase and log-magnitude with per-row rescaling and never
overflows for |z| up to ~1e300. All contour work uses that form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (CoincidentArguments, EmptyConfiguration, PointOnCenter,
                     SingularGamma, ZeroSeparation)
from .geometry import Configuration

FOUR_PI = 4.0 * np.pi
SINGULAR_TOL = 1e-10   # relative to the natural determinant scale (max entry)^N


@dataclass(frozen=True)
class GammaEval:
    matrix: np.ndarray   # (N, N) complex, symmetric
    z: complex


@dataclass(frozen=True)
class KernelValue:
    value: complex
    z: complex
    x: np.ndarray
    xp: np.ndarray


def free_green(z, v) -> complex:
    """Outgoing free Green function G_z(v) = exp(i z |v|) / (4 pi |v|)."""
    r = float(np.linalg.norm(np.asarray(v, dtype=float)))
    if r == 0.0:
        raise ZeroSeparation("free Green function diverges at zero separation")
    return complex(np.exp(1j * complex(z) * r) / (FOUR_PI * r))


def _gamma(c: Configuration, z: complex) -> np.ndarray:
    d = c.dists
    n = c.n
    denom = FOUR_PI * (d + np.eye(n))   # dummy 1 on the diagonal, overwritten below
    g = -np.exp(1j * z * d) / denom
    np.fill_diagonal(g, c.alpha - 1j * z / FOUR_PI)
    return g


def _gamma_prime(c: Configuration, z: complex) -> np.ndarray:
    # d/dz Gamma: diagonal -i/4pi, off-diagonal -(i/4pi) exp(i z d); the
    # separation in the Green-function prefactor cancels against the phase
    # derivative, so the same expression covers the diagonal (d = 0).
    return (-1j / FOUR_PI) * np.exp(1j * z * c.dists)


def gamma_matrix(c: Configuration, z) -> GammaEval:
    if c.n == 0:
        raise EmptyConfiguration("Gamma matrix of the empty configuration")
    return GammaEval(_gamma(c, complex(z)), complex(z))


def det_gamma(c: Configuration, z) -> complex:
    """det Gamma(z) via pivoted LU. May overflow for deep Im z; see det_gamma_log."""
    if c.n == 0:
        raise EmptyConfiguration("determinant of the empty configuration")
    return complex(np.linalg.det(_gamma(c, complex(z))))


def modified_determinant(c: Configuration, z) -> complex:
    """(-4 pi)^N det Gamma(z); equals 1 for the empty configuration."""
    if c.n == 0:
        return 1.0 + 0.0j
    return complex((-FOUR_PI) ** c.n * det_gamma(c, z))


def det_gamma_log(c: Configuration, z):
    """Phase and log-magnitude of det Gamma(z), overflow-safe.

    Row j is rescaled by exp(-i z t_j), t_j = max_k |Y_j - Y_k| where Im z < 0
    (t_j = 0 otherwise), so every entry stays bounded by
    max(|alpha| + |z|/4pi, 1/(4 pi min_sep)). With T = sum_j t_j,

        det Gamma = det(scaled) * exp(i z T),
        arg det Gamma = arg det(scaled) + T Re z   (mod 2 pi),
        log|det Gamma| = log|det(scaled)| - T Im z.

    Accepts scalar or array z; returns (phase, log_abs) of matching shape
    (python floats for scalar input). Phases are meaningful mod 2 pi only.
    A numerically singular matrix yields log_abs = -inf.
    """
    if c.n == 0:
        raise EmptyConfiguration("determinant of the empty configuration")
    scalar = np.isscalar(z) or getattr(z, "ndim", 0) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    n = c.n
    d = c.dists
    tmax = d.max(axis=1)
    t = np.where((zz.imag < 0)[:, None], tmax[None, :], 0.0)        # (M, N)
    expo = 1j * zz[:, None, None] * (d[None, :, :] - t[:, :, None])  # (M, N, N)
    denom = FOUR_PI * (d + np.eye(n))
    mat = -np.exp(expo) / denom
    idx = np.arange(n)
    mat[:, idx, idx] = (c.alpha - 1j * zz[:, None] / FOUR_PI) * np.exp(-1j * zz[:, None] * t)
    T = t.sum(axis=1)
    if n == 1:
        det = mat[:, 0, 0]
    elif n == 2:
        det = mat[:, 0, 0] * mat[:, 1, 1] - mat[:, 0, 1] * mat[:, 1, 0]
    elif n == 3:
        a = mat
        det = (a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
               - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
               + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0]))
    else:
        sign, logabs = np.linalg.slogdet(mat)
        with np.errstate(invalid="ignore"):
            phase = np.angle(sign) + zz.real * T
            logmag = logabs - zz.imag * T
        if scalar:
            return float(phase[0]), float(logmag[0])
        return phase, logmag
    with np.errstate(divide="ignore"):
        phase = np.angle(det) + zz.real * T
        logmag = np.log(np.abs(det)) - zz.imag * T
    if scalar:
        return float(phase[0]), float(logmag[0])
    return phase, logmag


def log_derivative(c: Configuration, z) -> complex | None:
    """(d/dz) log det Gamma = tr(Gamma^-1 Gamma'); None if Gamma is exactly singular."""
    g = _gamma(c, complex(z))
    gp = _gamma_prime(c, complex(z))
    try:
        val = complex(np.trace(np.linalg.solve(g, gp)))
    except np.linalg.LinAlgError:
        return None
    if not np.isfinite(val.real) or not np.isfinite(val.imag):
        return None
    return val


def det_gamma_derivative(c: Configuration, z) -> complex:
    """d/dz det Gamma(z).

    Trace identity det' = det * tr(Gamma^-1 Gamma') away from zeros; near a
    zero (or on a singular factorization) it degrades, so fall back to the
    column-substitution sum d(det)/dz = sum_j det(Gamma with column j replaced
    by Gamma' column j), which is stable at any multiplicity.
    """
    if c.n == 0:
        raise EmptyConfiguration("derivative of the empty determinant")
    z = complex(z)
    g = _gamma(c, z)
    gp = _gamma_prime(c, z)
    det = complex(np.linalg.det(g))
    scale = float(np.abs(g).max()) ** c.n
    if np.isfinite(det) and abs(det) > 1e-8 * scale:
        try:
            val = det * complex(np.trace(np.linalg.solve(g, gp)))
            if np.isfinite(val.real) and np.isfinite(val.imag):
                return val
        except np.linalg.LinAlgError:
            pass
    total = 0.0 + 0.0j
    for j in range(c.n):
        m = g.copy()
        m[:, j] = gp[:, j]
        total += complex(np.linalg.det(m))
    return total


def resolvent_kernel(c: Configuration, z, x, xp) -> KernelValue:
    """Resolvent kernel of the point-interaction operator at energy z^2.

        R(z; x, x') = G_z(x - x')
                      + sum_jj' G_z(x - Y_j) [Gamma^-1]_jj' G_z(x' - Y_j').

    Arguments must avoid the centers and each other.
    """
    z = complex(z)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    scale = 1.0
    if c.n:
        scale = max(1.0, float(np.abs(c.points).max()))
    tol = 1e-12 * max(scale, float(np.abs(x).max(initial=0.0)), float(np.abs(xp).max(initial=0.0)))
    if np.linalg.norm(x - xp) <= tol:
        raise CoincidentArguments("kernel arguments coincide")
    free = free_green(z, x - xp)
    if c.n == 0:
        return KernelValue(free, z, x, xp)
    for y in c.points:
        if np.linalg.norm(x - y) <= tol or np.linalg.norm(xp - y) <= tol:
            raise PointOnCenter("kernel argument sits on an interaction center")
    g = _gamma(c, z)
    det = complex(np.linalg.det(g))
    if abs(det) < SINGULAR_TOL * max(1.0, float(np.abs(g).max())) ** c.n:
        raise SingularGamma(f"Gamma numerically singular at z = {z}")
    gx = np.array([free_green(z, x - y) for y in c.points])
    gxp = np.array([free_green(z, xp - y) for y in c.points])
    try:
        val = free + gx @ np.linalg.solve(g, gxp)
    except np.linalg.LinAlgError:
        raise SingularGamma(f"Gamma numerically singular at z = {z}") from None
    return KernelValue(complex(val), z, x, xp)


def resonance_width(k) -> float:
    """Width of the scattering peak associated with a resonance k: 4 |Im k . Re k|."""
    k = complex(k)
    return 4.0 * abs(k.imag * k.real)
