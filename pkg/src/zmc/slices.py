"""Constant-time slices of the timelike algebraic membranes, param by kappa.

For level constant C > 0 the slice at time t of the class-A Minkowski surface
is the surface of revolution

    r^2 = kappa (2t - f(kappa)),    z = -t + kappa,
    f(kappa) = kappa + C kappa^(2M+1),

with kappa running over [0, kappa_max(t)] where f(kappa_max) = 2t.  Since f is
strictly increasing (f' >= 1), kappa_max is unique, r^2 >= 0 exactly on the
interval and vanishes exactly at both endpoints, and the profile r(z) is
concave, so each slice is compact and convex.

Negative t is handled by the exact reflection (t, z, kappa) -> (-t, -z, -kappa)
rather than by signed kappa intervals, keeping root-finding on one branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SliceParams:
    """Transverse dimension M, level constant C > 0, slice time t."""

    M: int
    C: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if not self.C > 0:
            raise ValueError(f"C must be > 0 on the timelike branch, got {self.C}")


def f(kappa: float, params: SliceParams) -> float:
    """kappa + C kappa^(2M+1)."""
    return kappa + params.C * kappa ** (2 * params.M + 1)


def f_prime(kappa: float, params: SliceParams) -> float:
    """1 + (2M+1) C kappa^(2M)."""
    return 1.0 + (2 * params.M + 1) * params.C * kappa ** (2 * params.M)


def kappa_max(t: float, params: SliceParams) -> float:
    """The unique root of f(kappa) = 2t on [0, inf), for t > 0.

    Bisection brings the bracket down, then Newton polishes to machine
    precision (f is increasing and convex on kappa >= 0, so Newton converges
    monotonically once past the root).  params.t plays no role here; t is the
    query time.
    """
    if t < 0:
        raise ValueError(
            "kappa_max needs t > 0; for t < 0 use the reflection symmetry "
            "(t, z, kappa) -> (-t, -z, -kappa)"
        )
    if t == 0:
        return 0.0
    target = 2.0 * t
    lo = 0.0
    hi = max(target, (target / params.C) ** (1.0 / (2 * params.M + 1))) + 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(mid, params) > target:
            hi = mid
        else:
            lo = mid
    k = 0.5 * (lo + hi)
    for _ in range(100):
        step = (f(k, params) - target) / f_prime(k, params)
        k_new = k - step
        if k_new == k:
            break
        k = k_new
        if abs(step) <= 1e-16 * max(k, 1.0):
            break
    return k


def _kappa_range(params: SliceParams) -> tuple[float, float]:
    if params.t >= 0:
        return 0.0, kappa_max(params.t, params)
    return -kappa_max(-params.t, params), 0.0


def slice_point(kappa: float, params: SliceParams) -> tuple[float, float]:
    """(r, z) on the slice: r = sqrt(kappa (2t - f(kappa))), z = -t + kappa.

    For t >= 0 kappa must lie in [0, kappa_max(t)]; for t < 0 in
    [-kappa_max(-t), 0] (the reflected interval).
    """
    t = params.t
    r_sq = kappa * (2.0 * t - f(kappa, params))
    if r_sq < 0.0:
        lo, hi = _kappa_range(params)
        raise ValueError(
            f"kappa = {kappa} is outside [{lo}, {hi}] at t = {t} (r^2 = {r_sq} < 0)"
        )
    return math.sqrt(r_sq), -t + kappa


def slice_profile(params: SliceParams, n_samples: int) -> np.ndarray:
    """(n_samples, 3) table of (kappa, r, z), kappa monotone.

    The kappa grid is Chebyshev-like, clustered at the endpoints where r has
    square-root behavior.  The endpoints carry r = 0 exactly (they are the
    singular-line end and the cap by construction); interior r^2 values are
    asserted >= -1e-15 before the clamp to zero.
    """
    if n_samples < 3:
        raise ValueError(f"need at least 3 samples, got {n_samples}")
    t = params.t
    if t < 0:
        table = slice_profile(SliceParams(params.M, params.C, -t), n_samples)
        reflected = np.column_stack([-table[:, 0], table[:, 1], -table[:, 2]])
        return reflected[::-1].copy()
    k_hi = kappa_max(t, params)
    theta = np.linspace(0.0, math.pi, n_samples)
    kappas = k_hi * 0.5 * (1.0 - np.cos(theta))
    rows = np.empty((n_samples, 3))
    rows[:, 0] = kappas
    rows[0] = (0.0, 0.0, -t)
    rows[-1] = (k_hi, 0.0, -t + k_hi)
    for i in range(1, n_samples - 1):
        k = float(kappas[i])
        r_sq = k * (2.0 * t - f(k, params))
        if r_sq < -1e-15:
            raise AssertionError(f"interior r^2 = {r_sq} < -1e-15 at kappa = {k}")
        rows[i] = (k, math.sqrt(max(r_sq, 0.0)), -t + k)
    return rows


def concave_profile(z: np.ndarray, r: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the second divided differences of r against z are all <= tol.

    z must be strictly monotone.  Discrete concavity of r(z) certifies that the
    solid of revolution bounded by the profile is convex.
    """
    z = np.asarray(z, dtype=float)
    r = np.asarray(r, dtype=float)
    if len(z) != len(r) or len(z) < 3:
        raise ValueError("need matching z, r arrays with at least 3 points")
    dz = np.diff(z)
    if not (np.all(dz > 0) or np.all(dz < 0)):
        raise ValueError("z must be strictly monotone along the profile")
    slopes = np.diff(r) / dz
    second = (slopes[1:] - slopes[:-1]) / (z[2:] - z[:-2])
    scale = max(float(np.max(np.abs(slopes))), 1.0)
    return bool(np.all(second <= tol * scale))


def convexity_check(params: SliceParams, n_samples: int = 128) -> bool:
    """Certify discretely that the slice is convex (r concave as a function of z)."""
    if n_samples < 16:
        raise ValueError(f"need at least 16 samples, got {n_samples}")
    table = slice_profile(params, n_samples)
    return concave_profile(table[:, 2], table[:, 1])


def write_slice_csv(path, table: np.ndarray) -> None:
    """Write a (kappa, r, z) table with 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("kappa,r,z\n")
        for kappa, r, z in table:
            fh.write(f"{kappa:.17g},{r:.17g},{z:.17g}\n")
