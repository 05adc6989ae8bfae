"""Orthogonal-motion gauge for the slice parametrization.

Reparametrizing the slices by kappa = kappa(t, phi) so that the surface
(r(t, phi), z(t, phi)) moves orthogonally to itself (rdot r' + zdot z' = 0)
yields the scalar ODE

    kappa_dot = 2 kappa (2t - f + kappa f')
                / ((2t - f - kappa f')^2 + 4 kappa (2t - f))  =: g(t, kappa),

with f, f' from :mod:`zmc.slices`.  g >= 0 on t > 0, 0 <= kappa <= kappa_max(t),
vanishing only at kappa = 0, and the boundary kappa_max(t) is a characteristic
(it moves at rate 2/f', which is g evaluated on the boundary).

Trajectories are integrated with classical fixed-step RK4; a per-step guard
clamps overshoot back onto the moving boundary.  The gauge label phi of a
trajectory is its initial condition kappa0 at the reference time t0 (any
monotone relabeling is an equivalent gauge).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .slices import SliceParams, f, f_prime, kappa_max

RHS = Callable[[float, float, float, int], float]


def g_rhs(t: float, kappa: float, C: float, M: int) -> float:
    """Right-hand side of the gauge ODE, exactly as written above."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    params = SliceParams(M, C)
    w = 2.0 * t - f(kappa, params)
    kfp = kappa * f_prime(kappa, params)
    den = (w - kfp) ** 2 + 4.0 * kappa * w
    if den <= 0.0:
        raise AssertionError(
            f"gauge ODE denominator {den} <= 0 at (t, kappa) = ({t}, {kappa}); "
            "this cannot happen on 0 <= kappa <= kappa_max(t)"
        )
    return 2.0 * kappa * (w + kfp) / den


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One integrated gauge trajectory kappa(t) with its label and metadata."""

    C: float
    M: int
    kappa0: float
    t0: float
    times: np.ndarray
    kappas: np.ndarray
    step: float
    rhs: RHS = field(repr=False, default=g_rhs)

    @property
    def label(self) -> float:
        return self.kappa0


def integrate(
    t0: float,
    kappa0: float,
    t1: float,
    C: float,
    M: int,
    step: float = 1e-3,
    rhs: RHS | None = None,
) -> Trajectory:
    """Integrate the gauge ODE from (t0, kappa0) to t1 with fixed-step RK4.

    If a step overshoots the moving boundary kappa_max(t), the value is clamped
    onto the boundary and the integration continues along it (the boundary is a
    characteristic of the ODE, moving at rate 2/f').  ``rhs`` defaults to the
    true gauge rate; passing a different callable tags the trajectory as
    generated by that rate (used for negative controls).
    """
    if not t0 > 0:
        raise ValueError(f"t0 must be > 0, got {t0}")
    if not t1 > t0:
        raise ValueError(f"t1 must exceed t0, got ({t0}, {t1})")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    params = SliceParams(M, C)
    km = kappa_max(t0, params)
    if not 0.0 <= kappa0 <= km:
        raise ValueError(f"kappa0 = {kappa0} outside [0, kappa_max(t0) = {km}]")
    fn = g_rhs if rhs is None else rhs

    n_full, remainder = divmod(t1 - t0, step)
    steps = [step] * int(round(n_full))
    if remainder > 1e-12 * max(abs(t1), 1.0):
        steps.append(remainder)

    times = [t0]
    kappas = [kappa0]
    t, k = t0, kappa0
    for h in steps:
        k1 = fn(t, k, C, M)
        k2 = fn(t + 0.5 * h, k + 0.5 * h * k1, C, M)
        k3 = fn(t + 0.5 * h, k + 0.5 * h * k2, C, M)
        k4 = fn(t + h, k + h * k3, C, M)
        k = k + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + h
        # track the boundary with warm-started Newton (f is increasing convex)
        km_pred = km + h * 2.0 / f_prime(km, params)
        for _ in range(4):
            km_pred -= (f(km_pred, params) - 2.0 * t) / f_prime(km_pred, params)
        km = km_pred
        if k > km:
            k = km
        if k < 0.0:
            k = 0.0
        times.append(t)
        kappas.append(k)
    return Trajectory(C, M, kappa0, t0, np.array(times), np.array(kappas), step, fn)


def kappa_at(traj: Trajectory, t: float) -> float:
    """kappa(t) along the trajectory; off-grid times use local cubic interpolation."""
    times, kappas = traj.times, traj.kappas
    if not times[0] <= t <= times[-1]:
        raise ValueError(f"t = {t} outside trajectory range [{times[0]}, {times[-1]}]")
    i = int(np.searchsorted(times, t))
    if i < len(times) and abs(times[i] - t) <= 1e-12 * max(abs(t), 1.0):
        return float(kappas[i])
    if i > 0 and abs(times[i - 1] - t) <= 1e-12 * max(abs(t), 1.0):
        return float(kappas[i - 1])
    lo = min(max(i - 2, 0), len(times) - 4)
    ts, ks = times[lo : lo + 4], kappas[lo : lo + 4]
    out = 0.0
    for j in range(4):
        w = 1.0
        for l in range(4):
            if l != j:
                w *= (t - ts[l]) / (ts[j] - ts[l])
        out += w * float(ks[j])
    return out


def gauge_labels(C: float, M: int, t0: float, count: int, band=(0.5, 0.6)) -> np.ndarray:
    """Uniform gauge labels on a band of [0, kappa_max(t0)].

    The default band keeps the family away from the profile endpoints (where
    r = 0 and rdot is singular) and away from the turning label where zdot and
    r' vanish together, which makes the normalized orthogonality ratio 0/0 and
    unresolvable by finite differences.
    """
    lo, hi = band
    if not 0.0 < lo < hi < 1.0:
        raise ValueError(f"band must satisfy 0 < lo < hi < 1, got {band}")
    km = kappa_max(t0, SliceParams(M, C))
    return km * np.linspace(lo, hi, count)


def integrate_family(
    C: float,
    M: int,
    t0: float,
    t1: float,
    labels: Sequence[float],
    step: float = 1e-3,
    rhs: RHS | None = None,
) -> list[Trajectory]:
    return [integrate(t0, float(l), t1, C, M, step, rhs) for l in labels]


def _state(traj: Trajectory, t: float) -> tuple[float, float, float, float]:
    """(r, z, rdot, zdot) of the trajectory at time t, rdot via the chain rule."""
    params = SliceParams(traj.M, traj.C)
    k = kappa_at(traj, t)
    kdot = traj.rhs(t, k, traj.C, traj.M)
    w = 2.0 * t - f(k, params)
    r_sq = k * w
    if r_sq <= 0.0:
        raise ValueError(
            f"label {traj.kappa0}: r = 0 at t = {t} (profile endpoint); "
            "the gauge state is singular there"
        )
    r = math.sqrt(r_sq)
    rdot = (kdot * (w - k * f_prime(k, params)) + 2.0 * k) / (2.0 * r)
    return r, -t + k, rdot, kdot - 1.0


def _family_states(trajectories: Sequence[Trajectory], t: float):
    if len(trajectories) < 3:
        raise ValueError(f"need at least 3 trajectories, got {len(trajectories)}")
    cm = {(tr.C, tr.M) for tr in trajectories}
    if len(cm) != 1:
        raise ValueError(f"trajectories mix parameter sets {sorted(cm)}")
    ordered = sorted(trajectories, key=lambda tr: tr.kappa0)
    labels = [tr.kappa0 for tr in ordered]
    if any(b - a == 0.0 for a, b in zip(labels, labels[1:])):
        raise ValueError("duplicate gauge labels: finite differences are degenerate")
    states = [_state(tr, t) for tr in ordered]
    return np.array(labels), np.array(states)


def orthogonality_residual(trajectories: Sequence[Trajectory], t: float) -> float:
    """Worst normalized violation of rdot r' + zdot z' = 0 across the family.

    Time derivatives come from each trajectory's own generating rate via the
    chain rule; the label derivatives r', z' use centered differences across
    neighboring trajectories.  Returns the max over interior labels of
    |rdot r' + zdot z'| / (|rdot||r'| + |zdot||z'| + eps).
    """
    labels, states = _family_states(trajectories, t)
    r, _z, rdot, zdot = states[:, 0], states[:, 1], states[:, 2], states[:, 3]
    z = _z
    worst = 0.0
    for i in range(1, len(labels) - 1):
        dlabel = labels[i + 1] - labels[i - 1]
        rp = (r[i + 1] - r[i - 1]) / dlabel
        zp = (z[i + 1] - z[i - 1]) / dlabel
        num = abs(rdot[i] * rp + zdot[i] * zp)
        den = abs(rdot[i]) * abs(rp) + abs(zdot[i]) * abs(zp) + 1e-300
        worst = max(worst, num / den)
    return worst


def rho_diagnostic(trajectories: Sequence[Trajectory], t: float) -> np.ndarray:
    """Pointwise rho solving rdot^2 + zdot^2 + r^M (r'^2 + z'^2) / rho^2 = 1.

    Reported for the interior labels; NaN where the solved rho^2 is not
    positive.  Diagnostic only: the gauge normalization is not integrated.
    """
    labels, states = _family_states(trajectories, t)
    r, z, rdot, zdot = states[:, 0], states[:, 1], states[:, 2], states[:, 3]
    m = trajectories[0].M
    out = np.full(len(labels) - 2, np.nan)
    for i in range(1, len(labels) - 1):
        dlabel = labels[i + 1] - labels[i - 1]
        rp = (r[i + 1] - r[i - 1]) / dlabel
        zp = (z[i + 1] - z[i - 1]) / dlabel
        denom = 1.0 - rdot[i] ** 2 - zdot[i] ** 2
        if denom > 0.0:
            rho_sq = r[i] ** m * (rp**2 + zp**2) / denom
            out[i - 1] = math.sqrt(rho_sq)
    return out


def write_trajectories_csv(path, trajectories: Sequence[Trajectory]) -> None:
    """Long-format CSV: one row per (trajectory, time sample)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("label_kappa0,t,kappa,r,z\n")
        for tr in trajectories:
            params = SliceParams(tr.M, tr.C)
            for t, k in zip(tr.times, tr.kappas):
                r_sq = k * (2.0 * t - f(k, params))
                r = math.sqrt(r_sq) if r_sq > 0.0 else 0.0
                fh.write(
                    f"{tr.kappa0:.17g},{t:.17g},{k:.17g},{r:.17g},{-t + k:.17g}\n"
                )
