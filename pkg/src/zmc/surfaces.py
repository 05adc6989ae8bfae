"""Concrete zero-mean-curvature families as level sets: certification and sampling.

Three families, all over mostly-minus Minkowski eta = diag(1, -1, ..., -1):

  class A: the polynomial field  u*v - r^2 - C (t+z)^(2(D-1))  at level 0
           (equivalently x.x = C (t+z)^(2(D-1)));
  class B: chi = (t+z)^2 (x.g.x) at level C', g the gamma = 0 sign partner;
  class C: chi = (t+z)^(2/(M-1)) (t^2 - z^2 + r^2/(M-1)) at level C'.

``verify_zmc`` certifies a family symbolically: the mean-curvature numerator of
the product form u^n (x.g.x) is the exact zero expression, which covers all
level sets at once.  Sampling solves the level equation for the transverse
radius in closed form (each family is affine in r^2 given t and z), then
attaches a normalized pointwise curvature residual and the causal character of
the surface at the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .metric import (
    ClassTag,
    DiagonalMetric,
    admissible_exponents,
    class_c_metric,
    gamma,
    lambda_decompose,
    partner_metric_for_class_B,
)
from .symalg import FieldExpr, chi_ansatz, mc_numerator, partial, quadratic_form

EPS_GUARD = 1e-300


class SingularLineError(ValueError):
    """Raised on the light-like line t + z = 0, where the parametrization degenerates."""


@dataclass(frozen=True)
class SolutionFamily:
    """One solution class with its exponent, level constant, and metric pair."""

    tag: ClassTag
    dim: int
    n: Fraction
    level: float
    eta: DiagonalMetric
    g: DiagonalMetric

    def __post_init__(self) -> None:
        lam = lambda_decompose(self.eta, self.g)
        if lam is None:
            raise ValueError("metric pair admits no affine weight lambda")
        allowed = admissible_exponents(self.tag, self.dim, gamma(self.eta, self.g), lam)
        if self.n not in allowed:
            raise ValueError(f"n = {self.n} not admissible for class {self.tag.value}")
        if self.tag is ClassTag.A and self.g != self.eta:
            raise ValueError("class A requires g = eta")
        if self.tag is ClassTag.B:
            if self.dim % 2 != 0 or gamma(self.eta, self.g) != 0:
                raise ValueError("class B requires even D and gamma = 0")
        if self.tag is ClassTag.C and self.g.transverse != (lam,) * (self.dim - 2):
            raise ValueError("class C requires all transverse entries equal to lambda")

    @property
    def m_transverse(self) -> int:
        return self.dim - 2


def family_a(dim: int, level: float) -> SolutionFamily:
    eta = DiagonalMetric.minkowski(dim)
    return SolutionFamily(ClassTag.A, dim, Fraction(-2 * (dim - 1)), level, eta, eta)


def family_b(dim: int, level: float) -> SolutionFamily:
    eta = DiagonalMetric.minkowski(dim)
    g = partner_metric_for_class_B(dim, eta)
    return SolutionFamily(ClassTag.B, dim, Fraction(2), level, eta, g)


def family_c(m: int, level: float) -> SolutionFamily:
    dim = m + 2
    eta = DiagonalMetric.minkowski(dim)
    return SolutionFamily(ClassTag.C, dim, Fraction(2, m - 1), level, eta, class_c_metric(m))


@dataclass(frozen=True)
class SurfacePoint:
    """A sampled on-surface point with its curvature residual and causal character."""

    coords: tuple[float, ...]
    family: SolutionFamily
    residual_mc: float
    causal: str


@lru_cache(maxsize=None)
def field(fam: SolutionFamily) -> FieldExpr:
    """The defining field of the family.

    Class A returns the polynomial form x.x - C u^(2(D-1)) whose zero level is
    the surface (the constant is embedded).  Classes B and C return the product
    form chi = u^n (x.g.x); the level value is ``fam.level`` and is not
    embedded.
    """
    if fam.tag is ClassTag.A:
        c = Fraction(fam.level)
        return quadratic_form(fam.eta) - FieldExpr.u_power(fam.dim, 2 * (fam.dim - 1)).scale(c)
    return chi_ansatz(fam.n, fam.g)


def verify_zmc(fam: SolutionFamily) -> bool:
    """True iff the mean-curvature numerator of the product form is exactly zero.

    Certifies every level set of u^n (x.g.x) at once, so for class A it covers
    all level constants simultaneously.
    """
    return mc_numerator(chi_ansatz(fam.n, fam.g), fam.eta).is_zero()


@lru_cache(maxsize=None)
def _mc_expr(fam: SolutionFamily) -> FieldExpr:
    return mc_numerator(field(fam), fam.eta)


@lru_cache(maxsize=None)
def _grad_exprs(fam: SolutionFamily) -> tuple[FieldExpr, ...]:
    e = field(fam)
    return tuple(partial(e, mu) for mu in range(fam.dim))


def _solve_r_squared(fam: SolutionFamily, t: float, z: float) -> float:
    u = t + z
    if u == 0.0:
        raise SingularLineError(
            "the parametrization degenerates on the light-like line r = 0 = t + z"
        )
    if fam.n.denominator != 1 and u < 0.0:
        raise ValueError(f"fractional exponent family needs t + z > 0, got {u}")
    if fam.tag is ClassTag.A:
        return t * t - z * z - fam.level * u ** (2 * (fam.dim - 1))
    eps = float(fam.g.entries[1])
    return (fam.level * u ** (-float(fam.n)) - u * (t - z)) / eps


def sample_point(
    fam: SolutionFamily, t: float, z: float, direction
) -> SurfacePoint | None:
    """Solve the level equation for r >= 0 at (t, z) along a unit transverse direction.

    Returns None when the solved r^2 is negative (no surface point above (t, z)).
    For class B the direction must lie in the positive-signature transverse
    slots (the others are held at zero).
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (fam.m_transverse,):
        raise ValueError(f"direction must have {fam.m_transverse} components")
    if abs(float(d @ d) - 1.0) > 1e-8:
        raise ValueError("direction must be a unit vector")
    if fam.tag is ClassTag.B:
        q = (fam.dim - 2) // 2 + 1
        if np.any(d[q:] != 0.0):
            raise ValueError(
                f"class B sampling holds the negative-signature slots at zero; "
                f"direction components {q + 1}..{fam.m_transverse} must vanish"
            )
    r_sq = _solve_r_squared(fam, t, z)
    if r_sq < 0.0:
        return None
    r = math.sqrt(r_sq)
    coords = (t, *(r * d), z)
    return SurfacePoint(
        coords=coords,
        family=fam,
        residual_mc=_residual_at(fam, coords),
        causal=_causal_at(fam, coords),
    )


def _residual_at(fam: SolutionFamily, coords: tuple[float, ...]) -> float:
    num = _mc_expr(fam).eval_at(coords)
    grads = [g.eval_at(coords) for g in _grad_exprs(fam)]
    grad_sq = math.fsum(gv * gv for gv in grads)
    scale = (grad_sq + EPS_GUARD) ** 1.5 * (1.0 + math.sqrt(math.fsum(c * c for c in coords)))
    return abs(num) / scale


def mc_residual(fam: SolutionFamily, p: SurfacePoint) -> float:
    """Normalized curvature residual |numerator| / ((|grad|^2 + eps)^(3/2) (1 + |x|)).

    The normalization makes the residual dimensionless and invariant under
    x -> sigma x up to the family's scaling weight; it is a property of the
    field, finite also off the surface.
    """
    return _residual_at(fam, p.coords)


def _causal_at(fam: SolutionFamily, coords: tuple[float, ...], tol: float = 1e-10) -> str:
    grads = [g.eval_at(coords) for g in _grad_exprs(fam)]
    grad_sq = math.fsum(gv * gv for gv in grads)
    if grad_sq <= 1e-250:
        raise ValueError(f"zero gradient at {coords}: singular point of the field")
    normal_sq = grads[0] ** 2 - grads[-1] ** 2
    for a in range(fam.m_transverse):
        normal_sq += float(fam.eta.inverse_entry(1 + a)) * grads[1 + a] ** 2
    threshold = tol * grad_sq
    if normal_sq < -threshold:
        return "timelike"
    if normal_sq > threshold:
        return "spacelike"
    return "null"


def causal_character(fam: SolutionFamily, p: SurfacePoint, tol: float = 1e-10) -> str:
    """Causal character of the surface at p from the sign of (d field)^2.

    With mostly-minus eta a spacelike normal ((d field)^2 < 0) means the
    hypersurface itself is timelike, and conversely.  ``tol`` is relative to
    the Euclidean gradient scale; within it the character is reported null.
    """
    return _causal_at(fam, p.coords, tol)


# -- reflection symmetry -------------------------------------------------------


def _reflected_expr(e: FieldExpr) -> FieldExpr | None:
    """The expression composed with (t, z) -> (-t, -z), when representable.

    u -> -u, v -> -v means each term picks up (-1)^(e_u + e_v); defined only
    when every u exponent is an integer.
    """
    if e.has_fractional_u():
        return None
    acc = {}
    for (e_u, e_v, mono), c in e.terms.items():
        sign = -1 if (int(e_u) + e_v) % 2 else 1
        acc[(e_u, e_v, mono)] = sign * c
    return FieldExpr(e.dim, acc)


def reflection_symmetric(e: FieldExpr, point=None, tol: float = 1e-12) -> bool:
    """Whether e is invariant under (t, z) -> (-t, -z).

    Integer u exponents: exact symbolic check.  Fractional u exponents: compare
    numerically at ``point``, reading (-u)^(p/q) on the real branch
    ((-1)^p |u|^(p/q) for odd q, |u|^(p/q) for even p); False when the
    reflected power has no real value.
    """
    mirrored = _reflected_expr(e)
    if mirrored is not None:
        return mirrored == e
    if point is None:
        raise ValueError("fractional u exponents need a point for the numeric check")
    if len(point) != e.dim:
        raise ValueError(f"point must have {e.dim} coordinates")
    t, z = float(point[0]), float(point[-1])
    xs = [float(c) for c in point[1:-1]]
    u, v = t + z, t - z
    if u <= 0.0:
        raise ValueError("numeric reflection check needs t + z > 0")
    value = e.eval_at(point)
    mirrored_terms = []
    for (e_u, e_v, mono), c in e.terms.items():
        if e_u.denominator % 2 == 1:
            sign = -1.0 if e_u.numerator % 2 else 1.0
        elif e_u.numerator % 2 == 0:
            sign = 1.0
        else:
            return False
        term = float(c) * sign * u ** float(e_u) * (-v) ** e_v
        for x, pw in zip(xs, mono):
            if pw:
                term *= x**pw
        mirrored_terms.append(term)
    mirrored_value = math.fsum(mirrored_terms)
    return abs(value - mirrored_value) <= tol * (1.0 + max(abs(value), abs(mirrored_value)))


def symmetry_check(fam: SolutionFamily, p: SurfacePoint) -> bool:
    """Invariance of the family's field under (t, z) -> (-t, -z)."""
    return reflection_symmetric(field(fam), p.coords)


# -- seeded cloud sampling ------------------------------------------------------


def sample_cloud(
    fam: SolutionFamily,
    count: int,
    seed: int = 0,
    t_range: tuple[float, float] = (0.1, 3.0),
    z_max: float = 3.0,
    u_min: float = 0.05,
    tol: float = 1e-10,
    max_batches: int = 200,
):
    """Rejection-sample up to ``count`` on-surface points, deterministically.

    Draws (t, z) uniformly with t in t_range and z in [-t + u_min, z_max]
    (keeping t + z >= u_min, away from the singular line), keeps draws whose
    solved r^2 is nonnegative, and attaches a seeded random unit transverse
    direction to each.  Returns (points (N, D), residuals (N,), causal (N,))
    with N <= count; N < count only if the acceptance region appears empty
    after ``max_batches`` batches.
    """
    rng = np.random.default_rng(seed)
    t_lo, t_hi = t_range
    dim, m = fam.dim, fam.m_transverse
    q = (dim - 2) // 2 + 1 if fam.tag is ClassTag.B else m

    accepted = []
    total = 0
    for _ in range(max_batches):
        if total >= count:
            break
        batch = 4096
        t = rng.uniform(t_lo, t_hi, batch)
        z = rng.uniform(-t + u_min, z_max)
        u = t + z
        if fam.tag is ClassTag.A:
            r_sq = t * t - z * z - fam.level * u ** (2 * (dim - 1))
        else:
            eps = float(fam.g.entries[1])
            r_sq = (fam.level * u ** (-float(fam.n)) - u * (t - z)) / eps
        d = rng.standard_normal((batch, q))
        keep = r_sq >= 0.0
        norms = np.linalg.norm(d, axis=1)
        keep &= norms > 1e-12
        t, z, r_sq, d, norms = t[keep], z[keep], r_sq[keep], d[keep], norms[keep]
        pts = np.zeros((len(t), dim))
        pts[:, 0] = t
        pts[:, -1] = z
        pts[:, 1 : 1 + q] = np.sqrt(r_sq)[:, None] * d / norms[:, None]
        accepted.append(pts)
        total += len(pts)

    pts = (
        np.concatenate(accepted)[:count]
        if total
        else np.zeros((0, dim))
    )
    if len(pts) == 0:
        return pts, np.zeros(0), np.zeros(0, dtype=object)

    num = np.abs(_mc_expr(fam).eval_many(pts))
    grads = np.stack([g.eval_many(pts) for g in _grad_exprs(fam)])
    grad_sq = np.sum(grads**2, axis=0)
    scale = (grad_sq + EPS_GUARD) ** 1.5 * (1.0 + np.linalg.norm(pts, axis=1))
    residuals = num / scale

    normal_sq = grads[0] ** 2 - grads[-1] ** 2
    for a in range(m):
        normal_sq += float(fam.eta.inverse_entry(1 + a)) * grads[1 + a] ** 2
    threshold = tol * grad_sq
    causal = np.where(
        normal_sq < -threshold, "timelike", np.where(normal_sq > threshold, "spacelike", "null")
    )
    return pts, residuals, causal


def write_point_cloud_csv(path, fam: SolutionFamily, pts, residuals, causal) -> None:
    """CSV with header t,x1,...,xM,z,residual,causal; 17 significant digits."""
    cols = ["t"] + [f"x{a}" for a in range(1, fam.m_transverse + 1)] + ["z"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(cols + ["residual", "causal"]) + "\n")
        for row, res, tag in zip(pts, residuals, causal):
            fh.write(",".join(f"{c:.17g}" for c in row) + f",{res:.17g},{tag}\n")
