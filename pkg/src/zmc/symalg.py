"""Exact symbolic kernel for fields built from light-cone monomials.

Expressions live on R^D with coordinates (t, x^1, ..., x^M, z), M = D - 2, and
are stored canonically in light-cone variables

    u = t + z,   v = t - z        (so t^2 - z^2 = u*v),

as finite sums   coeff * u^e_u * v^e_v * prod_a (x^a)^m_a   with exact rational
coefficients.  The exponent e_u may be any rational (powers like u^(2/3) occur
in the deformed solution class); e_v and the transverse exponents are
nonnegative integers.  This shape is closed under the ring operations and
under differentiation, and it makes the zero test syntactic: an expression is
zero iff its term map is empty.

Differentiation uses d/dt = d/du + d/dv and d/dz = d/du - d/dv, so the
d'Alembertian of diag(1, eta_a, -1) becomes 4 d_u d_v + sum_a (1/eta_a) d_a^2
and the null direction (1, 0, ..., 0, 1) is simply the variable u.

No floating point enters the kernel; numeric evaluation is provided separately
by ``FieldExpr.eval_at`` and the vectorized ``FieldExpr.eval_many``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .metric import DiagonalMetric, Rational, as_fraction, gamma, lambda_decompose

# term key: (u exponent, v exponent, transverse exponents)
Key = tuple[Fraction, int, tuple[int, ...]]


class FieldExpr:
    """Immutable canonical expression; equal iff the term maps are identical."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict[Key, Fraction] | None = None):
        if dim < 3:
            raise ValueError(f"dimension must be >= 3, got {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", dict(terms) if terms else {})

    def __setattr__(self, name, value):
        raise AttributeError("FieldExpr is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> FieldExpr:
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, c: Rational) -> FieldExpr:
        c = as_fraction(c)
        m = (0,) * (dim - 2)
        return cls(dim, {(Fraction(0), 0, m): c} if c else {})

    @classmethod
    def u_power(cls, dim: int, e: Rational) -> FieldExpr:
        return cls(dim, {(as_fraction(e), 0, (0,) * (dim - 2)): Fraction(1)})

    @classmethod
    def v_power(cls, dim: int, e: int) -> FieldExpr:
        if e < 0:
            raise ValueError("v exponent must be a nonnegative integer")
        return cls(dim, {(Fraction(0), e, (0,) * (dim - 2)): Fraction(1)})

    @classmethod
    def coord(cls, dim: int, a: int, power: int = 1) -> FieldExpr:
        """The transverse monomial (x^a)^power, a = 1..D-2."""
        if not 1 <= a <= dim - 2:
            raise ValueError(f"transverse index must be in 1..{dim - 2}, got {a}")
        if power < 0:
            raise ValueError("transverse exponent must be a nonnegative integer")
        m = [0] * (dim - 2)
        m[a - 1] = power
        return cls(dim, {(Fraction(0), 0, tuple(m)): Fraction(1)})

    @classmethod
    def from_terms(cls, dim: int, items: Iterable[tuple[Key, Rational]]) -> FieldExpr:
        acc: dict[Key, Fraction] = {}
        for key, c in items:
            e_u, e_v, mono = key
            key = (as_fraction(e_u), int(e_v), tuple(int(p) for p in mono))
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(c)
        return cls(dim, {k: c for k, c in acc.items() if c})

    # -- ring structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldExpr):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def _check_dim(self, other: FieldExpr) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: FieldExpr) -> FieldExpr:
        self._check_dim(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            s = acc.get(key, Fraction(0)) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        return FieldExpr(self.dim, acc)

    def __neg__(self) -> FieldExpr:
        return FieldExpr(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: FieldExpr) -> FieldExpr:
        return self + (-other)

    def scale(self, c: Rational) -> FieldExpr:
        c = as_fraction(c)
        if not c:
            return FieldExpr.zero(self.dim)
        return FieldExpr(self.dim, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: FieldExpr | Rational) -> FieldExpr:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_dim(other)
        acc: dict[Key, Fraction] = {}
        for (eu1, ev1, m1), c1 in self.terms.items():
            for (eu2, ev2, m2), c2 in other.terms.items():
                key = (eu1 + eu2, ev1 + ev2, tuple(a + b for a, b in zip(m1, m2)))
                s = acc.get(key, Fraction(0)) + c1 * c2
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return FieldExpr(self.dim, acc)

    def __rmul__(self, other: Rational) -> FieldExpr:
        return self.scale(other)

    # -- inspection ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def has_fractional_u(self) -> bool:
        return any(e_u.denominator != 1 for (e_u, _, _) in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for (e_u, e_v, mono), c in self.sorted_terms():
            factors = [str(c)]
            if e_u:
                factors.append(f"u^{e_u}")
            if e_v:
                factors.append(f"v^{e_v}")
            for a, p in enumerate(mono, start=1):
                if p:
                    factors.append(f"x{a}^{p}")
            chunks.append(" * ".join(factors))
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"FieldExpr(dim={self.dim}, {self})"

    # -- numeric evaluation -------------------------------------------------

    def eval_at(self, point: Sequence[float]) -> float:
        """Evaluate at (t, x^1, ..., x^M, z); u powers use the positive real branch."""
        if len(point) != self.dim:
            raise ValueError(f"point must have {self.dim} coordinates")
        t, z = float(point[0]), float(point[-1])
        xs = [float(c) for c in point[1:-1]]
        u, v = t + z, t - z
        if self.has_fractional_u() and u <= 0.0:
            raise ValueError(f"fractional u powers need t + z > 0, got u = {u}")
        vals = []
        for (e_u, e_v, mono), c in self.terms.items():
            if e_u.denominator == 1:
                p = int(e_u)
                if u == 0.0 and p < 0:
                    raise ValueError("negative u power on the line t + z = 0")
                uf = u**p
            else:
                uf = u ** float(e_u)
            term = float(c) * uf * v**e_v
            for x, pw in zip(xs, mono):
                if pw:
                    term *= x**pw
            vals.append(term)
        return math.fsum(vals)

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized ``eval_at`` over an (N, D) array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"points must have shape (N, {self.dim})")
        t, z = pts[:, 0], pts[:, -1]
        u, v = t + z, t - z
        if self.has_fractional_u() and np.any(u <= 0.0):
            raise ValueError("fractional u powers need t + z > 0 at every point")
        out = np.zeros(len(pts))
        for (e_u, e_v, mono), c in self.terms.items():
            term = float(c) * u ** float(e_u)
            if e_v:
                term = term * v**e_v
            for a, pw in enumerate(mono):
                if pw:
                    term = term * pts[:, 1 + a] ** pw
            out += term
        return out


# -- differential operators ---------------------------------------------------


def _d_u(e: FieldExpr) -> FieldExpr:
    acc = {}
    for (e_u, e_v, m), c in e.terms.items():
        if e_u:
            acc[(e_u - 1, e_v, m)] = c * e_u
    return FieldExpr(e.dim, acc)


def _d_v(e: FieldExpr) -> FieldExpr:
    acc = {}
    for (e_u, e_v, m), c in e.terms.items():
        if e_v:
            acc[(e_u, e_v - 1, m)] = c * e_v
    return FieldExpr(e.dim, acc)


def _d_x(e: FieldExpr, a: int) -> FieldExpr:
    # a is the 0-based transverse slot
    acc = {}
    for (e_u, e_v, m), c in e.terms.items():
        if m[a]:
            m2 = list(m)
            m2[a] -= 1
            acc[(e_u, e_v, tuple(m2))] = c * m[a]
    return FieldExpr(e.dim, acc)


def partial(e: FieldExpr, mu: int) -> FieldExpr:
    """Partial derivative along coordinate mu (0 = t, D-1 = z, else transverse)."""
    if not 0 <= mu < e.dim:
        raise ValueError(f"coordinate index must be in 0..{e.dim - 1}, got {mu}")
    if mu == 0:
        return _d_u(e) + _d_v(e)
    if mu == e.dim - 1:
        return _d_u(e) - _d_v(e)
    return _d_x(e, mu - 1)


def contract_grad(a: FieldExpr, b: FieldExpr, eta: DiagonalMetric) -> FieldExpr:
    """The contraction d_mu(a) eta^{mu nu} d_nu(b), in light-cone form.

    The (t, z) block contributes 2*(d_u a d_v b + d_v a d_u b); each transverse
    direction contributes (1/eta_a) d_a(a) d_a(b).
    """
    a._check_dim(b)
    if eta.dim != a.dim:
        raise ValueError(f"dimension mismatch: metric {eta.dim} vs expression {a.dim}")
    out = (_d_u(a) * _d_v(b) + _d_v(a) * _d_u(b)).scale(2)
    for s in range(a.dim - 2):
        out = out + (_d_x(a, s) * _d_x(b, s)).scale(eta.inverse_entry(1 + s))
    return out


def grad_square(e: FieldExpr, eta: DiagonalMetric) -> FieldExpr:
    """(de)^2 = d_mu(e) eta^{mu nu} d_nu(e)."""
    return contract_grad(e, e, eta)


def box(e: FieldExpr, eta: DiagonalMetric) -> FieldExpr:
    """The wave operator of eta: 4 d_u d_v + sum_a (1/eta_a) d_a^2."""
    if eta.dim != e.dim:
        raise ValueError(f"dimension mismatch: metric {eta.dim} vs expression {e.dim}")
    out = _d_u(_d_v(e)).scale(4)
    for s in range(e.dim - 2):
        out = out + _d_x(_d_x(e, s), s).scale(eta.inverse_entry(1 + s))
    return out


# -- field builders -----------------------------------------------------------


def quadratic_form(g: DiagonalMetric) -> FieldExpr:
    """x.g.x = u*v + sum_a eps_a (x^a)^2."""
    dim = g.dim
    items: list[tuple[Key, Fraction]] = [((Fraction(1), 1, (0,) * (dim - 2)), Fraction(1))]
    for a in range(dim - 2):
        mono = [0] * (dim - 2)
        mono[a] = 2
        items.append(((Fraction(0), 0, tuple(mono)), g.entries[1 + a]))
    return FieldExpr.from_terms(dim, items)


def chi_ansatz(n: Rational, g: DiagonalMetric) -> FieldExpr:
    """The product field u^n * (x.g.x) = u^{n+1} v + sum_a eps_a u^n (x^a)^2."""
    return FieldExpr.u_power(g.dim, n) * quadratic_form(g)


def mc_numerator(e: FieldExpr, eta: DiagonalMetric) -> FieldExpr:
    """Mean-curvature numerator of the level sets of e:

        (1/2) d^mu(e) d_mu((de)^2)  -  (de)^2 box(e).

    Identically zero iff every level set of e has zero mean curvature (where
    the gradient is non-null).
    """
    gs = grad_square(e, eta)
    return contract_grad(e, gs, eta).scale(Fraction(1, 2)) - gs * box(e, eta)


# -- machine-checked identities ------------------------------------------------


def _psi_power(dim: int, n: Fraction, k: int) -> FieldExpr:
    return FieldExpr.u_power(dim, k * n)


def _require_lambda(eta: DiagonalMetric, g: DiagonalMetric, lam: Rational) -> Fraction:
    lam = as_fraction(lam)
    actual = lambda_decompose(eta, g)
    if actual != lam:
        raise ValueError(f"lambda mismatch: metric pair gives {actual}, got {lam}")
    return lam


def verify_box_identity(n: Rational, eta: DiagonalMetric, g: DiagonalMetric) -> bool:
    """Check box(u^n x.g.x) == (4n + 2*gamma) u^n exactly."""
    n = as_fraction(n)
    chi = chi_ansatz(n, g)
    rhs = _psi_power(g.dim, n, 1).scale(4 * n + 2 * gamma(eta, g))
    return (box(chi, eta) - rhs).is_zero()


def verify_gradsq_identity(
    n: Rational, eta: DiagonalMetric, g: DiagonalMetric, lam: Rational
) -> bool:
    """Check (d chi)^2 == 4((n+1-lam) psi^2 phi + lam psi^2 x^2) exactly.

    Requires lam to be the weight actually produced by the metric pair.
    """
    n = as_fraction(n)
    lam = _require_lambda(eta, g, lam)
    chi = chi_ansatz(n, g)
    psi2 = _psi_power(g.dim, n, 2)
    rhs = (
        psi2 * quadratic_form(g).scale(n + 1 - lam) + psi2 * quadratic_form(eta).scale(lam)
    ).scale(4)
    return (grad_square(chi, eta) - rhs).is_zero()


def verify_cubic_identity(
    n: Rational, eta: DiagonalMetric, g: DiagonalMetric, lam: Rational
) -> bool:
    """Check the cubic contraction (1/2) d^mu(chi) d_mu((d chi)^2) against its
    closed form

        4( psi^3 phi (3n^2 + n(5-4 lam) + 2(lam^2 - lam + 1))
           + lam psi^3 x^2 (4n + 2(1-lam)) ),

    coefficient for coefficient.
    """
    n = as_fraction(n)
    lam = _require_lambda(eta, g, lam)
    chi = chi_ansatz(n, g)
    lhs = contract_grad(chi, grad_square(chi, eta), eta).scale(Fraction(1, 2))
    psi3 = _psi_power(g.dim, n, 3)
    rhs = (
        psi3 * quadratic_form(g).scale(3 * n * n + n * (5 - 4 * lam) + 2 * (lam * lam - lam + 1))
        + psi3 * quadratic_form(eta).scale(lam * (4 * n + 2 * (1 - lam)))
    ).scale(4)
    return (lhs - rhs).is_zero()
