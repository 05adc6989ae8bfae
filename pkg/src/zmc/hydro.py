"""Exact similarity solutions of the axially symmetric hydrodynamic equation.

The equation, for p = p(tau, r) with dot = d/dtau and prime = d/dr, is

    pdd + 2 (p' pd' - pd p'') = (M-1)/r * (2 pd p' + p'^3).

Similarity profiles  p = tau^a P(tau^c r)  with  a + 2c + 1 = 0  and
P(w) = alpha + beta w^2 / 2  solve it exactly for two parameter branches:

    minus:  a = -(M+1)/(M-1),  beta = -1/(M-1);
    plus:   a = 2M+1,          beta = 1.

Everything here is verified with exact rational-exponent monomial algebra; the
amplitude alpha stays a formal symbol (coefficients are polynomials in alpha),
so a symbolic zero covers all alpha at once.  Substituting the profile also
reduces the equation to an ODE in the similarity variable w, verified by the
same machinery with the w exponent stored in the r slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .metric import Rational, as_fraction

# coefficient: polynomial in the formal amplitude symbol, {alpha power: coeff}
AlphaPoly = dict[int, Fraction]
TwoKey = tuple[Fraction, Fraction]


def _apoly(c: Rational | AlphaPoly) -> AlphaPoly:
    if isinstance(c, dict):
        return {int(k): as_fraction(v) for k, v in c.items() if v}
    c = as_fraction(c)
    return {0: c} if c else {}


def _apoly_add(a: AlphaPoly, b: AlphaPoly) -> AlphaPoly:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Fraction(0)) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _apoly_mul(a: AlphaPoly, b: AlphaPoly) -> AlphaPoly:
    out: AlphaPoly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            s = out.get(k, Fraction(0)) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


class TRExpr:
    """Canonical sum of terms  (poly in alpha) * tau^e_tau * r^e_r, exponents rational."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[TwoKey, AlphaPoly] | None = None):
        object.__setattr__(self, "terms", {k: v for k, v in (terms or {}).items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("TRExpr is immutable")

    @classmethod
    def zero(cls) -> TRExpr:
        return cls()

    @classmethod
    def term(cls, coeff: Rational | AlphaPoly, e_tau: Rational, e_r: Rational) -> TRExpr:
        return cls({(as_fraction(e_tau), as_fraction(e_r)): _apoly(coeff)})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[TwoKey, Rational | AlphaPoly]]) -> TRExpr:
        acc: dict[TwoKey, AlphaPoly] = {}
        for (e_tau, e_r), c in items:
            key = (as_fraction(e_tau), as_fraction(e_r))
            acc[key] = _apoly_add(acc.get(key, {}), _apoly(c))
        return cls(acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TRExpr):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: TRExpr) -> TRExpr:
        acc = dict(self.terms)
        for key, c in other.terms.items():
            s = _apoly_add(acc.get(key, {}), c)
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        return TRExpr(acc)

    def __neg__(self) -> TRExpr:
        return TRExpr({k: {p: -v for p, v in c.items()} for k, c in self.terms.items()})

    def __sub__(self, other: TRExpr) -> TRExpr:
        return self + (-other)

    def __mul__(self, other: TRExpr | Rational) -> TRExpr:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        acc: dict[TwoKey, AlphaPoly] = {}
        for (t1, r1), c1 in self.terms.items():
            for (t2, r2), c2 in other.terms.items():
                key = (t1 + t2, r1 + r2)
                s = _apoly_add(acc.get(key, {}), _apoly_mul(c1, c2))
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return TRExpr(acc)

    def __rmul__(self, other: Rational) -> TRExpr:
        return self.scale(other)

    def scale(self, c: Rational) -> TRExpr:
        c = as_fraction(c)
        if not c:
            return TRExpr.zero()
        return TRExpr({k: {p: c * v for p, v in ap.items()} for k, ap in self.terms.items()})

    def shift(self, d_tau: Rational, d_r: Rational) -> TRExpr:
        """Multiply by the monomial tau^d_tau * r^d_r."""
        d_tau, d_r = as_fraction(d_tau), as_fraction(d_r)
        return TRExpr({(t + d_tau, r + d_r): c for (t, r), c in self.terms.items()})

    def dtau(self) -> TRExpr:
        acc = {}
        for (e_tau, e_r), c in self.terms.items():
            if e_tau:
                acc[(e_tau - 1, e_r)] = {p: e_tau * v for p, v in c.items()}
        return TRExpr(acc)

    def dr(self) -> TRExpr:
        acc = {}
        for (e_tau, e_r), c in self.terms.items():
            if e_r:
                acc[(e_tau, e_r - 1)] = {p: e_r * v for p, v in c.items()}
        return TRExpr(acc)

    def substitute_alpha(self, alpha: float) -> list[tuple[float, float, float]]:
        """Numeric (coeff, e_tau, e_r) triples with the amplitude substituted."""
        out = []
        for (e_tau, e_r), c in self.terms.items():
            val = math.fsum(float(v) * alpha**p for p, v in c.items())
            out.append((val, float(e_tau), float(e_r)))
        return sorted(out, key=lambda triple: (triple[1], triple[2]))

    def eval_grid(self, taus: np.ndarray, rs: np.ndarray, alpha: float) -> np.ndarray:
        """Evaluate on the tensor grid (taus x rs); requires tau > 0 and r > 0."""
        taus = np.asarray(taus, dtype=float)
        rs = np.asarray(rs, dtype=float)
        if np.any(taus <= 0) or np.any(rs <= 0):
            raise ValueError("rational exponents need tau > 0 and r > 0")
        tt, rr = np.meshgrid(taus, rs, indexing="ij")
        out = np.zeros_like(tt)
        for coeff, e_tau, e_r in self.substitute_alpha(alpha):
            out += coeff * tt**e_tau * rr**e_r
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for (e_tau, e_r), c in sorted(self.terms.items()):
            poly = " + ".join(
                f"{v}*al^{p}" if p else str(v) for p, v in sorted(c.items())
            )
            chunks.append(f"({poly}) * tau^{e_tau} * r^{e_r}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"TRExpr({self})"


ALPHA: AlphaPoly = {1: Fraction(1)}


@dataclass(frozen=True)
class SimilarityFamily:
    """One similarity branch: M >= 2 and the branch selecting (a, beta)."""

    M: int
    branch: str

    def __post_init__(self) -> None:
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        if self.branch not in ("minus", "plus"):
            raise ValueError(f"branch must be 'minus' or 'plus', got {self.branch!r}")

    @property
    def a(self) -> Fraction:
        if self.branch == "minus":
            return Fraction(-(self.M + 1), self.M - 1)
        return Fraction(2 * self.M + 1)

    @property
    def beta(self) -> Fraction:
        if self.branch == "minus":
            return Fraction(-1, self.M - 1)
        return Fraction(1)

    @property
    def c(self) -> Fraction:
        return -(self.a + 1) / 2


def p_solution(fam: SimilarityFamily) -> TRExpr:
    """The profile alpha tau^a + (beta/2) tau^(a+2c) r^2, with a + 2c = -1."""
    a, beta, c = fam.a, fam.beta, fam.c
    return TRExpr.from_terms(
        [((a, Fraction(0)), ALPHA), ((a + 2 * c, Fraction(2)), beta / 2)]
    )


def _pde_sides(p: TRExpr, m: int) -> tuple[TRExpr, TRExpr]:
    pd = p.dtau()
    pdd = pd.dtau()
    pp = p.dr()
    ppd = pp.dtau()
    ppp = pp.dr()
    lhs = pdd + (pp * ppd - pd * ppp).scale(2)
    rhs = ((pd * pp).scale(2) + pp * pp * pp).shift(0, -1).scale(m - 1)
    return lhs, rhs


def pde_residual(p: TRExpr, m: int) -> TRExpr:
    """LHS minus RHS of the hydrodynamic equation applied to p; zero iff p solves it."""
    if m < 2:
        raise ValueError(f"M must be >= 2, got {m}")
    lhs, rhs = _pde_sides(p, m)
    return lhs - rhs


def reduced_ode_residual(a: Rational, m: int, beta: Rational) -> TRExpr:
    """Residual of the similarity-reduced ODE for P(w) = alpha + beta w^2/2.

    The display, with prime = d/dw:

        a(a-1) P - (3/4)(a^2-1) w P' + ((a+1)^2/4) w^2 P''
            + (M a + M - 2) P'^2
        = (M-1)/w P'^3 + 2a (P P'' + (M-1) P P' / w).

    Returned as an expression in w alone (the w exponent lives in the r slot).
    """
    a = as_fraction(a)
    beta = as_fraction(beta)
    p_profile = TRExpr.from_terms([((Fraction(0), Fraction(0)), ALPHA), ((Fraction(0), Fraction(2)), beta / 2)])
    pw = p_profile.dr()
    pww = pw.dr()
    lhs = (
        p_profile.scale(a * (a - 1))
        + pw.shift(0, 1).scale(Fraction(-3, 4) * (a * a - 1))
        + pww.shift(0, 2).scale((a + 1) ** 2 / 4)
        + (pw * pw).scale(m * a + m - 2)
    )
    rhs = (pw * pw * pw).shift(0, -1).scale(m - 1) + (
        p_profile * pww + (p_profile * pw).shift(0, -1).scale(m - 1)
    ).scale(2 * a)
    return lhs - rhs


def pde_residual_numeric(
    p: TRExpr,
    m: int,
    taus: np.ndarray,
    rs: np.ndarray,
    alpha: float,
) -> float:
    """Max over the grid of |LHS - RHS| / (|LHS| + |RHS| + eps), sides evaluated separately."""
    lhs, rhs = _pde_sides(p, m)
    lv = lhs.eval_grid(taus, rs, alpha)
    rv = rhs.eval_grid(taus, rs, alpha)
    return float(np.max(np.abs(lv - rv) / (np.abs(lv) + np.abs(rv) + 1e-300)))


def residual_report(
    fam: SimilarityFamily,
    taus: np.ndarray | None = None,
    rs: np.ndarray | None = None,
    alpha: float = 1.0,
) -> dict:
    """Machine-readable verification record for one similarity branch."""
    if taus is None:
        taus = np.linspace(1.0, 2.0, 11)
    if rs is None:
        rs = np.linspace(0.1, 1.0, 11)
    p = p_solution(fam)
    symbolic_zero = (
        pde_residual(p, fam.M).is_zero()
        and reduced_ode_residual(fam.a, fam.M, fam.beta).is_zero()
    )
    return {
        "branch": fam.branch,
        "M": fam.M,
        "a": str(fam.a),
        "c": str(fam.c),
        "beta": str(fam.beta),
        "symbolic_zero": symbolic_zero,
        "numeric_max_residual": pde_residual_numeric(p, fam.M, taus, rs, alpha),
    }
