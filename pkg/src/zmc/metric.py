"""Diagonal pseudo-metrics and the scalar invariants that select solution classes.

The ambient space is R^D with a diagonal background metric

    eta = diag(1, eta_1, ..., eta_M, -1),   M = D - 2,  eta_a = +-1,

and a second diagonal metric g = diag(1, eps_1, ..., eps_M, -1) defining the
quadratic form whose level sets are studied.  The slot convention is fixed:
index 0 is the time coordinate t, index D-1 is the distinguished coordinate z,
so the null covector alpha = (1, 0, ..., 0, 1) pairs with x to give t + z.

All entries are exact rationals.  Two invariants drive everything downstream:

  gamma  = trace of g against the inverse of eta (sum of g[mu]/eta[mu]);
  lambda = the unique weight, when it exists, making g.eta^{-1}.g an affine
           combination lambda*eta + (1-lambda)*g.

The three solution classes are selected by gamma and lambda:

  A: g = eta (gamma = D), admissible exponents n in {-1, -2(D-1)};
  B: gamma = 0 with sign entries (forces D even), n in {2, -1};
  C: transverse entries all equal to lambda = 1/(M-1), n in {2*lambda, -1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


Rational = int | Fraction


def as_fraction(value: Rational | str) -> Fraction:
    """Coerce to an exact Fraction; floats are rejected to keep arithmetic exact."""
    if isinstance(value, float):
        raise TypeError(f"exact rational expected, got float {value!r}")
    return Fraction(value)


class ClassTag(Enum):
    """Exhaustive three-way tag for the solution classes."""

    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class DiagonalMetric:
    """A diagonal metric diag(1, e_1, ..., e_{D-2}, -1) with exact rational entries."""

    dim: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.dim < 3:
            raise ValueError(f"dimension must be >= 3, got {self.dim}")
        if len(self.entries) != self.dim:
            raise ValueError(f"expected {self.dim} entries, got {len(self.entries)}")
        entries = tuple(as_fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if entries[0] != 1:
            raise ValueError("time slot must carry entry +1")
        if entries[-1] != -1:
            raise ValueError("z slot must carry entry -1")
        if any(e == 0 for e in entries):
            raise ValueError("all entries must be nonzero (metric invertible)")

    @classmethod
    def from_entries(cls, entries: list[Rational]) -> DiagonalMetric:
        return cls(len(entries), tuple(as_fraction(e) for e in entries))

    @classmethod
    def minkowski(cls, dim: int) -> DiagonalMetric:
        """diag(1, -1, ..., -1): the mostly-minus Minkowski metric."""
        return cls.from_entries([1] + [-1] * (dim - 1))

    @property
    def transverse(self) -> tuple[Fraction, ...]:
        """The D-2 entries between the t and z slots."""
        return self.entries[1:-1]

    def inverse_entry(self, mu: int) -> Fraction:
        return 1 / self.entries[mu]

    def __str__(self) -> str:
        return "diag(" + ", ".join(str(e) for e in self.entries) + ")"


def class_c_metric(m: int) -> DiagonalMetric:
    """The deformed metric diag(1, lam, ..., lam, -1) with lam = 1/(M-1)."""
    if m < 2:
        raise ValueError(f"class C needs M >= 2, got M={m}")
    lam = Fraction(1, m - 1)
    return DiagonalMetric.from_entries([1] + [lam] * m + [-1])


def gamma(eta: DiagonalMetric, g: DiagonalMetric) -> Fraction:
    """Trace of g against the inverse of eta: sum over mu of g[mu]/eta[mu]."""
    if eta.dim != g.dim:
        raise ValueError(f"dimension mismatch: {eta.dim} vs {g.dim}")
    return sum((g.entries[mu] / eta.entries[mu] for mu in range(eta.dim)), Fraction(0))


def lambda_decompose(eta: DiagonalMetric, g: DiagonalMetric) -> Fraction | None:
    """Solve g.eta^{-1}.g = lam*eta + (1-lam)*g entrywise for a single rational lam.

    Returns None when no single weight satisfies every slot.  When g = eta the
    identity holds for every lam; the canonical answer lam = 1 is returned so
    the deformed identities degenerate to the undeformed ones continuously.
    """
    if eta.dim != g.dim:
        raise ValueError(f"dimension mismatch: {eta.dim} vs {g.dim}")
    lam: Fraction | None = None
    for mu in range(eta.dim):
        e, s = eta.entries[mu], g.entries[mu]
        lhs = s * s / e
        if e == s:
            # lhs == s automatically; the slot constrains nothing
            continue
        slot_lam = (lhs - s) / (e - s)
        if lam is None:
            lam = slot_lam
        elif lam != slot_lam:
            return None
    return Fraction(1) if lam is None else lam


def admissible_exponents(
    tag: ClassTag,
    dim: int,
    gamma_value: Rational,
    lam: Rational | None = None,
) -> list[Fraction]:
    """Exact exponents n for which the level sets have zero mean curvature.

    Class A: roots of n^2 + (2*gamma - 1)*n + 2*(gamma - 1) with gamma = D,
    i.e. {-1, -2(D-1)}.  Class B: roots of n^2 - n - 2, i.e. {2, -1}.
    Class C: {2*lam, -1}.  Raises on class/parameter mismatch.
    """
    gam = as_fraction(gamma_value)
    if tag is ClassTag.A:
        if gam != dim:
            raise ValueError(f"class A requires gamma = D, got gamma={gam}, D={dim}")
        # n^2 + (2g-1)n + 2(g-1) factors as (n+1)(n + 2(g-1))
        return [Fraction(2 - 2 * dim), Fraction(-1)]
    if tag is ClassTag.B:
        if gam != 0:
            raise ValueError(f"class B requires gamma = 0, got gamma={gam}")
        return [Fraction(2), Fraction(-1)]
    if tag is ClassTag.C:
        if lam is None:
            raise ValueError("class C requires lambda")
        lam_f = as_fraction(lam)
        if gam + lam_f != 1:
            raise ValueError(f"class C requires gamma + lambda = 1, got {gam} + {lam_f}")
        return [2 * lam_f, Fraction(-1)]
    raise ValueError(f"unknown class tag {tag!r}")


def partner_metric_for_class_B(dim: int, eta: DiagonalMetric) -> DiagonalMetric:
    """The sign metric g with gamma(eta, g) = 0: q = (D-2)/2 + 1 leading transverse
    entries flipped relative to eta, the rest agreeing.

    gamma = 0 needs two more transverse signs differing than agreeing, which is
    only possible in even dimension.
    """
    if dim % 2 != 0:
        raise ValueError(
            f"no gamma = 0 sign partner in odd dimension D={dim}: the transverse "
            "slots must split into q differing and q-2 agreeing signs"
        )
    if eta.dim != dim:
        raise ValueError(f"dimension mismatch: {eta.dim} vs {dim}")
    if any(abs(e) != 1 for e in eta.entries):
        raise ValueError("partner construction requires eta entries in {+1, -1}")
    m = dim - 2
    q = (dim - 2) // 2 + 1
    flipped = [-eta.entries[1 + a] if a < q else eta.entries[1 + a] for a in range(m)]
    return DiagonalMetric.from_entries([1] + flipped + [-1])
