"""Parameterized families n -> m_n of charges with declared convergence data.

Every family knows its limit and, where it can, a closed-form envelope of
|(m_n - m)(B)| that is uniform in B.  Families whose value sequences are
piecewise constant in n (point masses) say so through ``pieces``, which lets
the filter layer decide exception sets exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .descriptors import (
    Complement, Intersection, NATURALS, ODDS, Region, SetDescriptor, as_region,
)
from .lattice import Geometric, Regulator, Sequence, Vec
from .measures import AtomicSpace, Charge, CountableAtoms, evaluate, variation


class InexactValue(ValueError):
    pass


def _identity(m: Charge) -> Charge:
    return m


class MeasureFamily:
    space: AtomicSpace = CountableAtoms
    dim: int = 1
    limit: Charge
    envelope: Optional[Regulator] = None
    exceptional: Optional[SetDescriptor] = None
    variation_envelope: Optional[Regulator] = None
    name: str = "family"

    def member(self, n: int) -> Charge:
        raise NotImplementedError

    def __call__(self, n: int) -> Charge:
        return self.member(n)

    def members(self, depth: int) -> list:
        return [self.member(n) for n in range(1, depth + 1)]

    def difference(self, n: int) -> Charge:
        return self.member(n) - self.limit

    def pieces(self, A: Region):
        """Optional partition of N on which n -> (m_n - m)(A) is constant."""
        return None

    def cached_difference(self, n: int) -> Charge:
        cache = self.__dict__.setdefault("_differences", {})
        d = cache.get(n)
        if d is None:
            d = cache[n] = self.difference(n)
        return d

    def sequence(self, A, depth: int, part: Callable[[Charge], Charge] = _identity) -> Sequence:
        """n -> part(m_n - m)(A), exact, with the family's declarations attached."""
        region = as_region(A)

        @lru_cache(maxsize=None)
        def term(n: int) -> Vec:
            v = evaluate(part(self.cached_difference(n)), region, depth)
            if not v.is_exact:
                raise InexactValue(f"value of member {n} is not exact")
            return v.partial

        pieces = self.pieces(region) if part is _identity else None
        return Sequence(term, self.envelope, self.exceptional, pieces, f"{self.name}@{region.atoms}")


class Perturbation(MeasureFamily):
    """m_n = m + 2^-n d."""

    def __init__(self, m: Charge, d: Charge, name: str = "perturbation"):
        if m.space != d.space or m.dim != d.dim:
            raise ValueError("m and d must share space and dimension")
        self.base, self.d = m, d
        self.space, self.dim, self.limit, self.name = m.space, m.dim, m, name
        V = _total_variation(d)
        self.envelope = Geometric(V, Fraction(1, 2))
        self.variation_envelope = None

    def member(self, n: int) -> Charge:
        return self.base + self.d.scale(Fraction(1, 2 ** n))

    def difference(self, n: int) -> Charge:
        return self.d.scale(Fraction(1, 2 ** n))


def _total_variation(m: Charge) -> Vec:
    """v(m)(Ω), a closed-form upper bound."""
    out = Vec.zero(m.dim)
    for _, w in m.atoms:
        out = out + abs(w)
    for g in m.families:
        out = out + abs(g.c).scale(g.rho / (1 - g.rho))
    for p in m.pieces:
        out = out + abs(p.density).scale(p.b - p.a)
    if m.at_infinity is not None:
        out = out + abs(m.at_infinity.c)
    return out


def Constant(m: Charge, name: str = "constant") -> Perturbation:
    return Perturbation(m, Charge.zero(m.space, m.dim), name)


def Zero(dim: int = 1, space: AtomicSpace = CountableAtoms) -> Perturbation:
    return Constant(Charge.zero(space, dim), "zero")


class SchurTriangle(MeasureFamily):
    """m_n({k}) = 2^-n for k <= n; the total variation is n 2^-n."""

    def __init__(self):
        self.space, self.dim = CountableAtoms, 1
        self.limit = Charge.zero(CountableAtoms, 1)
        # n 2^-n <= (21/10)(3/5)^n for every n
        self.envelope = Geometric(Vec([Fraction(21, 10)]), Fraction(3, 5))
        self.variation_envelope = self.envelope
        self.name = "schur-triangle"

    def member(self, n: int) -> Charge:
        w = Vec([Fraction(1, 2 ** n)])
        return Charge(CountableAtoms, 1, tuple((k, w) for k in range(1, n + 1)))


class PointMasses(MeasureFamily):
    """m_n = c δ_n for n in S, else 0."""

    def __init__(self, c: Vec, S: SetDescriptor = NATURALS, name: str = "point-masses"):
        self.c, self.S = c, S
        self.space, self.dim = CountableAtoms, c.dim
        self.limit = Charge.zero(CountableAtoms, c.dim)
        self.name = name

    def member(self, n: int) -> Charge:
        if not self.S.contains(n):
            return self.limit
        return Charge(CountableAtoms, self.dim, ((n, self.c),))

    def pieces(self, A: Region):
        if A.atoms.is_opaque() or self.S.is_opaque():
            return None
        hit = A.atoms if self.S == NATURALS else Intersection(A.atoms, self.S)
        return ((hit, self.c), (Complement(hit), Vec.zero(self.dim)))


class BlockSplit(MeasureFamily):
    """m_n = (1 + s(n)) m for n in B and m otherwise, s(n) = n mod 3.

    The members indexed by B oscillate; for B in the dual ideal of a filter
    the family still converges along it.
    """

    def __init__(self, m: Charge, B: SetDescriptor = ODDS, name: str = "block-split"):
        self.base, self.B = m, B
        self.space, self.dim, self.limit, self.name = m.space, m.dim, m, name
        self.envelope = Geometric(Vec.zero(m.dim), Fraction(1, 2))
        self.exceptional = B

    def member(self, n: int) -> Charge:
        return self.base + self.difference(n)

    def difference(self, n: int) -> Charge:
        s = n % 3 if self.B.contains(n) else 0
        return self.base.scale(s)


def family_total_variation(fam: MeasureFamily, n: int, depth: int) -> Vec:
    return variation(fam.member(n), NATURALS, depth).upper


__all__ = [
    "MeasureFamily", "Perturbation", "Constant", "Zero", "SchurTriangle", "PointMasses",
    "BlockSplit", "InexactValue", "family_total_variation",
]
