"""Representable finitely additive measures ("charges") with values in Q^d.

A :class:`Charge` is the sum of

* an atomic part: finitely many explicit atom weights plus geometric weight
  families k -> c * rho^k on a support descriptor (countable spaces only),
* a diffuse part: a step density on finitely many dyadic intervals of [0, 1),
* a charge at infinity c * lim_F 1_A along a partition filter F, defined on
  the subalgebra F ∪ I_F.

Countable sums are truncated and reported as :class:`ValueInterval`s whose
width comes from the closed-form geometric tail envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from . import _kernels
from .descriptors import (
    ArithProg, Complement, EMPTY, Finite, Intersection, NATURALS, Region,
    Segment, SetDescriptor, Union, as_region, tail_from,
)
from .filters import PartitionFilter, in_ideal
from .lattice import (
    DimensionError, Geometric, Regulator, Sum, Vec, Verdict, zero_regulator,
)

BRUTE_FORCE_CAP = 20
EXACT_RANGE_CAP = 1 << 16


class NotMeasurable(ValueError):
    """The set is neither in the filter nor in its dual ideal."""


class UnsupportedCombination(ValueError):
    pass


@dataclass(frozen=True)
class AtomicSpace:
    kind: str  # "finite" or "countable"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("finite", "countable"):
            raise ValueError("space kind is 'finite' or 'countable'")
        if self.kind == "finite" and self.n < 1:
            raise ValueError("FiniteAtoms needs n >= 1")

    @property
    def finite(self) -> bool:
        return self.kind == "finite"


def FiniteAtoms(n: int) -> AtomicSpace:
    return AtomicSpace("finite", n)


CountableAtoms = AtomicSpace("countable")


@dataclass(frozen=True)
class GeometricWeights:
    """k -> c * rho^k on ``support``."""

    c: Vec
    rho: Fraction
    support: SetDescriptor = NATURALS

    def __post_init__(self):
        rho = Fraction(self.rho)
        object.__setattr__(self, "rho", rho)
        if not 0 < rho < 1:
            raise ValueError("geometric ratio must lie in (0, 1)")

    def weight(self, k: int) -> Vec:
        if self.support.contains(k):
            return self.c.scale(self.rho ** k)
        return Vec.zero(self.c.dim)

    def tail_pos(self, T: int) -> Vec:
        """Upper bound of the positive part of sum_{k > T}."""
        return self.c.pos().scale(self.rho ** (T + 1) / (1 - self.rho))

    def tail_neg(self, T: int) -> Vec:
        return self.c.neg().scale(self.rho ** (T + 1) / (1 - self.rho))


@dataclass(frozen=True)
class Piece:
    a: Fraction
    b: Fraction
    density: Vec

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not 0 <= a < b <= 1:
            raise ValueError("pieces are nonempty subintervals of [0, 1)")
        for x in (a, b):
            if x.denominator & (x.denominator - 1):
                raise ValueError("piece endpoints must be dyadic rationals")


@dataclass(frozen=True)
class AtInfinity:
    c: Vec
    filter: PartitionFilter


@lru_cache(maxsize=4096)
def _ideal_status_cached(f: PartitionFilter, d: SetDescriptor, depth: int) -> str:
    return _ideal_status_raw(f, d, depth)


def _ideal_status_raw(f, d, depth) -> str:
    if in_ideal(f, d, depth).is_holds:
        return "ideal"
    if in_ideal(f, Complement(d), depth).is_holds:
        return "filter"
    return "neither"


def ideal_status(f: PartitionFilter, d: SetDescriptor, depth: int = 64) -> str:
    if d.is_opaque():
        return _ideal_status_raw(f, d, depth)
    return _ideal_status_cached(f, d, depth)


def disjoint(a: SetDescriptor, b: SetDescriptor) -> bool:
    """Structural (sound, incomplete) disjointness test."""
    if a == EMPTY or b == EMPTY or a == Complement(b) or b == Complement(a):
        return True
    for x, y in ((a, b), (b, a)):
        if isinstance(x, Finite):
            return not any(y.contains(k) for k in x.elems)
        if isinstance(x, Intersection) and (disjoint(x.left, y) or disjoint(x.right, y)):
            return True
    if isinstance(a, Union):
        return disjoint(a.left, b) and disjoint(a.right, b)
    if isinstance(b, Union):
        return disjoint(a, b.left) and disjoint(a, b.right)
    return False


def finite_bound(d: SetDescriptor) -> Optional[int]:
    """An upper bound for the elements of d when d is structurally finite."""
    if isinstance(d, Finite):
        return d.elems[-1] if d.elems else 0
    if isinstance(d, Intersection):
        a, b = finite_bound(d.left), finite_bound(d.right)
        if a is None:
            return b
        return a if b is None else min(a, b)
    if isinstance(d, Union):
        a, b = finite_bound(d.left), finite_bound(d.right)
        return None if a is None or b is None else max(a, b)
    if isinstance(d, Complement) and isinstance(d.inner, ArithProg) and d.inner.d == 1:
        return max(d.inner.a - 1, 0)
    return None


# ---------------------------------------------------------------------------
# interval values


@dataclass(frozen=True)
class ValueInterval:
    """Componentwise interval [lower, upper]; ``partial`` is the exact
    truncated sum the interval was widened from."""

    lower: Vec
    upper: Vec
    partial: Vec

    @classmethod
    def exact(cls, v: Vec) -> "ValueInterval":
        return cls(v, v, v)

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError("interval lower bound exceeds upper bound")

    @property
    def dim(self) -> int:
        return self.lower.dim

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    def __add__(self, other: "ValueInterval") -> "ValueInterval":
        return ValueInterval(self.lower + other.lower, self.upper + other.upper,
                             self.partial + other.partial)

    def __neg__(self) -> "ValueInterval":
        return ValueInterval(-self.upper, -self.lower, -self.partial)

    def __sub__(self, other: "ValueInterval") -> "ValueInterval":
        return self + (-other)

    def contains(self, v: Vec) -> bool:
        return self.lower <= v <= self.upper

    def contains_interval(self, other: "ValueInterval") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def abs_upper(self) -> Vec:
        return abs(self.lower).sup(abs(self.upper))

    def abs_lower(self) -> Vec:
        return Vec(lo if lo > 0 else (-hi if hi < 0 else 0)
                   for lo, hi in zip(self.lower, self.upper))

    def width(self) -> Vec:
        return self.upper - self.lower


# ---------------------------------------------------------------------------
# charges


def _flatten(pieces, dim: int) -> tuple:
    """Disjoint, merged (a, b, density) triples with nonzero density."""
    if not pieces:
        return ()
    cuts = sorted({p.a for p in pieces} | {p.b for p in pieces})
    out = []
    for a, b in zip(cuts, cuts[1:]):
        dens = Vec.zero(dim)
        for p in pieces:
            if p.a <= a and b <= p.b:
                dens = dens + p.density
        if dens.is_zero():
            continue
        if out and out[-1].b == a and out[-1].density == dens:
            out[-1] = Piece(out[-1].a, b, dens)
        else:
            out.append(Piece(a, b, dens))
    return tuple(out)


@dataclass(frozen=True)
class Charge:
    space: AtomicSpace
    dim: int
    atoms: tuple = ()            # ((index, Vec), ...) sorted, nonzero
    families: tuple = ()         # GeometricWeights
    pieces: tuple = ()           # flattened Piece
    at_infinity: Optional[AtInfinity] = None

    def __post_init__(self):
        merged: dict = {}
        for k, w in self.atoms:
            k = int(k)
            if k < 1 or (self.space.finite and k > self.space.n):
                raise ValueError(f"atom index {k} outside the space")
            if w.dim != self.dim:
                raise DimensionError("atom weight dimension mismatch")
            merged[k] = merged[k] + w if k in merged else w
        object.__setattr__(self, "atoms", tuple(sorted((k, w) for k, w in merged.items() if not w.is_zero())))
        fams: dict = {}
        for g in self.families:
            if g.c.dim != self.dim:
                raise DimensionError("family dimension mismatch")
            key = (g.rho, g.support)
            fams[key] = fams[key] + g.c if key in fams else g.c
        if fams and self.space.finite:
            raise ValueError("geometric families need a countable atom space")
        object.__setattr__(self, "families", tuple(
            GeometricWeights(c, rho, sup) for (rho, sup), c in fams.items() if not c.is_zero()))
        for p in self.pieces:
            if p.density.dim != self.dim:
                raise DimensionError("piece density dimension mismatch")
        object.__setattr__(self, "pieces", _flatten(self.pieces, self.dim))
        if self.at_infinity is not None:
            if self.space.finite:
                raise ValueError("a charge at infinity needs a countable atom space")
            if self.at_infinity.c.dim != self.dim:
                raise DimensionError("charge dimension mismatch")

    # -- construction helpers
    @classmethod
    def zero(cls, space: AtomicSpace, dim: int) -> "Charge":
        return cls(space, dim)

    @classmethod
    def from_weights(cls, weights, space: Optional[AtomicSpace] = None) -> "Charge":
        """Atoms 1..n with the given weights (Vecs or scalars)."""
        ws = [w if isinstance(w, Vec) else Vec([w]) for w in weights]
        space = space or FiniteAtoms(len(ws))
        return cls(space, ws[0].dim, tuple((i + 1, w) for i, w in enumerate(ws)))

    # -- structure
    @property
    def explicit_max(self) -> int:
        return self.atoms[-1][0] if self.atoms else 0

    @property
    def has_charge(self) -> bool:
        return self.at_infinity is not None and not self.at_infinity.c.is_zero()

    def weight(self, k: int) -> Vec:
        w = dict(self.atoms).get(k, Vec.zero(self.dim))
        for g in self.families:
            w = w + g.weight(k)
        return w

    def envelope(self, k: int) -> Vec:
        """Closed-form bound of |weight(k)|."""
        out = abs(dict(self.atoms).get(k, Vec.zero(self.dim)))
        for g in self.families:
            out = out + abs(g.c).scale(g.rho ** k)
        return out

    def is_zero(self) -> bool:
        return not self.atoms and not self.families and not self.pieces and not self.has_charge

    def is_nonneg(self) -> bool:
        return (all(w.is_nonneg() for _, w in self.atoms)
                and all(g.c.is_nonneg() for g in self.families)
                and all(p.density.is_nonneg() for p in self.pieces)
                and (self.at_infinity is None or self.at_infinity.c.is_nonneg()))

    def _like(self, **kw) -> "Charge":
        base = dict(space=self.space, dim=self.dim, atoms=self.atoms, families=self.families,
                    pieces=self.pieces, at_infinity=self.at_infinity)
        base.update(kw)
        return Charge(**base)

    def sigma_part(self) -> "Charge":
        return self._like(at_infinity=None)

    def charge_part(self) -> "Charge":
        return Charge(self.space, self.dim, at_infinity=self.at_infinity)

    def atomic_part(self) -> "Charge":
        return self._like(pieces=(), at_infinity=None)

    def diffuse_part(self) -> "Charge":
        return Charge(self.space, self.dim, pieces=self.pieces)

    # -- arithmetic
    def _compatible(self, other: "Charge") -> None:
        if self.space != other.space:
            raise UnsupportedCombination("charges live on different spaces")
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch")

    def __add__(self, other: "Charge") -> "Charge":
        self._compatible(other)
        a, b = self.at_infinity, other.at_infinity
        if a is not None and b is not None:
            if a.filter != b.filter:
                raise UnsupportedCombination("charges at infinity along different filters")
            inf = AtInfinity(a.c + b.c, a.filter)
        else:
            inf = a if a is not None else b
        return Charge(self.space, self.dim, self.atoms + other.atoms,
                      self.families + other.families, self.pieces + other.pieces, inf)

    def scale(self, k) -> "Charge":
        k = Fraction(k)
        return Charge(
            self.space, self.dim,
            tuple((i, w.scale(k)) for i, w in self.atoms),
            tuple(GeometricWeights(g.c.scale(k), g.rho, g.support) for g in self.families),
            tuple(Piece(p.a, p.b, p.density.scale(k)) for p in self.pieces),
            None if self.at_infinity is None else AtInfinity(self.at_infinity.c.scale(k), self.at_infinity.filter),
        )

    def __neg__(self) -> "Charge":
        return self.scale(-1)

    def __sub__(self, other: "Charge") -> "Charge":
        return self + (-other)

    def restrict(self, region, depth: int = 64) -> "Charge":
        """A -> m(A ∩ region)."""
        r = as_region(region)
        atoms = tuple((k, w) for k, w in self.atoms if r.atoms.contains(k))
        fams = tuple(GeometricWeights(g.c, g.rho, r.atoms if g.support == NATURALS
                                      else Intersection(g.support, r.atoms))
                     for g in self.families if not disjoint(g.support, r.atoms))
        pieces = []
        for p in self.pieces:
            for a, b in (r.segment & Segment(((p.a, p.b),))).intervals:
                pieces.append(Piece(a, b, p.density))
        inf = self.at_infinity
        if inf is not None:
            status = ideal_status(inf.filter, r.atoms, depth)
            if status == "ideal":
                inf = None
            elif status == "neither":
                raise NotMeasurable("restriction set is not in the measured subalgebra")
        return Charge(self.space, self.dim, atoms, fams, tuple(pieces), inf)

    def support_descriptor(self) -> SetDescriptor:
        """Atoms carrying weight (an over-approximation when families exist)."""
        d: SetDescriptor = Finite(tuple(k for k, _ in self.atoms))
        for g in self.families:
            d = Union(d, g.support)
        return d

    def support_segment(self) -> Segment:
        return Segment(tuple((p.a, p.b) for p in self.pieces))

    def exact_range(self, atoms: SetDescriptor, depth: int) -> int:
        """Index range summed exactly when evaluating on ``atoms``."""
        if self.space.finite:
            return self.space.n
        T = max(depth, self.explicit_max)
        if self.families:
            fb = finite_bound(atoms)
            if fb is not None and fb <= EXACT_RANGE_CAP:
                T = max(fb, self.explicit_max)
        return T

    def __str__(self) -> str:
        from .sexpr import dump_charge
        return dump_charge(self)


def _atomic_sum(m: Charge, atoms: SetDescriptor, depth: int, transform: Callable[[Vec], Vec]):
    """(exact truncated sum, tail lower, tail upper) of transform(weight) over atoms."""
    zero = Vec.zero(m.dim)
    if not m.families:
        s = zero
        for k, w in m.atoms:
            if atoms.contains(k):
                s = s + transform(w)
        return s, zero, zero
    T = m.exact_range(atoms, depth)
    s = zero
    for k in range(1, T + 1):
        if atoms.contains(k):
            s = s + transform(m.weight(k))
    fb = finite_bound(atoms)
    if fb is not None and fb <= T:
        return s, zero, zero
    lo, hi = zero, zero
    for g in m.families:
        pos, neg = g.tail_pos(T), g.tail_neg(T)
        if transform is _identity:
            lo, hi = lo - neg, hi + pos
        elif transform is _pos:
            hi = hi + pos
        elif transform is _neg:
            hi = hi + neg
        else:
            hi = hi + pos + neg
    return s, lo, hi


def _identity(v: Vec) -> Vec:
    return v


def _pos(v: Vec) -> Vec:
    return v.pos()


def _neg(v: Vec) -> Vec:
    return v.neg()


def _charge_term(m: Charge, atoms: SetDescriptor, depth: int) -> Optional[Vec]:
    inf = m.at_infinity
    if inf is None:
        return None
    status = ideal_status(inf.filter, atoms, depth)
    if status == "filter":
        return inf.c
    if status == "ideal":
        return Vec.zero(m.dim)
    raise NotMeasurable(f"{atoms} is neither in the filter nor in its dual ideal")


def evaluate(m: Charge, A, depth: int) -> ValueInterval:
    """m(A) as an interval; exact whenever no geometric tail is cut off."""
    r = as_region(A)
    charge = _charge_term(m, r.atoms, depth)
    s, lo, hi = _atomic_sum(m, r.atoms, depth, _identity)
    for p in m.pieces:
        s = s + p.density.scale(r.segment.overlap(p.a, p.b))
    if charge is not None:
        s = s + charge
    return ValueInterval(s + lo, s + hi, s)


def variation(m: Charge, H, depth: int, part: str = "total") -> ValueInterval:
    """v(m)(H), v+(m)(H) or v-(m)(H) from the structural formula."""
    if part == "total":
        return variation(m, H, depth, "plus") + variation(m, H, depth, "minus")
    if part not in ("plus", "minus"):
        raise ValueError("part is 'total', 'plus' or 'minus'")
    tr = _pos if part == "plus" else _neg
    r = as_region(H)
    charge = _charge_term(m, r.atoms, depth)
    s, lo, hi = _atomic_sum(m, r.atoms, depth, tr)
    for p in m.pieces:
        s = s + tr(p.density).scale(r.segment.overlap(p.a, p.b))
    if charge is not None:
        s = s + tr(charge)
    return ValueInterval(s + lo, s + hi, s)


# ---------------------------------------------------------------------------
# brute-force oracles (finite atom spaces)


def _finite_rows(m: Charge) -> list:
    if not m.space.finite:
        raise ValueError("brute force needs a finite atom space")
    if m.space.n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force is capped at {BRUTE_FORCE_CAP} atoms")
    if m.pieces:
        raise ValueError("brute force covers the atomic part only")
    return [list(m.weight(k)) for k in range(1, m.space.n + 1)]


def _mask(space: AtomicSpace, H: SetDescriptor) -> int:
    return sum(1 << (k - 1) for k in range(1, space.n + 1) if H.contains(k))


def brute_variation(m: Charge, H: SetDescriptor) -> tuple:
    """(v+, v-) as sup/inf of m(A ∩ H) over all subsets A (definitional)."""
    hi, lo = _kernels.sup_inf_over_subsets(_finite_rows(m), _mask(m.space, H))
    return Vec(hi), -Vec(lo)


def brute_abs_continuity_table(m: Charge, nu: Charge, levels) -> list:
    """[p_n for n in levels], p_n = sup{|m(A)| : nu(A) <= 1/n}."""
    rows = _finite_rows(m)
    nus = [nu.weight(k)[0] for k in range(1, m.space.n + 1)]
    return [Vec(row) for row in _kernels.sup_abs_small_nu(rows, nus, list(levels))]


def brute_subset_values(m: Charge) -> list:
    """m(A) for all 2^n subsets A, indexed by bitmask."""
    return [Vec(row) for row in _kernels.subset_sums(_finite_rows(m))]


# ---------------------------------------------------------------------------
# certificates and checkers


def tail_regulator(m: Charge) -> Regulator:
    """n -> bound of sum_{k >= n} |weight(k)| (atoms only)."""
    parts = []
    E = Vec.zero(m.dim)
    for _, w in m.atoms:
        E = E + abs(w)
    if not E.is_zero():
        parts.append(Geometric(E.scale(2 ** m.explicit_max), Fraction(1, 2)))
    for g in m.families:
        parts.append(Geometric(abs(g.c).scale(1 / (1 - g.rho)), g.rho))
    if not parts:
        return zero_regulator(m.dim)
    out = parts[0]
    for p in parts[1:]:
        out = Sum(out, p)
    return out


def diffuse_mass(m: Charge) -> Vec:
    out = Vec.zero(m.dim)
    for p in m.pieces:
        out = out + abs(p.density).scale(p.b - p.a)
    return out


def s_boundedness_certificate(m: Charge) -> Regulator:
    """A regulator (p_n) for s-boundedness of m.

    Atoms: a disjoint family eventually avoids atoms 1..n-1, leaving at most
    the atomic tail from n.  Diffuse part: at most 2^n members of a disjoint
    family carry diffuse variation above D*2^-n.  A charge at infinity needs
    no term: in a disjoint measured family at most one member lies in the
    filter, and k(n) is chosen past it (see :func:`verify_s_bounded`).
    """
    tail = tail_regulator(m)
    D = diffuse_mass(m)
    if D.is_zero():
        return tail
    diffuse = Geometric(D, Fraction(1, 2))
    return diffuse if tail.is_zero() else Sum(tail, diffuse)


@dataclass(frozen=True)
class DisjointFamily:
    """Pairwise disjoint sets j -> member(j); ``tail(J)`` describes the union
    of members with j >= J."""

    member: Callable[[int], object]
    tail: Callable[[int], object]
    finite_members: bool = True
    name: str = field(default="", compare=False)
    block_filter: object = field(default=None, compare=False)

    def region(self, j: int) -> Region:
        return as_region(self.member(j))

    def members_in_ideal(self, f) -> bool:
        """Whether every member lies in the dual ideal of the filter f."""
        return self.finite_members or self.block_filter == f


def singleton_family() -> DisjointFamily:
    return DisjointFamily(lambda j: Finite((j,)), tail_from, True, "singletons")


def block_family(f: PartitionFilter) -> DisjointFamily:
    from .descriptors import BlockUnion
    return DisjointFamily(f.block_descriptor, lambda J: BlockUnion(f, tail_from(J)),
                          False, f"blocks{f}", f)


def verify_s_bounded(m: Charge, H: DisjointFamily, p: Regulator, depth: int) -> Verdict:
    """For n <= depth find k(n) with |m(H_k)| <= p_n for k(n) <= k <= depth."""
    vals = [evaluate(m, H.region(k), depth).abs_upper() for k in range(1, depth + 1)]
    thresholds = {}
    for n in range(1, depth + 1):
        pn = p.eval(n)
        k = depth
        while k >= 1 and vals[k - 1] <= pn:
            k -= 1
        thresholds[n] = k + 1
        if k == depth:
            return Verdict.fails({"n": n, "k": depth}, depth)
    return Verdict.holds(thresholds, depth)


def _check_nu(nu: Charge, m: Charge) -> None:
    if nu.dim != 1:
        raise ValueError("nu must be scalar")
    if nu.space != m.space:
        raise ValueError("space mismatch")


def _zero_density_segment(nu: Charge) -> Segment:
    return ~Segment(tuple((p.a, p.b) for p in nu.pieces if not p.density.is_zero()))


def _scan_range(m: Charge, nu: Charge, depth: int) -> int:
    if m.space.finite:
        return m.space.n
    return max(depth, m.explicit_max, nu.explicit_max)


def _nu_positive_beyond(nu: Charge, m: Charge) -> bool:
    """Does nu put positive mass on every atom of m's families' supports?"""
    return all(any(g.c[0] > 0 and (g.support == NATURALS or g.support == mg.support)
                   for g in nu.families) for mg in m.families)


def check_absolutely_continuous(m: Charge, nu: Charge, depth: int) -> Verdict:
    """m << nu: the sets of small nu-measure carry uniformly small |m|."""
    _check_nu(nu, m)
    if not nu.is_nonneg():
        raise ValueError("nu must be nonnegative")
    if (m.space.finite and m.space.n <= BRUTE_FORCE_CAP and not m.pieces and not nu.pieces):
        return _abs_cont_brute(m, nu, depth)
    for k in range(1, _scan_range(m, nu, depth) + 1):
        if nu.weight(k)[0] == 0 and not m.weight(k).is_zero():
            return Verdict.fails({"atom": k}, depth)
    null = _zero_density_segment(nu)
    for p in m.pieces:
        if null.overlap(p.a, p.b) > 0:
            return Verdict.fails({"piece": [str(p.a), str(p.b)]}, depth)
    if m.has_charge:
        ni = nu.at_infinity
        if ni is None or ni.filter != m.at_infinity.filter or ni.c[0] <= 0:
            return Verdict.fails({"charge": "nu-small tail sets carry the charge"}, depth)
    if m.families and not _nu_positive_beyond(nu, m):
        return Verdict.unknown(depth)
    return Verdict.holds({"null_atoms_carry_zero": True}, depth)


def _abs_cont_brute(m: Charge, nu: Charge, depth: int) -> Verdict:
    positive = [nu.weight(k)[0] for k in range(1, m.space.n + 1) if nu.weight(k)[0] > 0]
    N = (math.floor(1 / min(positive)) + 1) if positive else 1
    levels = list(range(1, max(depth, N) + 1))
    table = brute_abs_continuity_table(m, nu, levels)
    if table[N - 1].is_zero():
        from .sexpr import dump_vec
        return Verdict.holds({"p": [dump_vec(v) for v in table[:depth]], "zero_from": N}, depth)
    for k in range(1, m.space.n + 1):
        if nu.weight(k)[0] == 0 and not m.weight(k).is_zero():
            from .sexpr import dump_vec
            return Verdict.fails({"atom": k, "p_limit": dump_vec(table[N - 1])}, depth)
    raise AssertionError("brute-force table and atomwise test disagree")


def check_singular(m: Charge, nu: Charge, depth: int) -> Verdict:
    """m ⊥ nu with the convention that nu vanishes on m's support."""
    _check_nu(nu, m)
    for k in range(1, _scan_range(m, nu, depth) + 1):
        if nu.weight(k)[0] != 0 and not m.weight(k).is_zero():
            return Verdict.fails({"atom": k}, depth)
    nu_live = Segment(tuple((p.a, p.b) for p in nu.pieces if not p.density.is_zero()))
    for p in m.pieces:
        if nu_live.overlap(p.a, p.b) > 0:
            return Verdict.fails({"piece": [str(p.a), str(p.b)]}, depth)
    if m.has_charge and nu.has_charge:
        return Verdict.fails({"charge": "both charges live on the filter"}, depth)
    if any(not disjoint(mg.support, ng.support) for mg in m.families for ng in nu.families):
        return Verdict.unknown(depth)
    support = m.support_descriptor()
    witness = {"F": str(support), "segment": [[str(a), str(b)] for a, b in m.support_segment().intervals]}
    if m.has_charge:
        if m.at_infinity.filter is None:
            return Verdict.unknown(depth)
        q = tail_regulator(m)
        nu_bound = tail_regulator(nu)
        for k in range(1, depth + 1):
            A_k = Region(Union(Intersection(support, Finite(tuple(range(1, k + 1)))), tail_from(k)),
                         m.support_segment())
            if not evaluate(nu, A_k, depth).upper <= nu_bound.eval(k):
                return Verdict.unknown(depth)
        from .sexpr import dump_regulator
        witness.update({"A_k": "(F ∩ [1..k]) ∪ [k..) ∪ segment", "q": dump_regulator(q),
                        "nu_bound": dump_regulator(nu_bound)})
    return Verdict.holds(witness, depth)


def _first_atom(m: Charge, depth: int) -> Optional[int]:
    for k in range(1, max(depth, m.explicit_max) + 1):
        if not m.weight(k).is_zero():
            return k
    return None


def check_continuous(m: Charge, depth: int) -> Verdict:
    """Continuity of v(m): dyadic level-n partitions with p_n = max|density|*2^-n."""
    k = _first_atom(m, depth) if (m.atoms or m.families) else None
    if k is not None:
        return Verdict.fails({"atom": k, "weight": [str(c) for c in m.weight(k)]}, depth)
    if m.has_charge:
        return Verdict.fails({"charge": "exactly one piece of every measured partition lies in the filter"}, depth)
    if m.families:
        return Verdict.unknown(depth)
    dmax = Vec.zero(m.dim)
    for p in m.pieces:
        dmax = dmax.sup(abs(p.density))
    p_reg = Geometric(dmax, Fraction(1, 2))
    L = max((max(p.a.denominator, p.b.denominator).bit_length() - 1 for p in m.pieces), default=0)
    for n in range(1, depth + 1):
        if continuity_level_max(m, n, L) != p_reg.eval(n) and n >= L:
            raise AssertionError("piece masses disagree with the density bound")
        if not continuity_level_max(m, n, L) <= p_reg.eval(n):
            raise AssertionError("continuity certificate failed")
    from .sexpr import dump_regulator
    return Verdict.holds({"p": dump_regulator(p_reg), "partition": "dyadic level n"}, depth)


def continuity_level_max(m: Charge, n: int, L: Optional[int] = None) -> Vec:
    """max over level-n dyadic intervals J of v(m)(J), exactly."""
    if L is None:
        L = max((max(p.a.denominator, p.b.denominator).bit_length() - 1 for p in m.pieces), default=0)
    out = Vec.zero(m.dim)
    if n >= L:
        for p in m.pieces:
            out = out.sup(abs(p.density).scale(Fraction(1, 1 << n)))
        return out
    for i in range(1 << n):
        a, b = Fraction(i, 1 << n), Fraction(i + 1, 1 << n)
        mass = Vec.zero(m.dim)
        for p in m.pieces:
            lo, hi = max(a, p.a), min(b, p.b)
            if lo < hi:
                mass = mass + abs(p.density).scale(hi - lo)
        out = out.sup(mass)
    return out


def check_purely_finitely_additive(m: Charge, depth: int) -> Verdict:
    """No nonzero countably additive minorant: no atom mass and no diffuse mass."""
    k = _first_atom(m, depth) if (m.atoms or m.families) else None
    if k is not None:
        return Verdict.fails({"singleton": k, "weight": [str(c) for c in m.weight(k)]}, depth)
    if m.pieces:
        p = m.pieces[0]
        return Verdict.fails({"piece": [str(p.a), str(p.b)]}, depth)
    if m.families:
        return Verdict.unknown(depth)
    return Verdict.holds({"charge": m.has_charge}, depth)


class SelectionError(ValueError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"no admissible index for subsequence position {position}")


def extract_sigma_subsequence(ms, H: DisjointFamily, q: Regulator, depth: int,
                              search_limit: Optional[int] = None) -> list:
    """Greedy diagonal choice n_1 < n_2 < ... with v(m)(H_{n_l}) <= q(l) for all m."""
    ms = list(ms)
    limit = search_limit or 64 * depth
    chosen, n = [], 0
    for pos in range(1, depth + 1):
        qv = q.eval(pos)
        n += 1
        while n <= limit and not all(variation(m, H.region(n), depth).upper <= qv for m in ms):
            n += 1
        if n > limit:
            raise SelectionError(pos)
        chosen.append(n)
    return chosen
