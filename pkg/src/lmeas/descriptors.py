"""Symbolic subsets of N = {1, 2, ...}, dyadic segments of [0, 1), and regions.

A :class:`SetDescriptor` is a small boolean-expression tree with decidable
pointwise membership.  A :class:`Region` pairs an atom descriptor with a
finite union of half-open intervals of [0, 1) (the diffuse segment), and is
the argument type of measure evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Tuple


class SetDescriptor:
    opaque = False

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def members(self, upto: int) -> list:
        return [n for n in range(1, upto + 1) if self.contains(n)]

    def is_opaque(self) -> bool:
        return any(node.opaque for node in self.walk())

    def children(self) -> tuple:
        return ()

    def walk(self):
        yield self
        for c in self.children():
            yield from c.walk()

    def __or__(self, other: "SetDescriptor") -> "SetDescriptor":
        return Union(self, other)

    def __and__(self, other: "SetDescriptor") -> "SetDescriptor":
        return Intersection(self, other)

    def __invert__(self) -> "SetDescriptor":
        return Complement(self)

    def __sub__(self, other: "SetDescriptor") -> "SetDescriptor":
        return Intersection(self, Complement(other))

    def __str__(self) -> str:
        from .sexpr import dump_descriptor
        return dump_descriptor(self)


@dataclass(frozen=True, eq=True)
class Finite(SetDescriptor):
    elems: Tuple[int, ...] = ()

    def __post_init__(self):
        elems = tuple(sorted(set(int(e) for e in self.elems)))
        if elems and elems[0] < 1:
            raise ValueError("natural numbers start at 1")
        object.__setattr__(self, "elems", elems)
        object.__setattr__(self, "_set", frozenset(elems))

    def contains(self, n: int) -> bool:
        return n in self._set

    def members(self, upto: int) -> list:
        return [e for e in self.elems if e <= upto]


@dataclass(frozen=True)
class ArithProg(SetDescriptor):
    """{n >= 1 : n >= a, n = a (mod d)}; ArithProg(0, 2) is the evens."""

    a: int
    d: int

    def __post_init__(self):
        if self.d < 1 or self.a < 0:
            raise ValueError("ArithProg needs a >= 0 and d >= 1")

    def contains(self, n: int) -> bool:
        return n >= 1 and n >= self.a and (n - self.a) % self.d == 0

    def members(self, upto: int) -> list:
        start = self.a
        if start < 1:
            start += -(-(1 - start) // self.d) * self.d
        return list(range(start, upto + 1, self.d))


def valuation2(n: int) -> int:
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class DyadicValuation(SetDescriptor):
    """{n : 2^v divides n exactly}."""

    v: int

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("valuation must be nonnegative")

    def contains(self, n: int) -> bool:
        return n >= 1 and valuation2(n) == self.v

    def members(self, upto: int) -> list:
        step = 1 << (self.v + 1)
        return list(range(1 << self.v, upto + 1, step))


@dataclass(frozen=True)
class BlockUnion(SetDescriptor):
    """Union of the blocks A_k of ``filter`` with k in ``indices``."""

    filter: object
    indices: SetDescriptor

    def contains(self, n: int) -> bool:
        return n >= 1 and self.indices.contains(self.filter.block_of(n))

    def children(self) -> tuple:
        return (self.indices,)


@dataclass(frozen=True)
class Complement(SetDescriptor):
    inner: SetDescriptor

    def contains(self, n: int) -> bool:
        return n >= 1 and not self.inner.contains(n)

    def children(self) -> tuple:
        return (self.inner,)


@dataclass(frozen=True)
class Union(SetDescriptor):
    left: SetDescriptor
    right: SetDescriptor

    def contains(self, n: int) -> bool:
        return self.left.contains(n) or self.right.contains(n)

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Intersection(SetDescriptor):
    left: SetDescriptor
    right: SetDescriptor

    def contains(self, n: int) -> bool:
        return self.left.contains(n) and self.right.contains(n)

    def children(self) -> tuple:
        return (self.left, self.right)


# Predicates serialize by name; the registry lets scenario files refer to them.
PREDICATES: dict = {}


@dataclass(frozen=True)
class Predicate(SetDescriptor):
    fn: Callable[[int], bool] = field(compare=False)
    name: str = "anonymous"

    opaque = True

    def contains(self, n: int) -> bool:
        return n >= 1 and bool(self.fn(n))


def register_predicate(name: str, fn: Callable[[int], bool]) -> Predicate:
    p = Predicate(fn, name)
    PREDICATES[name] = p
    return p


register_predicate("squares", lambda n: int(n ** 0.5 + 0.5) ** 2 == n)
register_predicate("primes", lambda n: n > 1 and all(n % p for p in range(2, int(n ** 0.5) + 1)))

EMPTY = Finite(())
NATURALS = Complement(EMPTY)
EVENS = ArithProg(0, 2)
ODDS = ArithProg(1, 2)


def interval(lo: int, hi: int) -> Finite:
    return Finite(tuple(range(lo, hi + 1)))


def tail_from(k: int) -> SetDescriptor:
    """{n : n >= k}."""
    return ArithProg(max(k, 1), 1)


def union_all(ds: Iterable[SetDescriptor]) -> SetDescriptor:
    out = None
    for d in ds:
        out = d if out is None else Union(out, d)
    return EMPTY if out is None else out


# ---------------------------------------------------------------------------
# Segments of [0, 1)


def _norm_intervals(ivs) -> tuple:
    ivs = sorted((Fraction(a), Fraction(b)) for a, b in ivs if Fraction(a) < Fraction(b))
    out = []
    for a, b in ivs:
        if a < 0 or b > 1:
            raise ValueError("segments live in [0, 1)")
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return tuple(out)


@dataclass(frozen=True)
class Segment:
    """Finite disjoint union of half-open intervals [a, b) in [0, 1)."""

    intervals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _norm_intervals(self.intervals))

    def __or__(self, other: "Segment") -> "Segment":
        return Segment(self.intervals + other.intervals)

    def __invert__(self) -> "Segment":
        out, cur = [], Fraction(0)
        for a, b in self.intervals:
            if a > cur:
                out.append((cur, a))
            cur = b
        if cur < 1:
            out.append((cur, Fraction(1)))
        return Segment(tuple(out))

    def __and__(self, other: "Segment") -> "Segment":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return Segment(tuple(out))

    def overlap(self, a, b) -> Fraction:
        """Length of this segment inside [a, b)."""
        total = Fraction(0)
        for c, d in self.intervals:
            lo, hi = max(a, c), min(b, d)
            if lo < hi:
                total += hi - lo
        return total

    @property
    def length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def is_empty(self) -> bool:
        return not self.intervals


NO_SEGMENT = Segment(())
FULL_SEGMENT = Segment(((0, 1),))


def dyadic(level: int, index: int) -> Tuple[Fraction, Fraction]:
    if not 0 <= index < (1 << level):
        raise ValueError("dyadic index out of range")
    return Fraction(index, 1 << level), Fraction(index + 1, 1 << level)


@dataclass(frozen=True)
class Region:
    """A measurable set of the hybrid space: atoms plus a diffuse segment."""

    atoms: SetDescriptor = EMPTY
    segment: Segment = NO_SEGMENT

    def __or__(self, other) -> "Region":
        other = as_region(other)
        return Region(Union(self.atoms, other.atoms), self.segment | other.segment)

    def __and__(self, other) -> "Region":
        other = as_region(other)
        return Region(Intersection(self.atoms, other.atoms), self.segment & other.segment)

    def __invert__(self) -> "Region":
        return Region(Complement(self.atoms), ~self.segment)

    def __sub__(self, other) -> "Region":
        return self & ~as_region(other)


WHOLE = Region(NATURALS, FULL_SEGMENT)


def as_region(x) -> Region:
    if isinstance(x, Region):
        return x
    if isinstance(x, SetDescriptor):
        return Region(x, NO_SEGMENT)
    if isinstance(x, Segment):
        return Region(EMPTY, x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a region")
