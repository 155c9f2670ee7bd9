"""Countably generated filters on N, stationarity and (o_F)-convergence.

A filter is given by a partition (A_k) of N into nonempty blocks; its dual
ideal is the family of sets meeting only finitely many blocks.

Ideal membership is decided exactly for every non-opaque descriptor.  The
descriptor grammar (finite sets, arithmetic progressions, dyadic valuation
classes, unions of blocks over such index sets) is eventually periodic, and
for every shipped filter family the pattern "does H meet A_k" is periodic in
k beyond a computable threshold.  Checking one period past the threshold is
therefore a complete test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .descriptors import (
    ArithProg, BlockUnion, Complement, DyadicValuation, EMPTY, Finite,
    Intersection, Predicate, SetDescriptor, Union, valuation2,
)
from .lattice import Sequence, Vec, Verdict, as_sequence

SCAN_CAP = 1 << 14
HEAD_CAP = 1 << 12


class PartitionFilter:
    """Base class for the generating partition of a countably generated filter."""

    def block_of(self, n: int) -> int:
        raise NotImplementedError

    def first_member(self, k: int) -> int:
        raise NotImplementedError

    def block_members(self, k: int, upto: int) -> list:
        """A_k intersected with [1..upto], increasing."""
        raise NotImplementedError

    def block_descriptor(self, k: int) -> SetDescriptor:
        raise NotImplementedError

    def witness_bound(self, K: int) -> int:
        """Every block index k <= K has a member n <= witness_bound(K)."""
        return max(self.first_member(k) for k in range(1, K + 1))

    def representatives(self, k: int, period: int) -> list:
        """Members of A_k covering every residue class mod ``period`` that A_k
        reaches, once k is past the periodicity threshold."""
        raise NotImplementedError

    def threshold(self, T: int, P: int) -> int:
        """K0 such that blocks k > K0 lie beyond T and are P-regular."""
        raise NotImplementedError

    def __str__(self) -> str:
        from .sexpr import dump_filter
        return dump_filter(self)


@dataclass(frozen=True)
class Singletons(PartitionFilter):
    """A_k = {k}: the cofinite filter."""

    def block_of(self, n: int) -> int:
        return n

    def first_member(self, k: int) -> int:
        return k

    def block_members(self, k: int, upto: int) -> list:
        return [k] if k <= upto else []

    def block_descriptor(self, k: int) -> SetDescriptor:
        return Finite((k,))

    def witness_bound(self, K: int) -> int:
        return K

    def representatives(self, k: int, period: int) -> list:
        return [k]

    def threshold(self, T: int, P: int) -> int:
        return T


@dataclass(frozen=True)
class Ranges(PartitionFilter):
    """Consecutive blocks of length scale*k + offset."""

    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.scale < 0 or self.scale + self.offset < 1 or self.offset < 1 - self.scale:
            raise ValueError("block lengths must be >= 1")

    def length(self, k: int) -> int:
        return self.scale * k + self.offset

    def start(self, k: int) -> int:
        return 1 + self.scale * (k - 1) * k // 2 + self.offset * (k - 1)

    def block_of(self, n: int) -> int:
        if n < 1:
            raise ValueError("natural numbers start at 1")
        lo, hi = 1, 2
        while self.start(hi) <= n:
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.start(mid) <= n:
                lo = mid
            else:
                hi = mid
        return lo

    def first_member(self, k: int) -> int:
        return self.start(k)

    def block_members(self, k: int, upto: int) -> list:
        s = self.start(k)
        return list(range(s, min(s + self.length(k), upto + 1)))

    def block_descriptor(self, k: int) -> SetDescriptor:
        s = self.start(k)
        return Finite(tuple(range(s, s + self.length(k))))

    def witness_bound(self, K: int) -> int:
        return self.start(K)

    def representatives(self, k: int, period: int) -> list:
        s = self.start(k)
        return list(range(s, s + min(self.length(k), period)))

    def threshold(self, T: int, P: int) -> int:
        k = 1
        while self.start(k) <= T or (self.scale > 0 and self.length(k) < P):
            k += 1
        return k


@dataclass(frozen=True)
class DyadicValuationBlocks(PartitionFilter):
    """A_k = {n : 2^(k-1) divides n exactly}."""

    def block_of(self, n: int) -> int:
        return valuation2(n) + 1

    def first_member(self, k: int) -> int:
        return 1 << (k - 1)

    def block_members(self, k: int, upto: int) -> list:
        return DyadicValuation(k - 1).members(upto)

    def block_descriptor(self, k: int) -> SetDescriptor:
        return DyadicValuation(k - 1)

    def witness_bound(self, K: int) -> int:
        return 1 << (K - 1)

    def representatives(self, k: int, period: int) -> list:
        base = 1 << (k - 1)
        return [base * o for o in range(1, 2 * period + 1, 2)]

    def threshold(self, T: int, P: int) -> int:
        e = valuation2(P)
        k = e + 1
        while (1 << (k - 1)) <= T:
            k += 1
        return k


@dataclass(frozen=True)
class TableWithTailRule(PartitionFilter):
    """block_of(n) = table[n-1] for n <= len(table); singletons afterwards."""

    table: tuple = ()

    def __post_init__(self):
        table = tuple(int(t) for t in self.table)
        object.__setattr__(self, "table", table)
        if table and set(table) != set(range(1, max(table) + 1)):
            raise ValueError("table must use every block index 1..max")

    @property
    def top(self) -> int:
        return max(self.table) if self.table else 0

    def block_of(self, n: int) -> int:
        if n <= len(self.table):
            return self.table[n - 1]
        return n - len(self.table) + self.top

    def first_member(self, k: int) -> int:
        if k <= self.top:
            return self.table.index(k) + 1
        return k - self.top + len(self.table)

    def block_members(self, k: int, upto: int) -> list:
        if k <= self.top:
            return [i + 1 for i, t in enumerate(self.table) if t == k and i + 1 <= upto]
        n = self.first_member(k)
        return [n] if n <= upto else []

    def block_descriptor(self, k: int) -> SetDescriptor:
        return Finite(tuple(self.block_members(k, len(self.table) + k)))

    def representatives(self, k: int, period: int) -> list:
        return [self.first_member(k)]

    def threshold(self, T: int, P: int) -> int:
        return self.top + max(T, len(self.table))


SINGLETONS = Singletons()


@dataclass(frozen=True)
class LeastInBlocks(SetDescriptor):
    """{n in inner : n is the least element of inner within its block}."""

    filter: PartitionFilter
    inner: SetDescriptor

    def contains(self, n: int) -> bool:
        if n < 1 or not self.inner.contains(n):
            return False
        k = self.filter.block_of(n)
        return all(not self.inner.contains(m) for m in self.filter.block_members(k, n - 1))

    def children(self) -> tuple:
        return (self.inner,)


@dataclass(frozen=True)
class Block:
    """A partition of an infinite set into finite pieces (checked to depth)."""

    pieces: object
    of: SetDescriptor

    def check(self, depth: int) -> bool:
        seen = set()
        for k in range(1, depth + 1):
            piece = set(self.pieces(k).members(10 * depth * depth))
            if seen & piece or not all(self.of.contains(n) for n in piece):
                return False
            seen |= piece
        return True


# ---------------------------------------------------------------------------
# exact ideal membership


@dataclass(frozen=True)
class _Profile:
    period: int
    threshold: int
    index_period: int = 1
    index_threshold: int = 0

    def join(self, other: "_Profile") -> "_Profile":
        return _Profile(math.lcm(self.period, other.period),
                        max(self.threshold, other.threshold),
                        math.lcm(self.index_period, other.index_period),
                        max(self.index_threshold, other.index_threshold))


def _profile(H: SetDescriptor, f: PartitionFilter) -> Optional[_Profile]:
    """Periodicity data of H relative to f, or None if H is not covered."""
    if isinstance(H, Finite):
        return _Profile(1, H.elems[-1] if H.elems else 0)
    if isinstance(H, ArithProg):
        return _Profile(H.d, H.a)
    if isinstance(H, DyadicValuation):
        return _Profile(1 << (H.v + 1), 0)
    if isinstance(H, Complement):
        return _profile(H.inner, f)
    if isinstance(H, (Union, Intersection)):
        a, b = _profile(H.left, f), _profile(H.right, f)
        return None if a is None or b is None else a.join(b)
    if isinstance(H, BlockUnion):
        if H.filter == f:
            p = _profile(H.indices, SINGLETONS)
            if p is None:
                return None
            return _Profile(1, 0, math.lcm(p.period, p.index_period),
                            max(p.threshold, p.index_threshold))
        if isinstance(H.filter, Singletons):
            return _profile(H.indices, f)
        p = _profile(H.indices, SINGLETONS)
        if p is None or not _profile_in_ideal(H.indices, SINGLETONS, p):
            return None
        ks = [k for k in range(1, _last_met(H.indices, p) + 1) if H.indices.contains(k)]
        out = _Profile(1, 0)
        for k in ks:
            sub = _profile(H.filter.block_descriptor(k), f)
            if sub is None:
                return None
            out = out.join(sub)
        return out
    return None


def _window(H: SetDescriptor, f: PartitionFilter, p: _Profile):
    K0 = max(f.threshold(p.threshold, p.period), p.index_threshold)
    return K0, math.lcm(p.period, p.index_period)


def _meets(H: SetDescriptor, f: PartitionFilter, k: int, period: int) -> bool:
    return any(H.contains(n) for n in f.representatives(k, period))


def _profile_in_ideal(H: SetDescriptor, f: PartitionFilter, p: _Profile) -> bool:
    K0, per = _window(H, f, p)
    return not any(_meets(H, f, k, p.period) for k in range(K0 + 1, K0 + per + 1))


def _last_met(H: SetDescriptor, p: _Profile) -> int:
    """For H in the Singletons ideal: an upper bound of its elements."""
    K0, _ = _window(H, SINGLETONS, p)
    return K0


def _stationary_witness(H: SetDescriptor, f: PartitionFilter, period: int, depth: int) -> list:
    """``depth`` distinct block indices met by H (H known stationary)."""
    out, k = [], 1
    while len(out) < depth:
        if _meets(H, f, k, period) or any(H.contains(n) for n in f.block_members(k, f.first_member(k) + 4 * period)):
            out.append(k)
        k += 1
    return out


def _scan_bound(f: PartitionFilter, depth: int) -> int:
    return min(max(4 * f.witness_bound(min(depth, 20)), 4 * depth), SCAN_CAP)


def _decide(f: PartitionFilter, H: SetDescriptor, depth: int):
    """True/False for exact decisions, None if undecided.  Second item is a
    period usable for witness search."""
    if isinstance(H, Union):
        a, pa = _decide(f, H.left, depth)
        b, pb = _decide(f, H.right, depth)
        if a is False:
            return False, pa
        if b is False:
            return False, pb
        if a and b:
            return True, 1
        return None, 1
    if isinstance(H, LeastInBlocks) and H.filter == f:
        return _decide(f, H.inner, depth)
    p = _profile(H, f)
    if p is not None:
        return _profile_in_ideal(H, f, p), math.lcm(p.period, p.index_period)
    if isinstance(H, Intersection):
        for side, other in ((H.left, H.right), (H.right, H.left)):
            s, _ = _decide(f, side, depth)
            if s is True:
                return True, 1
        for side, other in ((H.left, H.right), (H.right, H.left)):
            c, _ = _decide(f, Complement(side), depth)
            if c is True:  # side is in the filter: H ~ other modulo the ideal
                return _decide(f, other, depth)
    return None, 1


def in_ideal(f: PartitionFilter, H: SetDescriptor, depth: int) -> Verdict:
    """Does H meet only finitely many blocks of f?"""
    decided, period = _decide(f, H, depth)
    if decided is True:
        return Verdict.holds(depth=depth)
    if decided is False:
        return Verdict.fails({"blocks": _stationary_witness(H, f, period, depth)}, depth)
    bound = _scan_bound(f, depth)
    blocks = []
    seen = set()
    for n in range(1, bound + 1):
        if H.contains(n):
            k = f.block_of(n)
            if k not in seen:
                seen.add(k)
                blocks.append(k)
                if len(blocks) >= depth:
                    return Verdict.fails({"blocks": blocks, "scanned_to": n}, depth)
    return Verdict.unknown(depth)


def in_filter(f: PartitionFilter, H: SetDescriptor, depth: int) -> Verdict:
    return in_ideal(f, Complement(H), depth)


def is_stationary(f: PartitionFilter, H: SetDescriptor, depth: int) -> Verdict:
    v = in_ideal(f, H, depth)
    if v.is_holds:
        return Verdict.fails({"in_ideal": True}, depth)
    if v.is_fails:
        return Verdict.holds(v.witness["blocks"], depth)
    return v


class NotStationaryError(ValueError):
    pass


def select_sparse_stationary(f: PartitionFilter, J: SetDescriptor, depth: int) -> SetDescriptor:
    """One point (the least) of J in each block J meets."""
    if not is_stationary(f, J, depth).is_holds:
        raise NotStationaryError("not stationary at depth")
    return LeastInBlocks(f, J)


class ConstructionError(ValueError):
    pass


def diagonal_witness(f: PartitionFilter, As, I: SetDescriptor, depth: int) -> SetDescriptor:
    """Stationary J inside I with J minus As[n] finite for every n < depth."""
    As = list(As)[:depth]
    for n, A in enumerate(As):
        if not in_filter(f, A, depth).is_holds:
            raise ConstructionError(f"As[{n}] is not certified to lie in the filter")
    J: SetDescriptor = select_sparse_stationary(f, I, depth)
    for A in As:
        J = Intersection(J, A)
    if not is_stationary(f, J, depth).is_holds:
        raise ConstructionError("unknown at depth: could not certify stationarity")
    return J


# ---------------------------------------------------------------------------
# (o_F)-convergence


class _Deviations:
    """k -> |x_k - limit|, memoized, with the declarations validated once."""

    def __init__(self, x: Sequence, limit: Vec, depth: int):
        self.x, self.limit, self.depth = x, limit, depth
        self._memo: dict = {}
        self._validated = False

    def __call__(self, k: int) -> Vec:
        v = self._memo.get(k)
        if v is None:
            v = self._memo[k] = abs(self.x(k) - self.limit)
        return v

    def regular(self, k: int) -> bool:
        exc = self.x.exceptional
        return exc is None or not exc.contains(k)

    def validate(self) -> None:
        if self._validated:
            return
        x = self.x
        if x.pieces is not None:
            for k in range(1, self.depth + 1):
                owners = [v for d, v in x.pieces if d.contains(k)]
                if len(owners) != 1 or owners[0] != x(k):
                    raise ValueError(f"declared pieces inconsistent at k={k}")
        elif x.envelope is not None:
            for k in range(1, self.depth + 1):
                if self.regular(k) and not self(k) <= x.envelope.eval(k):
                    raise ValueError(f"declared envelope violated at k={k}")
        self._validated = True


def exception_set(x: Sequence, limit: Vec, level: Vec, depth: int,
                  _dev: Optional[_Deviations] = None) -> SetDescriptor:
    """{k : |x_k - limit| not <= level}, as exactly as the declarations allow."""
    dev = _dev or _Deviations(x, limit, depth)

    def bad(k: int) -> bool:
        return not dev(k) <= level

    if x.pieces is not None:
        dev.validate()
        out: SetDescriptor = EMPTY
        for d, v in x.pieces:
            if not abs(v - limit) <= level:
                out = d if out is EMPTY else Union(out, d)
        return out
    if x.envelope is not None:
        K = x.envelope.first_index_at_most(level)
        if K is not None:
            dev.validate()
            exc = x.exceptional
            if K <= HEAD_CAP:
                head: SetDescriptor = Finite(tuple(k for k in range(1, K) if dev.regular(k) and bad(k)))
            else:
                head = Intersection(Complement(ArithProg(K, 1)), Predicate(bad, "exceeds-level"))
            if exc is None:
                return head
            return Union(head, Intersection(exc, Predicate(bad, "exceeds-level")))
    return Predicate(bad, "exceeds-level")


def filter_o_convergence(f: PartitionFilter, x, limit: Vec, r, depth: int) -> Verdict:
    """For p <= depth: is {k : |x_k - limit| <= r(p)} in the filter?"""
    x = as_sequence(x)
    if r.dim != limit.dim:
        raise ValueError("dimension mismatch")
    unknown = False
    table = {}
    dev = _Deviations(x, limit, depth)
    for p in range(1, depth + 1):
        E = exception_set(x, limit, r.eval(p), depth, dev)
        v = in_ideal(f, E, depth)
        if v.is_fails:
            return Verdict.fails({"p": p, "exceptions": str(E), "blocks": v.witness["blocks"]}, depth)
        if v.is_unknown:
            unknown = True
        else:
            table[p] = str(E)
    if unknown:
        return Verdict.unknown(depth)
    return Verdict.holds({"exceptions": table}, depth)
