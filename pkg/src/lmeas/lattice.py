"""Exact ordered vectors, regulators ((o)-sequences) and order-convergence checks.

The vector lattice is modelled as Q^d with the componentwise order.  Every
coordinate is a :class:`fractions.Fraction`, so order comparisons and
equalities are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence as Seq


class DimensionError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, str or Fraction")
    return Fraction(x)


class Vec:
    """An element of Q^d.  Immutable."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        coords = tuple(_frac(c) for c in coords)
        if not coords:
            raise DimensionError("a lattice element needs dim >= 1")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("Vec is immutable")

    @classmethod
    def zero(cls, dim: int) -> "Vec":
        return cls((0,) * dim)

    @classmethod
    def const(cls, dim: int, value) -> "Vec":
        return cls((value,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: "Vec") -> None:
        if not isinstance(other, Vec):
            raise TypeError(f"expected Vec, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Vec":
        return Vec(-a for a in self.coords)

    def scale(self, k) -> "Vec":
        k = _frac(k)
        return Vec(k * a for a in self.coords)

    def __mul__(self, k) -> "Vec":
        return self.scale(k)

    __rmul__ = __mul__

    def __abs__(self) -> "Vec":
        return Vec(abs(a) for a in self.coords)

    def sup(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(max(a, b) for a, b in zip(self.coords, other.coords))

    def inf(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(min(a, b) for a, b in zip(self.coords, other.coords))

    __or__ = sup
    __and__ = inf

    def pos(self) -> "Vec":
        return Vec(max(a, 0) for a in self.coords)

    def neg(self) -> "Vec":
        """Negative part, as a nonnegative vector."""
        return Vec(max(-a, 0) for a in self.coords)

    def __le__(self, other: "Vec") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "Vec") -> bool:
        return other <= self

    def __eq__(self, other) -> bool:
        return isinstance(other, Vec) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_nonneg(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def max_coord(self) -> Fraction:
        return max(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return "Vec(" + ", ".join(str(c) for c in self.coords) + ")"


def sup_finite(xs: Seq[Vec]) -> Vec:
    xs = list(xs)
    if not xs:
        raise DimensionError("sup of an empty family is undefined here")
    out = xs[0]
    for x in xs[1:]:
        out = out.sup(x)
    return out


def inf_finite(xs: Seq[Vec]) -> Vec:
    xs = list(xs)
    if not xs:
        raise DimensionError("inf of an empty family is undefined here")
    out = xs[0]
    for x in xs[1:]:
        out = out.inf(x)
    return out


# ---------------------------------------------------------------------------
# Regulators


class Regulator:
    """Closed-form (o)-sequence n -> eval(n), n >= 1.

    Every constructor yields a nonincreasing, nonnegative sequence whose
    infimum is zero; :meth:`index_below` produces the witness index for the
    infimum claim.
    """

    dim: int

    def eval(self, n: int) -> Vec:
        raise NotImplementedError

    def __call__(self, n: int) -> Vec:
        return self.eval(n)

    def tail_sum(self, n: int) -> Vec:
        """sum_{j >= n} eval(j), when that series has a closed form."""
        raise ValueError(f"{type(self).__name__} has no summable closed-form tail")

    def is_zero(self) -> bool:
        return self.eval(1).is_zero()

    def index_below(self, eps) -> int:
        """Some n with eval(n) <= eps in every component (eps > 0)."""
        eps = _frac(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        target = Vec.const(self.dim, eps)
        n = 1
        while not self.eval(n) <= target:
            n *= 2
        return n

    def first_index_at_most(self, target: Vec, start: int = 1) -> Optional[int]:
        """Least n >= start with eval(n) <= target, or None if none exists."""
        if target.dim != self.dim:
            raise DimensionError("dimension mismatch")
        if any(t < 0 for t in target):
            return None
        head = self.eval(1)
        for t, h in zip(target, head):
            if t == 0 and h != 0:
                return None
        positives = [t for t in target if t > 0]
        hi = max(start, self.index_below(min(positives))) if positives else start
        if not self.eval(hi) <= target:
            hi = start
            while not self.eval(hi) <= target:
                hi *= 2
        lo = start
        if self.eval(lo) <= target:
            return lo
        # invariant: eval(lo) > target, eval(hi) <= target
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.eval(mid) <= target:
                hi = mid
            else:
                lo = mid
        return hi


@dataclass(frozen=True)
class Harmonic(Regulator):
    c: Vec

    def __post_init__(self):
        if not self.c.is_nonneg():
            raise ValueError("Harmonic needs a nonnegative coefficient")

    @property
    def dim(self) -> int:
        return self.c.dim

    def eval(self, n: int) -> Vec:
        return self.c.scale(Fraction(1, n))

    def index_below(self, eps) -> int:
        eps = _frac(eps)
        m = self.c.max_coord()
        return max(1, -(-m.numerator * eps.denominator // (m.denominator * eps.numerator)))


@dataclass(frozen=True)
class Geometric(Regulator):
    c: Vec
    rho: Fraction

    def __post_init__(self):
        if not self.c.is_nonneg():
            raise ValueError("Geometric needs a nonnegative coefficient")
        rho = _frac(self.rho)
        object.__setattr__(self, "rho", rho)
        if not 0 < rho < 1:
            raise ValueError("Geometric ratio must lie in (0, 1)")

    @property
    def dim(self) -> int:
        return self.c.dim

    def eval(self, n: int) -> Vec:
        return self.c.scale(self.rho ** n)

    def tail_sum(self, n: int) -> Vec:
        return self.c.scale(self.rho ** n / (1 - self.rho))


@dataclass(frozen=True)
class Scaled(Regulator):
    base: Regulator
    k: Fraction

    def __post_init__(self):
        k = _frac(self.k)
        object.__setattr__(self, "k", k)
        if k < 0:
            raise ValueError("scale factor must be nonnegative")

    @property
    def dim(self) -> int:
        return self.base.dim

    def eval(self, n: int) -> Vec:
        return self.base.eval(n).scale(self.k)

    def tail_sum(self, n: int) -> Vec:
        return self.base.tail_sum(n).scale(self.k)


@dataclass(frozen=True)
class Sum(Regulator):
    r1: Regulator
    r2: Regulator

    def __post_init__(self):
        if self.r1.dim != self.r2.dim:
            raise DimensionError("dimension mismatch")

    @property
    def dim(self) -> int:
        return self.r1.dim

    def eval(self, n: int) -> Vec:
        return self.r1.eval(n) + self.r2.eval(n)

    def tail_sum(self, n: int) -> Vec:
        return self.r1.tail_sum(n) + self.r2.tail_sum(n)


@dataclass(frozen=True)
class Shifted(Regulator):
    base: Regulator
    offset: int

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")

    @property
    def dim(self) -> int:
        return self.base.dim

    def eval(self, n: int) -> Vec:
        return self.base.eval(n + self.offset)

    def tail_sum(self, n: int) -> Vec:
        return self.base.tail_sum(n + self.offset)


@dataclass(frozen=True)
class Tail(Regulator):
    """n -> sum_{j >= n} base(j).  Only defined for summable bases."""

    base: Regulator

    def __post_init__(self):
        self.base.tail_sum(1)

    @property
    def dim(self) -> int:
        return self.base.dim

    def eval(self, n: int) -> Vec:
        return self.base.tail_sum(n)


@dataclass(frozen=True)
class Capped(Regulator):
    """n -> base(n) ∧ cap."""

    base: Regulator
    cap: Vec

    def __post_init__(self):
        if self.cap.dim != self.base.dim:
            raise DimensionError("dimension mismatch")
        if not self.cap.is_nonneg():
            raise ValueError("cap must be nonnegative")

    @property
    def dim(self) -> int:
        return self.base.dim

    def eval(self, n: int) -> Vec:
        return self.base.eval(n).inf(self.cap)


def zero_regulator(dim: int) -> Regulator:
    return Harmonic(Vec.zero(dim))


def is_valid_regulator(r: Regulator, upto: int = 1000) -> bool:
    """Spot-check nonincreasing + nonnegative on 1..upto."""
    prev = r.eval(1)
    if not prev.is_nonneg():
        return False
    for n in range(2, upto + 1):
        cur = r.eval(n)
        if not (cur <= prev and cur.is_nonneg()):
            return False
        prev = cur
    return True


# ---------------------------------------------------------------------------
# Verdicts


class Outcome(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Any = None
    depth: int = 0

    @classmethod
    def holds(cls, witness=None, depth=0) -> "Verdict":
        return cls(Outcome.HOLDS, witness, depth)

    @classmethod
    def fails(cls, witness=None, depth=0) -> "Verdict":
        return cls(Outcome.FAILS, witness, depth)

    @classmethod
    def unknown(cls, depth=0) -> "Verdict":
        return cls(Outcome.UNKNOWN, None, depth)

    @property
    def is_holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def is_unknown(self) -> bool:
        return self.outcome is Outcome.UNKNOWN


def conjoin(verdicts: Iterable[Verdict], depth: int) -> Verdict:
    """Holds iff all hold; the first Fails wins; otherwise Unknown."""
    seen_unknown = False
    for v in verdicts:
        if v.is_fails:
            return v
        if v.is_unknown:
            seen_unknown = True
    return Verdict.unknown(depth) if seen_unknown else Verdict.holds(depth=depth)


# ---------------------------------------------------------------------------
# Sequences and (o)-convergence


@dataclass(frozen=True)
class Sequence:
    """A sequence k -> term(k) of lattice elements, k >= 1.

    ``envelope`` (optional) certifies |term(k) - limit| <= envelope(k) for
    every k outside ``exceptional`` (a set descriptor; None means empty).
    ``pieces`` (optional) states that the sequence is constant on each
    descriptor of a partition of N.  Declarations are spot-checked by the
    consumers.
    """

    term: Callable[[int], Vec]
    envelope: Optional[Regulator] = None
    exceptional: Any = None
    pieces: Optional[tuple] = None
    name: str = field(default="", compare=False)

    def __call__(self, k: int) -> Vec:
        return self.term(k)


def as_sequence(x) -> Sequence:
    return x if isinstance(x, Sequence) else Sequence(term=x)


def o_convergence_check(x, limit: Vec, r: Regulator, depth: int) -> Verdict:
    """Check sup_{k>=n} |x_k - limit| <= r(n) for n <= depth.

    Holds needs a declared tail envelope (with no exceptional indices)
    covering k > depth; otherwise the best positive outcome is Unknown.
    """
    x = as_sequence(x)
    if r.dim != limit.dim:
        raise DimensionError("dimension mismatch")
    diffs = [abs(x(k) - limit) for k in range(1, depth + 1)]
    # suffix sups
    suffix = [None] * (depth + 2)
    run = None
    for k in range(depth, 0, -1):
        run = diffs[k - 1] if run is None else run.sup(diffs[k - 1])
        suffix[k] = run
    for n in range(1, depth + 1):
        rn = r.eval(n)
        if not suffix[n] <= rn:
            for k in range(n, depth + 1):
                if not diffs[k - 1] <= rn:
                    return Verdict.fails({"n": n, "k": k}, depth)
    env = x.envelope
    if env is None or x.exceptional is not None:
        return Verdict.unknown(depth)
    for k in range(1, depth + 1):
        if not diffs[k - 1] <= env.eval(k):
            raise ValueError(f"declared tail envelope violated at k={k}")
    if depth >= 1 and env.eval(depth + 1) <= r.eval(depth):
        return Verdict.holds({"tail_from": depth + 1}, depth)
    return Verdict.unknown(depth)


# ---------------------------------------------------------------------------
# D-sequences


@dataclass(frozen=True)
class DSequence:
    dim: int
    rows: Callable[[int], Regulator]
    bound: Vec

    def entry(self, i: int, j: int) -> Vec:
        v = self.rows(i).eval(j)
        if not v <= self.bound:
            raise ValueError(f"D-sequence entry ({i},{j}) exceeds its bound")
        return v


def domination(d: DSequence, phi: Callable[[int], int], depthI: int) -> Vec:
    """sup_{i <= depthI} a_{i, phi(i)}: a lower bound of the full domination."""
    if depthI < 1:
        raise ValueError("depthI must be >= 1")
    return sup_finite([d.entry(i, phi(i)) for i in range(1, depthI + 1)])


def weak_sigma_distributivity_probe(d: DSequence, phis: Seq[Callable[[int], int]],
                                    depthI: int) -> Vec:
    if not phis:
        raise ValueError("need at least one sampled map")
    return inf_finite([domination(d, phi, depthI) for phi in phis])
