"""Regulator arithmetic, the Schur-type theorem verifier and the three
uniform s-boundedness checks.

The s-boundedness checks inspect measures n and sets j up to a horizon of
2 * depth.  Thresholds are searched in 1..depth; a violation strictly past
depth that no admissible threshold can avoid is reported as Fails.  Tails
past the horizon are bounded by the variation of the union of the remaining
sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .descriptors import ArithProg, BlockUnion, Complement, Finite, NATURALS, tail_from
from .filters import PartitionFilter, Singletons, filter_o_convergence, in_filter, in_ideal
from .lattice import (
    Capped, DimensionError, Geometric, Regulator, Scaled, Sum, Vec, Verdict,
)
from .measures import DisjointFamily, evaluate, variation, verify_s_bounded


def _same_dim(x: Regulator, y: Regulator) -> None:
    if x.dim != y.dim:
        raise DimensionError("regulator dimensions differ")


def schur_regulator(a: Regulator, b: Regulator) -> Regulator:
    """j -> 2(a_j + 2 b_j)."""
    _same_dim(a, b)
    return Scaled(Sum(a, Scaled(b, 2)), 2)


def finale_regulator(q: Regulator, b: Regulator) -> Regulator:
    """j -> 2(q_j + 2 b_j) + q_j."""
    _same_dim(q, b)
    return Sum(Scaled(Sum(q, Scaled(b, 2)), 2), q)


class NoSuchMap(ValueError):
    pass


class IncreasingMap:
    """The least increasing w with q(w(j)) <= u 2^-j, computed lazily."""

    def __init__(self, q: Regulator, u: Vec):
        if q.dim != u.dim:
            raise DimensionError("dimension mismatch")
        if not u.is_nonneg():
            raise ValueError("u must be nonnegative")
        head = q.eval(1)
        for uc, hc in zip(u, head):
            if uc == 0 and hc > 0:
                raise NoSuchMap("u vanishes in a component where q is positive")
        self.q, self.u = q, u
        self._values = [0]

    def __call__(self, j: int) -> int:
        while len(self._values) <= j:
            i = len(self._values)
            target = self.u.scale(Fraction(1, 2 ** i))
            n = self.q.first_index_at_most(target, self._values[-1] + 1)
            if n is None:
                raise NoSuchMap(f"no index meets level {i}")
            self._values.append(n)
        return self._values[j]

    def values(self, upto: int) -> list:
        return [self(j) for j in range(1, upto + 1)]


def find_w(q: Regulator, u: Vec) -> IncreasingMap:
    return IncreasingMap(q, u)


@dataclass(frozen=True)
class NuovoschurParts:
    w: Callable[[int], int]
    Q: Regulator
    B: Regulator
    r: Regulator


def nuovoschur_parts(q: Regulator, b: Regulator, u: Vec) -> NuovoschurParts:
    """w, the capped tails Q_N, B_N and r_p = 2(b_p + B_p + Q_p).

    q_{w(j)} <= u 2^-j bounds sum_{j>=N} q_{w(j)} by u 2^(1-N); capping by u
    gives Q_N = u ∧ u 2^(1-N), and likewise for B.  Components where q
    vanishes identically (q_1 = 0) have an exact tail of 0.
    """
    _same_dim(q, b)
    wq, wb = find_w(q, u), find_w(b, u)

    def w(j: int) -> int:
        return max(wq(j), wb(j))

    w(1)
    Q, B = _capped_tail(q, u), _capped_tail(b, u)
    r = Scaled(Sum(b, Sum(B, Q)), 2)
    return NuovoschurParts(w, Q, B, r)


def _capped_tail(q: Regulator, u: Vec) -> Regulator:
    live = Vec([ui if qi > 0 else 0 for ui, qi in zip(u, q.eval(1))])
    return Capped(Geometric(u.scale(2), Fraction(1, 2)), live)


def nuovoschur_regulator(q: Regulator, b: Regulator, u: Vec) -> Regulator:
    return nuovoschur_parts(q, b, u).r


# ---------------------------------------------------------------------------
# helpers


def _member_list(ms, upto: int) -> list:
    if hasattr(ms, "member"):
        return [ms.member(n) for n in range(1, upto + 1)]
    if callable(ms):
        return [ms(n) for n in range(1, upto + 1)]
    ms = list(ms)
    return ms[:upto]


def differences(fam):
    """The family n -> m_n - m, as a plain callable."""
    return lambda n: fam.difference(n)


class _Table:
    """|m_n(H_j)| bounds for n, j <= horizon, and tails past the horizon."""

    def __init__(self, ms, H: DisjointFamily, depth: int):
        self.depth = depth
        self.horizon = 2 * depth
        self.members = _member_list(ms, self.horizon)
        regions = [H.region(j) for j in range(1, self.horizon + 1)]
        self.up, self.lo = [], []
        for m in self.members:
            vals = [evaluate(m, R, depth) for R in regions]
            self.up.append([v.abs_upper() for v in vals])
            self.lo.append([v.abs_lower() for v in vals])
        tail = H.tail(self.horizon + 1)
        self.tail = [variation(_tail_part(m, H), tail, depth).upper for m in self.members]

    @property
    def count(self) -> int:
        return len(self.members)


def _tail_part(m, H: DisjointFamily):
    """A charge vanishes on each member in its ideal, so only the σ-part bounds the tail."""
    if m.has_charge and H.members_in_ideal(m.at_infinity.filter):
        return m.sigma_part()
    return m


@dataclass
class UniformSBoundednessReport:
    mode: str  # "plain", "ideal" or "filter"
    regulator: Regulator
    verdict: Verdict
    thresholds: dict = field(default_factory=dict)


def _threshold(bad_up: list, bad_lo: list, depth: int):
    """(threshold, certain late violation index or None, uncertain late?)."""
    late_certain = next((j for j in range(len(bad_lo), depth, -1) if bad_lo[j - 1]), None)
    late_any = any(bad_up[depth:])
    last = max((j for j in range(1, depth + 1) if bad_up[j - 1]), default=0)
    return last + 1, late_certain, late_any


def uniform_sbounded_check(ms, H: DisjointFamily, r: Regulator, depth: int) -> UniformSBoundednessReport:
    """sup_n sup_{j >= j(k)} |m_n(H_j)| <= r_k."""
    t = _Table(ms, H, depth)
    thresholds, unknown = {}, False
    for k in range(1, depth + 1):
        rk = r.eval(k)
        bad_up = [any(not t.up[n][j] <= rk for n in range(t.count)) for j in range(t.horizon)]
        bad_lo = [any(not t.lo[n][j] <= rk for n in range(t.count)) for j in range(t.horizon)]
        jk, late, late_any = _threshold(bad_up, bad_lo, depth)
        if late is not None:
            n = next(n for n in range(t.count) if not t.lo[n][late - 1] <= rk)
            return UniformSBoundednessReport("plain", r, Verdict.fails({"k": k, "n": n + 1, "j": late}, depth),
                                             thresholds)
        if late_any or any(not tl <= rk for tl in t.tail):
            unknown = True
            continue
        thresholds[k] = jk
    v = Verdict.unknown(depth) if unknown else Verdict.holds(dict(thresholds), depth)
    return UniformSBoundednessReport("plain", r, v, thresholds)


def ideal_uniform_sbounded_check(ms, f: PartitionFilter, H: DisjointFamily, r: Regulator,
                                 ideal_sample, depth: int) -> UniformSBoundednessReport:
    """sup_{j in I} sup_{l >= l(k)} |m_j(H_l)| <= r_k for each sampled I in the dual ideal."""
    for I in ideal_sample:
        if not in_ideal(f, I, depth).is_holds:
            raise ValueError(f"{I} is not certified to lie in the dual ideal")
    t = _Table(ms, H, depth)
    thresholds, unknown = {}, False
    for I in ideal_sample:
        idx = [n for n in range(t.count) if I.contains(n + 1)]
        for k in range(1, depth + 1):
            rk = r.eval(k)
            bad_up = [any(not t.up[n][l] <= rk for n in idx) for l in range(t.horizon)]
            bad_lo = [any(not t.lo[n][l] <= rk for n in idx) for l in range(t.horizon)]
            lk, late, late_any = _threshold(bad_up, bad_lo, depth)
            if late is not None:
                j = next(n for n in idx if not t.lo[n][late - 1] <= rk)
                w = {"k": k, "I": str(I), "j": j + 1, "l": late}
                return UniformSBoundednessReport("ideal", r, Verdict.fails(w, depth), thresholds)
            if late_any or any(not t.tail[n] <= rk for n in idx):
                unknown = True
                continue
            thresholds[f"{k}|{I}"] = lk
    v = Verdict.unknown(depth) if unknown else Verdict.holds(dict(thresholds), depth)
    return UniformSBoundednessReport("ideal", r, v, thresholds)


def F_uniform_sbounded_check(ms, f: PartitionFilter, H: DisjointFamily, r: Regulator,
                             depth: int) -> UniformSBoundednessReport:
    """For each p a k(p) and F(p) in the filter with |m_n(H_k)| <= r_p for
    k >= k(p), n in F(p).  F(p) removes the finitely many blocks of bad n."""
    t = _Table(ms, H, depth)
    thresholds, unknown = {}, False
    for p in range(1, depth + 1):
        rp = r.eval(p)
        found, witness, uncertain = None, None, False
        for K in range(1, depth + 1):
            bad_up = [any(not t.up[n][k] <= rp for k in range(K - 1, t.horizon)) or not t.tail[n] <= rp
                      for n in range(t.count)]
            blocks = sorted({f.block_of(n + 1) for n in range(t.count) if bad_up[n]})
            late = [b for b in blocks if f.first_member(b) > depth]
            if not late:
                F = NATURALS if not blocks else Complement(BlockUnion(f, Finite(tuple(blocks))))
                if in_filter(f, F, depth).is_holds:
                    found = (K, F)
                    break
            certain = [n for n in range(t.count) if f.first_member(f.block_of(n + 1)) > depth
                       and any(not t.lo[n][k] <= rp for k in range(K - 1, t.horizon))]
            if certain:
                n = certain[0]
                k = next(k for k in range(K - 1, t.horizon) if not t.lo[n][k] <= rp)
                witness = witness or {"p": p, "n": n + 1, "k": k + 1}
            else:
                uncertain = True
        if found is None:
            if witness is not None and not uncertain:
                return UniformSBoundednessReport("filter", r, Verdict.fails(witness, depth), thresholds)
            unknown = True
            continue
        thresholds[p] = (found[0], str(found[1]))
    v = Verdict.unknown(depth) if unknown else Verdict.holds(
        {str(p): [k, F] for p, (k, F) in thresholds.items()}, depth)
    return UniformSBoundednessReport("filter", r, v, thresholds)


def reverify_report(report: UniformSBoundednessReport, ms, H: DisjointFamily, depth: int,
                    f: Optional[PartitionFilter] = None, ideal_sample=()) -> bool:
    """Re-evaluate the defining inequality at every stored threshold."""
    if not report.verdict.is_holds:
        return True
    horizon = 2 * depth
    members = _member_list(ms, horizon)

    def ok(n_indices, level, start):
        return all(evaluate(members[n], H.region(j), depth).abs_upper() <= level
                   for n in n_indices for j in range(start, horizon + 1))

    if report.mode == "plain":
        return all(ok(range(len(members)), report.regulator.eval(k), j) for k, j in report.thresholds.items())
    if report.mode == "ideal":
        by_name = {str(I): I for I in ideal_sample}
        for key, l in report.thresholds.items():
            k, name = key.split("|", 1)
            I = by_name[name]
            idx = [n for n in range(len(members)) if I.contains(n + 1)]
            if not ok(idx, report.regulator.eval(int(k)), l):
                return False
        return True
    for p, (K, Fs) in report.thresholds.items():
        from .sexpr import load_descriptor, parse_one
        F = load_descriptor(parse_one(Fs))
        if f is not None and not in_filter(f, F, depth).is_holds:
            return False
        idx = [n for n in range(len(members)) if F.contains(n + 1)]
        if not ok(idx, report.regulator.eval(p), K):
            return False
    return True


# ---------------------------------------------------------------------------
# theorem verifiers


class HypothesisError(ValueError):
    def __init__(self, hypothesis: str, verdict: Verdict):
        self.hypothesis, self.verdict = hypothesis, verdict
        super().__init__(f"hypothesis failed: {hypothesis}")


@dataclass
class TheoremCheck:
    verdict: Verdict
    regulator: Regulator
    hypotheses: list
    report: Optional[UniformSBoundednessReport] = None

    @property
    def violation(self) -> bool:
        return self.verdict.is_fails and all(v.is_holds for _, v in self.hypotheses)


def descriptor_grammar(max_d: int = 64, f: Optional[PartitionFilter] = None, block_d: int = 8):
    """The witness search space: ArithProg(a, d) for d = 2..max_d, then tails,
    then (for a non-singleton filter) unions of blocks indexed by ArithProg(a, d), d <= block_d."""
    for d in range(2, max_d + 1):
        for a in range(d):
            yield ArithProg(a, d)
    for a in range(1, max_d + 1):
        yield tail_from(a)
    if f is None or isinstance(f, Singletons):
        return
    for d in range(2, block_d + 1):
        for a in range(d):
            yield BlockUnion(f, ArithProg(a, d))


def convergence_audit(fam, f: PartitionFilter, b: Regulator, sample, depth: int):
    """(first failing set, its verdict) or (None, conjunction of verdicts)."""
    zero = Vec.zero(fam.dim)
    unknown, count = False, 0
    for A in sample:
        v = filter_o_convergence(f, fam.sequence(A, depth), zero, b, depth)
        if v.is_fails:
            return A, v
        unknown = unknown or v.is_unknown
        count += 1
    return None, (Verdict.unknown(depth) if unknown else Verdict.holds({"sets": count}, depth))


def search_hypothesis_witness(fam, f: PartitionFilter, b: Regulator, depth: int, max_d: int = 64):
    """First grammar set on which pointwise (o_F)-convergence fails."""
    A, v = convergence_audit(fam, f, b, descriptor_grammar(max_d, f), depth)
    return (A, v) if A is not None else None


def sigma_tail(m, k: int) -> Vec:
    """Upper bound of sum_{j >= k} |m({j})|."""
    out = Vec.zero(m.dim)
    for j, w in m.atoms:
        if j >= k:
            out = out + abs(w)
    for g in m.families:
        out = out + abs(g.c).scale(g.rho ** k / (1 - g.rho))
    return out


def schur_verify(ms, f: PartitionFilter, b: Regulator, a: Regulator, sample, depth: int) -> Verdict:
    """Pointwise (o_F)-convergence to 0 plus a common σ-additivity regulator
    give (o_F)-convergence of the total variations, regulated by 2(a + 2b)."""
    if sample is None:
        hit = search_hypothesis_witness(ms, f, b, depth)
        A, v = hit if hit else (None, None)
    else:
        A, v = convergence_audit(ms, f, b, sample, depth)
    if A is not None:
        return Verdict.fails({"stage": "hypothesis", "hypothesis": "pointwise convergence",
                              "A": str(A), "detail": v.witness}, depth)
    members = _member_list(ms, depth)
    for n, m in enumerate(members, 1):
        if m.has_charge:
            raise ValueError("the Schur-type check needs chargeless measures")
        for k in range(1, min(depth, m.explicit_max + 1) + 1):
            if not sigma_tail(m, k) <= a.eval(k):
                return Verdict.fails({"stage": "hypothesis", "hypothesis": "σ-additivity regulator",
                                      "n": n, "k": k}, depth)
    p = schur_regulator(a, b)
    horizon = 2 * depth
    var = [variation(m, NATURALS, depth).upper for m in _member_list(ms, horizon)]
    env = getattr(ms, "variation_envelope", None)
    table, unknown = {}, False
    from .sexpr import dump_regulator, dump_vec
    for j in range(1, depth + 1):
        pj = p.eval(j)
        N = horizon + 1
        while N > 1 and var[N - 2] <= pj:
            N -= 1
        if N > horizon:
            return Verdict.fails({"stage": "conclusion", "j": j, "n": horizon}, depth)
        if env is not None and not env.eval(horizon + 1) <= pj:
            unknown = True
        F = NATURALS if N == 1 else tail_from(N)
        if not in_filter(f, F, depth).is_holds:
            unknown = True
        table[j] = {"F": str(F), "p": dump_vec(pj)}
    if unknown:
        return Verdict.unknown(depth)
    return Verdict.holds({"regulator": dump_regulator(p), "F": table}, depth)


def _audit_or_raise(name: str, v: Verdict, hypotheses: list) -> None:
    hypotheses.append((name, v))
    if v.is_fails:
        raise HypothesisError(name, v)


def finale_verify(ms, f: PartitionFilter, b: Regulator, q: Regulator, H: DisjointFamily,
                  ideal_sample, depth: int, sample=None) -> TheoremCheck:
    """Pointwise (o_F)-convergence with b and ideal uniform s-boundedness with q
    imply uniform s-boundedness with 2(q + 2b) + q.  The limit is subtracted
    first, so all checks run on n -> m_n - m."""
    diffs = differences(ms)
    hypotheses: list = []
    sample = list(sample) if sample is not None else list(ideal_sample) + [NATURALS]
    A, v = convergence_audit(ms, f, b, sample, depth)
    if A is not None:
        v = Verdict.fails({"A": str(A), "detail": v.witness}, depth)
    _audit_or_raise("pointwise convergence", v, hypotheses)
    iu = ideal_uniform_sbounded_check(diffs, f, H, q, ideal_sample, depth)
    _audit_or_raise("ideal uniform s-boundedness", iu.verdict, hypotheses)
    r = finale_regulator(q, b)
    rep = uniform_sbounded_check(diffs, H, r, depth)
    return TheoremCheck(rep.verdict, r, hypotheses, rep)


def nuovoschur_verify(ms, f: PartitionFilter, b: Regulator, q: Regulator, u: Vec, H: DisjointFamily,
                      sample, depth: int) -> TheoremCheck:
    """For each p the indices j with sup_k |m_j(H_k)| > r_p form a set in the
    dual ideal, r_p = 2(b_p + B_p + Q_p).  Runs on n -> m_n - m."""
    diffs = differences(ms)
    hypotheses: list = []
    horizon = 2 * depth
    members = _member_list(diffs, horizon)
    A, v = convergence_audit(ms, f, b, list(sample), depth)
    if A is not None:
        v = Verdict.fails({"A": str(A), "detail": v.witness}, depth)
    _audit_or_raise("pointwise convergence", v, hypotheses)
    over = [n for n, m in enumerate(members[:depth], 1) if not variation(m, NATURALS, depth).upper <= u]
    _audit_or_raise("uniform bound", Verdict.fails({"n": over[0]}, depth) if over
                    else Verdict.holds({"u": str(u)}, depth), hypotheses)
    sb = [verify_s_bounded(m, H, q, depth) for m in members[:depth]]
    bad = next((n for n, s in enumerate(sb, 1) if s.is_fails), None)
    _audit_or_raise("common s-boundedness regulator",
                    Verdict.fails({"n": bad}, depth) if bad else Verdict.holds({}, depth), hypotheses)
    r = nuovoschur_regulator(q, b, u)
    t = _Table(diffs, H, depth)
    sups_up = [_sup(t.up[n], t.tail[n]) for n in range(t.count)]
    sups_lo = [_sup(t.lo[n], Vec.zero(t.tail[n].dim)) for n in range(t.count)]
    table, unknown = {}, False
    for p in range(1, depth + 1):
        rp = r.eval(p)
        bad_n = [n + 1 for n in range(t.count) if not sups_up[n] <= rp]
        blocks = sorted({f.block_of(n) for n in bad_n})
        late = [b_ for b_ in blocks if f.first_member(b_) > depth]
        if late:
            certain = [n + 1 for n in range(t.count) if not sups_lo[n] <= rp
                       and f.first_member(f.block_of(n + 1)) > depth]
            if certain:
                return TheoremCheck(Verdict.fails({"p": p, "j": certain[0]}, depth), r, hypotheses)
            unknown = True
            continue
        table[p] = str(BlockUnion(f, Finite(tuple(blocks))))
    v = Verdict.unknown(depth) if unknown else Verdict.holds({"bad_indices": table}, depth)
    return TheoremCheck(v, r, hypotheses)


def _sup(row: list, tail: Vec) -> Vec:
    out = tail
    for x in row:
        out = out.sup(x)
    return out
