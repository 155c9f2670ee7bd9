"""Lebesgue, Sobczyk-Hammer and Yosida-Hewett decompositions.

The parts are read off the structure of a :class:`Charge`; what carries the
correctness burden are the certificates, which are the outputs of the
property checkers in :mod:`lmeas.measures` run on each part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .descriptors import (
    EMPTY, Finite, Region, Segment, SetDescriptor, Union, as_region,
)
from .filters import in_filter
from .measures import (
    Charge, UnsupportedCombination, ValueInterval, check_absolutely_continuous,
    check_continuous, check_purely_finitely_additive, check_singular, evaluate,
)
from .lattice import Verdict


@dataclass(frozen=True)
class Decomposition:
    kind: str  # "lebesgue", "sobczyk-hammer" or "yosida-hewett"
    partA: Charge
    partB: Charge
    witness_set: Optional[Region]
    certificates: dict = field(default_factory=dict, compare=False)

    def resums(self, m: Charge, A, depth: int) -> bool:
        return interval_equal(evaluate(self.partA, A, depth) + evaluate(self.partB, A, depth),
                              evaluate(m, A, depth))


def interval_equal(x: ValueInterval, y: ValueInterval) -> bool:
    """Same exact partial sum, and each interval contains the other's partial."""
    return x.partial == y.partial and x.contains(y.partial) and y.contains(x.partial)


def positive_support(nu: Charge) -> Region:
    """Atoms and diffuse segment where a nonnegative scalar nu is positive."""
    atoms: SetDescriptor = Finite(tuple(k for k, w in nu.atoms if w[0] > 0))
    for g in nu.families:
        if g.c[0] > 0:
            atoms = g.support if atoms == EMPTY else Union(atoms, g.support)
    seg = Segment(tuple((p.a, p.b) for p in nu.pieces if p.density[0] > 0))
    return Region(atoms, seg)


def _restrict_sigma(m: Charge, region: Region) -> Charge:
    return m.sigma_part().restrict(region)


def lebesgue_decompose(m: Charge, nu: Charge, depth: int) -> Decomposition:
    """m = m^< + m^⊥ with m^< << nu and m^⊥ ⊥ nu.

    E is where nu is positive.  A charge of m is absolutely continuous when nu
    carries a positive charge along the same filter and singular otherwise.
    """
    if nu.dim != 1:
        raise ValueError("nu must be scalar")
    if m.space != nu.space:
        raise ValueError("space mismatch")
    if not nu.is_nonneg():
        raise ValueError("nu must be nonnegative")
    if m.has_charge and nu.has_charge and m.at_infinity.filter != nu.at_infinity.filter:
        raise UnsupportedCombination("charges along different filters")
    E = positive_support(nu)
    ac = _restrict_sigma(m, E)
    sing = _restrict_sigma(m, ~E)
    if m.has_charge:
        if nu.has_charge:
            ac = ac + m.charge_part()
        else:
            sing = sing + m.charge_part()
    certs = {"absolutely_continuous": check_absolutely_continuous(ac, nu, depth),
             "singular": check_singular(sing, nu, depth)}
    return Decomposition("lebesgue", ac, sing, E, certs)


def charge_partition_evidence(m: Charge, depth: int) -> list:
    """For measured partitions {A_1, ..., A_{n-1}, rest} count pieces in the filter."""
    if not m.has_charge:
        return []
    f = m.at_infinity.filter
    from .descriptors import BlockUnion, tail_from
    out = []
    for n in range(1, min(depth, 16) + 1):
        pieces = [f.block_descriptor(k) for k in range(1, n)] + [BlockUnion(f, tail_from(n))]
        out.append(sum(1 for p in pieces if in_filter(f, p, depth).is_holds))
    return out


def sobczyk_hammer_decompose(m: Charge, depth: int) -> Decomposition:
    """m = m^s + m^a: the diffuse part is continuous; atoms and charge are atomic."""
    cont = m.diffuse_part()
    atomic = m - cont
    atoms = [k for k, _ in atomic.atoms if k <= depth]
    if atomic.families:
        atoms = [k for k in range(1, depth + 1) if not atomic.weight(k).is_zero()]
    evidence = charge_partition_evidence(m, depth)
    certs = {"continuous": check_continuous(cont, depth),
             "atomic": Verdict.holds({"indivisible_atoms": atoms,
                                      "filter_pieces_per_partition": evidence}, depth)}
    return Decomposition("sobczyk-hammer", cont, atomic, Region(EMPTY, m.support_segment()), certs)


def yosida_hewett_decompose(m: Charge, depth: int) -> Decomposition:
    """m = (m - m_0) + m_0 with m_0 the charge at infinity."""
    m0 = m.charge_part()
    sigma = m.sigma_part()
    certs = {"purely_finitely_additive": check_purely_finitely_additive(m0, depth),
             "countably_additive": Verdict.holds({"charge": False}, depth)}
    return Decomposition("yosida-hewett", sigma, m0, None, certs)


def yosida_hewett_crosscheck(m: Charge, A, depth: int) -> bool:
    """(m - m_0)(A) contains the singleton sum over A plus the diffuse mass of A."""
    sigma = evaluate(yosida_hewett_decompose(m, depth).partA, A, depth)
    r = as_region(A)
    total = sum((evaluate(m, Finite((k,)), depth).partial
                 for k in r.atoms.members(m.exact_range(r.atoms, depth))), m.weight(1).scale(0))
    for p in m.pieces:
        total = total + p.density.scale(r.segment.overlap(p.a, p.b))
    return sigma.contains(total)


def common_witness(ds) -> Region:
    """Union of the witness sets of a finite list of decompositions."""
    atoms: SetDescriptor = EMPTY
    seg = Segment(())
    seen = set()
    for d in ds:
        w = d.witness_set
        if w is None or w in seen:
            continue
        seen.add(w)
        atoms = w.atoms if atoms == EMPTY else Union(atoms, w.atoms)
        seg = seg | w.segment
    return Region(atoms, seg)
