from fractions import Fraction as Q

import pytest

from lmeas.descriptors import NATURALS, ODDS, ArithProg, DyadicValuation, Finite
from lmeas.families import BlockSplit, PointMasses, SchurTriangle, Zero
from lmeas.filters import DyadicValuationBlocks, Singletons
from lmeas.lattice import Geometric, Harmonic, Vec, zero_regulator
from lmeas.measures import Charge, CountableAtoms, GeometricWeights, block_family, singleton_family
from lmeas.regulators import (
    F_uniform_sbounded_check, HypothesisError, find_w, finale_regulator, finale_verify,
    ideal_uniform_sbounded_check, nuovoschur_parts, nuovoschur_regulator, nuovoschur_verify,
    reverify_report, schur_regulator, schur_verify, uniform_sbounded_check,
)

H1 = Harmonic(Vec([1]))
G1 = Geometric(Vec([1]), Q(1, 2))
G2 = Geometric(Vec([2]), Q(1, 2))
Z = zero_regulator(1)


def test_schur_regulator_examples():
    assert all(schur_regulator(H1, H1).eval(j) == Vec([Q(6, j)]) for j in range(1, 30))
    assert schur_regulator(Z, Z).eval(5) == Vec([0])
    p = schur_regulator(G1, H1)
    for j in (1, 2, 4):
        assert p.eval(j) == Vec([2 * (Q(1, 2 ** j) + Q(2, j))])


def test_finale_regulator_examples():
    assert all(finale_regulator(H1, H1).eval(j) == Vec([Q(7, j)]) for j in range(1, 30))
    assert finale_regulator(Z, G1).eval(3) == Vec([4 * Q(1, 8)])
    r = finale_regulator(G1, Geometric(Vec([1]), Q(1, 4)))
    for j in (1, 2, 5):
        assert r.eval(j) == Vec([3 * Q(1, 2 ** j) + 4 * Q(1, 4 ** j)])


def test_find_w_examples():
    assert find_w(G1, Vec([1])).values(10) == list(range(1, 11))
    assert find_w(H1, Vec([1])).values(8) == [2 ** j for j in range(1, 9)]
    assert find_w(Z, Vec([1])).values(6) == list(range(1, 7))


def test_nuovoschur_parts_examples():
    parts = nuovoschur_parts(G1, G1, Vec([1]))
    for p in range(1, 12):
        assert parts.r.eval(p) == Vec([2 * (Q(1, 2 ** p) + 2 * min(Q(1), Q(2, 2 ** p)))])
    assert nuovoschur_regulator(Z, Z, Vec([1])).eval(4) == Vec([0])
    assert nuovoschur_regulator(Z, Z, Vec([0])).eval(3) == Vec([0])
    mixed = nuovoschur_parts(Z, G1, Vec([1]))
    assert mixed.Q.eval(2) == Vec([0]) and mixed.B.eval(2) == Vec([Q(1, 2)])


def test_schur_verify_triangle_and_point_masses():
    v = schur_verify(SchurTriangle(), Singletons(), G2, G2, [NATURALS, ArithProg(0, 2), ArithProg(1, 3)], 40)
    assert v.is_holds
    v = schur_verify(Zero(), Singletons(), G2, G2, [NATURALS], 20)
    assert v.is_holds and v.witness["F"][1]["F"] == "(not (finite))"
    v = schur_verify(PointMasses(Vec([1])), Singletons(), G2, G2, None, 64)
    assert v.is_fails and v.witness["A"] == "(ap 0 2)"


def test_uniform_check_examples():
    deltas = PointMasses(Vec([1]))
    v = uniform_sbounded_check(deltas, singleton_family(), G1, 16).verdict
    assert v.is_fails and v.witness["n"] == v.witness["j"]
    geo = Charge(CountableAtoms, 1, families=(GeometricWeights(Vec([1]), Q(1, 2)),))
    rep = uniform_sbounded_check([geo] * 20, singleton_family(), G1, 16)
    assert rep.verdict.is_holds
    assert reverify_report(rep, [geo] * 20, singleton_family(), 16)
    scaled = [geo.scale(Q(1, n)) for n in range(1, 40)]
    assert uniform_sbounded_check(scaled, singleton_family(), G1, 16).verdict.is_holds


def test_ideal_uniform_gap():
    deltas = PointMasses(Vec([1]))
    rep = ideal_uniform_sbounded_check(deltas, Singletons(), singleton_family(), G1, [Finite((1, 2, 3, 4, 5))], 16)
    assert rep.verdict.is_holds
    assert reverify_report(rep, deltas, singleton_family(), 16, Singletons(), [Finite((1, 2, 3, 4, 5))])
    with pytest.raises(ValueError):
        ideal_uniform_sbounded_check(deltas, Singletons(), singleton_family(), G1, [ODDS], 16)


def test_F_uniform_examples():
    f = DyadicValuationBlocks()
    deltas = PointMasses(Vec([1]))
    assert F_uniform_sbounded_check(deltas, Singletons(), singleton_family(), G1, 16).verdict.is_fails
    odd = PointMasses(Vec([1]), ODDS)
    rep = F_uniform_sbounded_check(odd, f, singleton_family(), G1, 16)
    assert rep.verdict.is_holds
    assert uniform_sbounded_check(odd, singleton_family(), G1, 16).verdict.is_fails


def _base():
    return Charge(CountableAtoms, 1, tuple((k, Vec([Q(1, 2 ** k)])) for k in range(1, 5)))


def test_finale_verify_constructed_family():
    f = DyadicValuationBlocks()
    fam = BlockSplit(_base(), DyadicValuation(0))
    check = finale_verify(fam, f, G2, G2, singleton_family(), [DyadicValuation(0), Finite((1, 2, 3))], 16)
    assert check.verdict.is_holds and not check.violation
    assert [n for n, _ in check.hypotheses] == ["pointwise convergence", "ideal uniform s-boundedness"]
    z = finale_verify(Zero(), f, G2, G2, singleton_family(), [DyadicValuation(0)], 12)
    assert z.verdict.is_holds
    with pytest.raises(HypothesisError) as e:
        finale_verify(PointMasses(Vec([1])), Singletons(), G2, G2, singleton_family(), [Finite((1,))], 16,
                      sample=[ArithProg(0, 2)])
    assert e.value.hypothesis == "pointwise convergence"


def test_nuovoschur_verify_constructed_family():
    f = DyadicValuationBlocks()
    fam = BlockSplit(_base(), DyadicValuation(0))
    check = nuovoschur_verify(fam, f, G2, G2, Vec([4]), singleton_family(), [NATURALS, ArithProg(0, 2)], 16)
    assert check.verdict.is_holds and not check.violation
    z = nuovoschur_verify(Zero(), f, G2, G2, Vec([1]), singleton_family(), [NATURALS], 12)
    assert z.verdict.is_holds and not z.regulator.eval(1).is_zero()
    with pytest.raises(HypothesisError):
        nuovoschur_verify(PointMasses(Vec([1])), Singletons(), G2, G2, Vec([1]), singleton_family(),
                          [ArithProg(0, 2)], 16)


def test_witness_grammar_adds_block_unions_only_for_coarser_filters():
    from lmeas.descriptors import BlockUnion
    from lmeas.filters import DyadicValuationBlocks, Singletons
    from lmeas.regulators import descriptor_grammar
    plain = list(descriptor_grammar(8, Singletons()))
    blocks = list(descriptor_grammar(8, DyadicValuationBlocks(), block_d=4))
    assert not any(isinstance(A, BlockUnion) for A in plain)
    unions = [A for A in blocks if isinstance(A, BlockUnion)]
    assert len(unions) == 2 + 3 + 4 and blocks[:len(plain)] == plain
    assert unions[0].contains(2) and not unions[0].contains(1)
