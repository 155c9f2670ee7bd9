from fractions import Fraction as Q

import pytest

from lmeas.decompose import (
    common_witness, interval_equal, lebesgue_decompose, sobczyk_hammer_decompose,
    yosida_hewett_crosscheck, yosida_hewett_decompose,
)
from lmeas.descriptors import EVENS, NATURALS, ODDS, WHOLE, ArithProg, Finite, tail_from
from lmeas.filters import DyadicValuationBlocks, Singletons
from lmeas.lattice import Vec
from lmeas.measures import (
    AtInfinity, Charge, CountableAtoms, FiniteAtoms, GeometricWeights, Piece, UnsupportedCombination,
    evaluate,
)


def test_lebesgue_finite_example():
    nu = Charge.from_weights([1, 0, 2])
    m = Charge(FiniteAtoms(3), 2, ((1, Vec([1, 1])), (2, Vec([2, 0])), (3, Vec([0, 3]))))
    d = lebesgue_decompose(m, nu, 10)
    assert d.witness_set.atoms.members(3) == [1, 3]
    assert d.partA.atoms == ((1, Vec([1, 1])), (3, Vec([0, 3])))
    assert d.partB.atoms == ((2, Vec([2, 0])),)
    assert d.certificates["absolutely_continuous"].is_holds
    assert d.certificates["singular"].is_holds
    for mask in range(8):
        A = Finite(tuple(k + 1 for k in range(3) if (mask >> k) & 1))
        assert d.resums(m, A, 10)


def test_lebesgue_with_null_reference_is_all_singular():
    nu = Charge.zero(FiniteAtoms(3), 1)
    m = Charge.from_weights([1, -1, 2])
    d = lebesgue_decompose(m, nu, 10)
    assert d.partA.is_zero() and d.partB == m


def test_lebesgue_charge_goes_to_singular_part():
    nu = Charge(CountableAtoms, 1, families=(GeometricWeights(Vec([1]), Q(1, 2)),))
    m = Charge(CountableAtoms, 1, ((2, Vec([3])),), at_infinity=AtInfinity(Vec([1]), Singletons()))
    d = lebesgue_decompose(m, nu, 20)
    assert d.partB.has_charge and not d.partA.has_charge
    assert d.certificates["singular"].is_holds
    with pytest.raises(UnsupportedCombination):
        nu2 = nu + Charge(CountableAtoms, 1, at_infinity=AtInfinity(Vec([1]), DyadicValuationBlocks()))
        lebesgue_decompose(m, nu2, 20)


def test_sobczyk_hammer_examples():
    m = Charge(CountableAtoms, 1, ((1, Vec([Q(1, 2)])),), pieces=(Piece(0, 1, Vec([1])),))
    d = sobczyk_hammer_decompose(m, 20)
    assert d.partA == Charge(CountableAtoms, 1, pieces=(Piece(0, 1, Vec([1])),))
    assert d.partB.atoms == ((1, Vec([Q(1, 2)])),)
    assert d.certificates["continuous"].is_holds
    diffuse = Charge(CountableAtoms, 1, pieces=(Piece(0, Q(1, 2), Vec([3])),))
    assert sobczyk_hammer_decompose(diffuse, 20).partB.is_zero()
    ch = Charge(CountableAtoms, 1, at_infinity=AtInfinity(Vec([1]), Singletons()))
    d = sobczyk_hammer_decompose(ch, 20)
    assert d.partA.is_zero() and d.partB == ch
    assert all(c == 1 for c in d.certificates["atomic"].witness["filter_pieces_per_partition"])


def test_yosida_hewett_examples():
    m = Charge(CountableAtoms, 1, families=(GeometricWeights(Vec([1]), Q(1, 2)),),
               at_infinity=AtInfinity(Vec([1]), Singletons()))
    d = yosida_hewett_decompose(m, 20)
    assert d.partB == Charge(CountableAtoms, 1, at_infinity=AtInfinity(Vec([1]), Singletons()))
    assert evaluate(d.partA, NATURALS, 20).contains(Vec([1]))
    assert d.certificates["purely_finitely_additive"].is_holds
    plain = Charge.from_weights([1, 2])
    assert yosida_hewett_decompose(plain, 5).partB.is_zero()
    only = Charge(CountableAtoms, 1, at_infinity=AtInfinity(Vec([2]), Singletons()))
    assert yosida_hewett_decompose(only, 5).partA.is_zero()
    for A in (Finite((1, 3)), tail_from(4), NATURALS):
        assert yosida_hewett_crosscheck(m, A, 20)


def test_common_witness_is_the_union():
    nu1, nu2 = Charge.from_weights([1, 0, 0]), Charge.from_weights([0, 0, 1])
    m = Charge.from_weights([1, 1, 1])
    U = common_witness([lebesgue_decompose(m, nu1, 5), lebesgue_decompose(m, nu2, 5)])
    assert U.atoms.members(3) == [1, 3]
