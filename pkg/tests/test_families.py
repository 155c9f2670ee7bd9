from fractions import Fraction as Q

from lmeas.descriptors import EVENS, NATURALS, ODDS, WHOLE, DyadicValuation, Finite
from lmeas.families import BlockSplit, Constant, Perturbation, PointMasses, SchurTriangle, Zero
from lmeas.lattice import Vec
from lmeas.measures import Charge, CountableAtoms, Piece, evaluate, variation


def test_schur_triangle_members_and_envelope():
    fam = SchurTriangle()
    for n in range(1, 60):
        tv = variation(fam.member(n), NATURALS, 10).partial
        assert tv == Vec([Q(n, 2 ** n)])
        assert tv <= fam.envelope.eval(n)


def test_perturbation_differences_and_envelope():
    m = Charge(CountableAtoms, 1, ((1, Vec([1])),), pieces=(Piece(0, Q(1, 2), Vec([2])),))
    d = Charge(CountableAtoms, 1, ((2, Vec([-3])),))
    fam = Perturbation(m, d)
    assert fam.member(3) - fam.limit == fam.difference(3)
    for n in range(1, 20):
        for A in (Finite((2,)), EVENS, WHOLE):
            assert abs(evaluate(fam.difference(n), A, 10).partial) <= fam.envelope.eval(n)


def test_constant_and_zero():
    m = Charge.from_weights([1, 2], CountableAtoms)
    assert Constant(m).member(5) == m
    assert Zero().member(3).is_zero()


def test_point_masses_pieces_match_values():
    fam = PointMasses(Vec([2]), ODDS)
    seq = fam.sequence(EVENS | Finite((3,)), 20)
    for k in range(1, 21):
        want = Vec([2]) if k == 3 else Vec([0])
        assert seq(k) == want


def test_block_split_oscillates_only_on_its_block():
    base = Charge.from_weights([Q(1, 2), Q(1, 4)], CountableAtoms)
    fam = BlockSplit(base, DyadicValuation(0))
    for n in range(1, 30):
        if n % 2 == 0:
            assert fam.difference(n).is_zero()
        else:
            assert fam.difference(n) == base.scale(n % 3)
