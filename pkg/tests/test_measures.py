from fractions import Fraction as Q

import pytest

from lmeas.descriptors import (
    EMPTY, EVENS, NATURALS, ODDS, WHOLE, ArithProg, Finite, Region, Segment, interval, tail_from,
)
from lmeas.filters import DyadicValuationBlocks, Singletons
from lmeas.lattice import Geometric, Harmonic, Vec
from lmeas.measures import (
    AtInfinity, Charge, CountableAtoms, FiniteAtoms, GeometricWeights, NotMeasurable, Piece,
    SelectionError, block_family, brute_abs_continuity_table, brute_subset_values, brute_variation,
    check_absolutely_continuous, check_continuous, check_purely_finitely_additive, check_singular,
    evaluate, extract_sigma_subsequence, s_boundedness_certificate, singleton_family, variation,
    verify_s_bounded,
)

HALF = Q(1, 2)


def geometric_charge(c=1, charge=None, f=None):
    fams = (GeometricWeights(Vec([c]), HALF),)
    inf = AtInfinity(Vec([charge]), f or Singletons()) if charge is not None else None
    return Charge(CountableAtoms, 1, (), fams, (), inf)


def charge_only(c, f=None, dim=None):
    c = c if isinstance(c, Vec) else Vec([c])
    return Charge(CountableAtoms, c.dim, at_infinity=AtInfinity(c, f or Singletons()))


def test_evaluate_geometric_series():
    m = geometric_charge()
    v = evaluate(m, NATURALS, 20)
    assert v.lower == Vec([1 - Q(1, 2 ** 20)]) and v.upper == Vec([1]) and v.contains(Vec([1]))
    assert evaluate(m, EMPTY, 20).is_exact and evaluate(m, EMPTY, 20).partial == Vec([0])
    assert evaluate(m, interval(1, 3), 5).is_exact


def test_charge_measurability():
    m = charge_only(1)
    with pytest.raises(NotMeasurable):
        evaluate(m, EVENS, 20)
    assert evaluate(m, tail_from(5), 20).partial == Vec([1])
    assert evaluate(m, Finite((1, 2)), 20).partial == Vec([0])


def test_evaluate_is_additive_on_a_split():
    m = Charge(CountableAtoms, 2, ((1, Vec([1, 0])), (4, Vec([-2, 3]))), (GeometricWeights(Vec([1, 1]), Q(1, 3)),),
               (Piece(0, HALF, Vec([2, -1])),))
    A = Region(ArithProg(0, 2), Segment(((0, Q(1, 4)),)))
    B = ~A
    total = evaluate(m, WHOLE, 30)
    both = evaluate(m, A, 30) + evaluate(m, B, 30)
    assert both.partial == total.partial and both.contains_interval(total)


def test_variation_examples():
    m = Charge.from_weights([1, -2, 3])
    assert variation(m, NATURALS, 10).partial == Vec([6])
    assert variation(m, NATURALS, 10, "plus").partial == Vec([4])
    assert variation(m, NATURALS, 10, "minus").partial == Vec([2])
    assert brute_variation(m, NATURALS) == (Vec([4]), Vec([2]))
    assert variation(Charge.zero(FiniteAtoms(3), 1), NATURALS, 10).partial == Vec([0])
    assert variation(charge_only(Vec([1, 2])), NATURALS, 10).partial == Vec([1, 2])


def test_brute_subset_values_cover_every_subset():
    m = Charge.from_weights([1, -2, 3])
    vals = brute_subset_values(m)
    assert len(vals) == 8 and vals[0b101] == Vec([4]) and vals[0b111] == Vec([2])


def test_s_boundedness_certificates():
    m = geometric_charge()
    p = s_boundedness_certificate(m)
    assert p.eval(3) == Vec([Q(1, 4)])
    assert verify_s_bounded(m, singleton_family(), p, 30).is_holds
    fin = Charge.from_weights([1, 2, 3])
    assert verify_s_bounded(fin, singleton_family(), s_boundedness_certificate(fin), 10).is_holds
    ch = charge_only(1, DyadicValuationBlocks())
    v = verify_s_bounded(ch, block_family(DyadicValuationBlocks()), s_boundedness_certificate(ch), 10)
    assert v.is_holds


def test_absolute_continuity_examples():
    nu = Charge.from_weights([1, 0, 2])
    m = Charge(FiniteAtoms(3), 2, ((1, Vec([1, 1])), (3, Vec([0, 3]))))
    assert check_absolutely_continuous(m, nu, 10).is_holds
    bad = m + Charge(FiniteAtoms(3), 2, ((2, Vec([2, 0])),))
    v = check_absolutely_continuous(bad, nu, 10)
    assert v.is_fails and v.witness["atom"] == 2


def test_absolute_continuity_table_matches_enumeration():
    nu = Charge.from_weights([Q(1, 2), Q(1, 4), 0, Q(1, 3)])
    m = Charge.from_weights([1, -2, 0, 3])
    levels = range(1, 6)
    table = brute_abs_continuity_table(m, nu, levels)
    subsets = [[k for k in range(4) if (mask >> k) & 1] for mask in range(16)]
    for n, got in zip(levels, table):
        want = max(abs(sum((m.weight(k + 1)[0] for k in S), Q(0)))
                   for S in subsets if sum((nu.weight(k + 1)[0] for k in S), Q(0)) <= Q(1, n))
        assert got == Vec([want])


def test_singularity_examples():
    nu = Charge.from_weights([1, 0, 0])
    m = Charge(FiniteAtoms(3), 1, ((2, Vec([1])), (3, Vec([5]))))
    v = check_singular(m, nu, 10)
    assert v.is_holds and v.witness["F"] == "(finite 2 3)"
    both = Charge(FiniteAtoms(3), 1, ((1, Vec([1])),))
    v = check_singular(both, nu, 10)
    assert v.is_fails and v.witness["atom"] == 1
    v = check_singular(charge_only(1), geometric_charge(), 20)
    assert v.is_holds and "A_k" in v.witness


def test_continuity_examples():
    flat = Charge(CountableAtoms, 1, pieces=(Piece(0, 1, Vec([1])),))
    v = check_continuous(flat, 20)
    assert v.is_holds and v.witness["p"] == "(geometric (vec 1) 1/2)"
    atom = Charge(CountableAtoms, 1, ((4, Vec([1])),))
    v = check_continuous(atom, 20)
    assert v.is_fails and v.witness["atom"] == 4
    assert check_continuous(Charge.zero(CountableAtoms, 1), 20).is_holds


def test_purely_finitely_additive_examples():
    assert check_purely_finitely_additive(charge_only(1), 50).is_holds
    v = check_purely_finitely_additive(geometric_charge(), 50)
    assert v.is_fails and v.witness["singleton"] == 1
    mixed = charge_only(1) + Charge(CountableAtoms, 1, ((3, Vec([1])),))
    assert check_purely_finitely_additive(mixed, 50).is_fails


def test_canonical_form_merges_and_drops_zero_atoms():
    m = Charge(FiniteAtoms(3), 1, ((2, Vec([1])), (2, Vec([-1])), (1, Vec([3]))))
    assert m.atoms == ((1, Vec([3])),)
    with pytest.raises(ValueError):
        Charge(FiniteAtoms(2), 1, ((3, Vec([1])),))
    with pytest.raises(ValueError):
        Piece(0, Q(1, 3), Vec([1]))


def test_extract_sigma_subsequence():
    m = geometric_charge()
    q = Geometric(Vec([1]), HALF)
    assert extract_sigma_subsequence([m], singleton_family(), q, 10) == list(range(1, 11))
    zero = Charge.zero(CountableAtoms, 1)
    assert extract_sigma_subsequence([zero], singleton_family(), q, 5) == [1, 2, 3, 4, 5]
    on_evens = Charge(CountableAtoms, 1, tuple((k, Vec([1])) for k in range(2, 41, 2)))
    on_odds = Charge(CountableAtoms, 1, tuple((k, Vec([1])) for k in range(1, 41, 2)))
    chosen = extract_sigma_subsequence([on_evens, on_odds], singleton_family(), q, 5)
    assert all(k > 40 for k in chosen)
    for pos, n in enumerate(chosen, 1):
        for mm in (on_evens, on_odds):
            assert variation(mm, Finite((n,)), 10).upper <= q.eval(pos)
    heavy = Charge(CountableAtoms, 1, tuple((k, Vec([1])) for k in range(1, 200)))
    with pytest.raises(SelectionError) as e:
        extract_sigma_subsequence([heavy], singleton_family(), q, 3, search_limit=100)
    assert e.value.position == 1
