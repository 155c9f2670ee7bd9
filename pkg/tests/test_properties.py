"""Property tests for the lattice, descriptor, measure and decomposition invariants."""

from fractions import Fraction as Q

from hypothesis import assume, given, strategies as st

from lmeas import sexpr as S
from lmeas.decompose import lebesgue_decompose, sobczyk_hammer_decompose, yosida_hewett_decompose
from lmeas.descriptors import (
    NATURALS, WHOLE, ArithProg, Complement, DyadicValuation, Finite, Intersection, Region, Segment,
    Union,
)
from lmeas.filters import (
    DyadicValuationBlocks, Ranges, Singletons, TableWithTailRule, filter_o_convergence, in_ideal,
)
from lmeas.lattice import (
    Capped, Geometric, Harmonic, Scaled, Sequence, Shifted, Sum, Vec, o_convergence_check,
)
from lmeas.measures import (
    AtInfinity, Charge, CountableAtoms, FiniteAtoms, GeometricWeights, Piece, brute_subset_values,
    brute_variation, check_absolutely_continuous, check_singular, evaluate, singleton_family,
    variation,
)
from lmeas.regulators import (
    F_uniform_sbounded_check, finale_regulator, ideal_uniform_sbounded_check, nuovoschur_regulator,
    schur_regulator, uniform_sbounded_check,
)

rats = st.fractions(min_value=-8, max_value=8, max_denominator=12)
pos_rats = st.fractions(min_value=0, max_value=8, max_denominator=12)
ratios = st.sampled_from([Q(1, 2), Q(1, 3), Q(2, 3), Q(3, 4)])


def vecs(dim, elems=rats):
    return st.lists(elems, min_size=dim, max_size=dim).map(Vec)


@st.composite
def vec_pairs(draw):
    d = draw(st.integers(1, 4))
    return draw(vecs(d)), draw(vecs(d))


@st.composite
def regulators(draw, dim=1, depth=3):
    base = draw(st.sampled_from(["harmonic", "geometric"]))
    c = draw(vecs(dim, pos_rats))
    r = Harmonic(c) if base == "harmonic" else Geometric(c, draw(ratios))
    for _ in range(draw(st.integers(0, depth))):
        op = draw(st.sampled_from(["scaled", "sum", "shifted", "capped"]))
        if op == "scaled":
            r = Scaled(r, draw(st.integers(0, 4)))
        elif op == "sum":
            r = Sum(r, Geometric(draw(vecs(dim, pos_rats)), draw(ratios)))
        elif op == "shifted":
            r = Shifted(r, draw(st.integers(0, 5)))
        else:
            r = Capped(r, draw(vecs(dim, pos_rats)))
    return r


descriptors = st.recursive(
    st.one_of(
        st.lists(st.integers(1, 60), max_size=6).map(lambda xs: Finite(tuple(xs))),
        st.tuples(st.integers(0, 6), st.integers(1, 6)).map(lambda t: ArithProg(t[0] % t[1], t[1])),
        st.integers(0, 4).map(DyadicValuation),
    ),
    lambda ch: st.one_of(ch.map(Complement), st.tuples(ch, ch).map(lambda t: Union(*t)),
                         st.tuples(ch, ch).map(lambda t: Intersection(*t))),
    max_leaves=5,
)

filters = st.sampled_from([Singletons(), Ranges(1, 0), Ranges(0, 2), DyadicValuationBlocks(),
                           TableWithTailRule((1, 2, 1, 3))])


@st.composite
def finite_charges(draw, max_atoms=12, dim=None):
    n = draw(st.integers(1, max_atoms))
    d = dim or draw(st.integers(1, 2))
    ws = draw(st.lists(vecs(d), min_size=n, max_size=n))
    return Charge(FiniteAtoms(n), d, tuple((i + 1, w) for i, w in enumerate(ws)))


@st.composite
def countable_charges(draw, with_charge=True):
    atoms = draw(st.lists(st.tuples(st.integers(1, 30), vecs(1)), max_size=5))
    fams = draw(st.lists(st.tuples(vecs(1), ratios).map(lambda t: GeometricWeights(*t)), max_size=2))
    cuts = sorted(set(draw(st.lists(st.integers(0, 8), min_size=2, max_size=4))))
    pieces = tuple(Piece(Q(a, 8), Q(b, 8), draw(vecs(1))) for a, b in zip(cuts, cuts[1:]))
    inf = None
    if with_charge and draw(st.booleans()):
        inf = AtInfinity(draw(vecs(1)), draw(filters))
    return Charge(CountableAtoms, 1, tuple(atoms), tuple(fams), pieces, inf)


# lattice


@given(vec_pairs())
def test_lattice_operations_preserve_dim_and_order(ab):
    a, b = ab
    for x in (a.sup(b), a.inf(b), abs(a), a + b, a.scale(3)):
        assert x.dim == a.dim
    assert a.inf(b) <= a <= a.sup(b)
    assert Vec.zero(a.dim) <= abs(a)
    assert abs(a + b) <= abs(a) + abs(b)


@given(regulators(), st.integers(1, 1000))
def test_regulators_decrease_and_stay_nonnegative(r, n):
    assert r.eval(n + 1) <= r.eval(n)
    assert Vec.zero(1) <= r.eval(n)


@given(regulators(), regulators(), st.integers(1, 300))
def test_regulator_arithmetic_stays_valid(a, b, n):
    for p in (schur_regulator(a, b), finale_regulator(a, b)):
        assert p.eval(n + 1) <= p.eval(n) and Vec.zero(1) <= p.eval(n)


@given(st.fractions(min_value=Q(1, 1000), max_value=1), st.integers(0, 8))
def test_nuovoschur_regulator_valid(u, seed):
    q = Geometric(Vec([1]), Q(1, 2))
    r = nuovoschur_regulator(q, Geometric(Vec([1]), Q(1, 3)), Vec([u]))
    for n in range(1, 40):
        assert r.eval(n + 1) <= r.eval(n)


# descriptors and filters


@given(descriptors)
def test_descriptor_text_roundtrip(d):
    text = S.dump_descriptor(d)
    assert S.dump_descriptor(S.load_descriptor(S.parse_one(text))) == text


@given(descriptors, descriptors, st.integers(1, 500))
def test_boolean_laws_pointwise(a, b, n):
    assert Union(a, b).contains(n) == (a.contains(n) or b.contains(n))
    assert Complement(Intersection(a, b)).contains(n) == Union(Complement(a), Complement(b)).contains(n)


@given(filters, st.lists(st.integers(1, 200), max_size=8))
def test_finite_sets_lie_in_the_ideal(f, xs):
    assert in_ideal(f, Finite(tuple(xs)), 24).is_holds


@given(filters, descriptors)
def test_ideal_is_closed_under_complement_exclusivity(f, d):
    a, b = in_ideal(f, d, 24), in_ideal(f, Complement(d), 24)
    assert not (a.is_holds and b.is_holds)


@given(filters, descriptors, descriptors)
def test_ideal_is_closed_under_union(f, a, b):
    if in_ideal(f, a, 24).is_holds and in_ideal(f, b, 24).is_holds:
        assert not in_ideal(f, Union(a, b), 24).is_fails


@given(st.lists(rats, min_size=1, max_size=6), st.integers(6, 12))
def test_failures_are_monotone_in_depth(head, depth):
    c = max(abs(h) for h in head)
    env = Geometric(Vec([c * 2 ** len(head)]), Q(1, 2))
    x = Sequence(lambda k: Vec([head[k - 1] if k <= len(head) else 0]), envelope=env)
    r = Geometric(Vec([1]), Q(1, 2))
    if o_convergence_check(x, Vec([0]), r, depth).is_fails:
        assert o_convergence_check(x, Vec([0]), r, depth + 5).is_fails
    assert filter_o_convergence(Singletons(), x, Vec([0]), r, depth).is_holds


# measures


@given(finite_charges())
def test_variation_equals_brute_force(m):
    plus, minus = brute_variation(m, NATURALS)
    assert variation(m, NATURALS, 20, "plus").partial == plus
    assert variation(m, NATURALS, 20, "minus").partial == minus
    assert variation(m, NATURALS, 20).partial == plus + minus


@given(finite_charges(max_atoms=8))
def test_evaluate_matches_every_subset(m):
    vals = brute_subset_values(m)
    n = m.space.n
    for mask in range(1 << n):
        A = Finite(tuple(k + 1 for k in range(n) if (mask >> k) & 1))
        assert evaluate(m, A, 10).partial == vals[mask]


@given(countable_charges(with_charge=False), descriptors, st.integers(0, 8))
def test_evaluate_is_finitely_additive(m, A, cut):
    seg = Segment(((0, Q(cut, 8)),)) if cut else Segment(())
    R = Region(A, seg)
    total = evaluate(m, WHOLE, 24)
    a, b = evaluate(m, R, 24), evaluate(m, ~R, 24)
    split = a + b
    assert split.lower <= total.upper and total.lower <= split.upper
    if a.is_exact and b.is_exact and total.is_exact:
        assert split.partial == total.partial


@given(countable_charges(with_charge=False), st.integers(1, 1000))
def test_tail_envelope_is_sound(m, k):
    assert abs(m.weight(k)) <= m.envelope(k)


@given(countable_charges(with_charge=False), st.integers(1, 20))
def test_sigma_additivity_along_singletons(m, J):
    whole = evaluate(m, NATURALS, 40)
    head = sum((m.weight(k) for k in range(1, J)), Vec.zero(1))
    tail = evaluate(m, Complement(Finite(tuple(range(1, J)))), 40)
    assert head + tail.lower <= whole.upper and whole.lower <= head + tail.upper


# decompositions


@given(finite_charges(max_atoms=10, dim=1), st.lists(st.sampled_from([0, 0, Q(1, 3), 1, 2]), min_size=10, max_size=10))
def test_lebesgue_parts_resum_and_certify(m, nus):
    nu = Charge(m.space, 1, tuple((k, Vec([nus[k - 1]])) for k in range(1, m.space.n + 1)))
    d = lebesgue_decompose(m, nu, 12)
    assert d.certificates["absolutely_continuous"].is_holds
    assert d.certificates["singular"].is_holds
    vals, a, b = brute_subset_values(m), brute_subset_values(d.partA), brute_subset_values(d.partB)
    assert all(x == y + z for x, y, z in zip(vals, a, b))
    again = lebesgue_decompose(d.partA, nu, 12)
    assert again.partA == d.partA and again.partB.is_zero()


@given(finite_charges(max_atoms=6, dim=1), st.lists(st.sampled_from([0, 1]), min_size=6, max_size=6))
def test_continuity_and_singularity_are_exclusive_for_nonzero_parts(m, nus):
    nu = Charge(m.space, 1, tuple((k, Vec([nus[k - 1]])) for k in range(1, m.space.n + 1)))
    assume(not m.is_zero())
    ac, sg = check_absolutely_continuous(m, nu, 8), check_singular(m, nu, 8)
    assert not (ac.is_holds and sg.is_holds)


@given(countable_charges())
def test_decompositions_resum_on_sampled_sets(m):
    samples = [Finite((1, 2, 5)), Complement(Finite((3,))), NATURALS]
    try:
        sh = sobczyk_hammer_decompose(m, 16)
        yh = yosida_hewett_decompose(m, 16)
    except AssertionError:
        raise
    for A in samples:
        assert sh.resums(m, A, 24) and yh.resums(m, A, 24)
    assert sobczyk_hammer_decompose(sh.partA, 16).partB.is_zero()
    assert yosida_hewett_decompose(yh.partB, 16).partA.is_zero()


@given(countable_charges(), st.integers(1, 200))
def test_charge_part_vanishes_on_singletons(m, k):
    assert evaluate(m.charge_part(), Finite((k,)), 16).partial.is_zero()


# uniformity implication lattice


@given(st.lists(st.tuples(st.integers(1, 12), st.integers(0, 3)), min_size=1, max_size=6), filters)
def test_uniform_implies_F_uniform_and_ideal_uniform(spec, f):
    ms = [Charge(CountableAtoms, 1, ((k, Vec([Q(1, 2 ** e)])),)) for k, e in spec]
    r = Geometric(Vec([4]), Q(1, 2))
    H = singleton_family()
    uni = uniform_sbounded_check(ms, H, r, 12).verdict
    Fu = F_uniform_sbounded_check(ms, f, H, r, 12).verdict
    iu = ideal_uniform_sbounded_check(ms, f, H, r, [Finite(tuple(range(1, 7)))], 12).verdict
    if uni.is_holds:
        assert Fu.is_holds and iu.is_holds
    if Fu.is_fails:
        assert uni.is_fails
