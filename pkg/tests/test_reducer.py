import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3gw.cohomology import (FAMILY_NAMES, CohClass, SingularGramError, build_basis, diagonal_model,
                             e8_cartan, family_choice, random_unimodular_model, CohBasis)
from k3gw.reducer import (FAMILY, ORDINARY, Correlator, Insertion, PolyInD, a_squared, class_dot_A,
                          reduce, reduce_product)
from k3gw.trr import (TRR_TERMS, Summand, completeness_poly, eval_pf_trr,
                      eval_trr_rhs, parse_product, pf_trr2_check, pf_trr3_value, expected_closed_form)


@pytest.fixture(scope="module")
def basis():
    return build_basis()


def _det(m):
    a = [[Fraction(x) for x in row] for row in m]
    n, det = len(a), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            k = a[r][c] / a[c][c]
            a[r] = [x - k * y for x, y in zip(a[r], a[c])]
    return det


def test_e8_is_unimodular_even():
    c = e8_cartan()
    assert _det(c) == 1
    assert all(c[i][i] % 2 == 0 for i in range(8))


def test_basis_shape(basis):
    assert len(basis.classes) == 24
    assert [c.degree for c in basis.classes] == [0] + [2] * 22 + [4]
    g = basis.gram
    assert all(g[i][j] == g[j][i] for i in range(24) for j in range(24))
    assert _det(basis.gram22) == -1
    assert all(basis.gram22[i][i] % 2 == 0 for i in range(22))


def test_section_and_fiber_pairings(basis):
    assert basis.pair(basis.s, basis.f) == 1
    assert basis.pair(basis.s, basis.s) == -2
    assert basis.pair(basis.f, basis.f) == 0


def test_dual_basis(basis):
    for a, h in enumerate(basis.classes):
        for b, hd in enumerate(basis.duals):
            assert basis.pair(h, hd) == (a == b)


def test_euler_trace(basis):
    assert basis.euler_trace() == 24


def _random_deg2(rng, r):
    return CohClass(Fraction(0), tuple(Fraction(rng.randint(-5, 5)) for _ in range(r)), Fraction(0))


def test_completeness_random_classes(basis):
    rng = random.Random(50)
    for _ in range(50):
        x, y = _random_deg2(rng, 22), _random_deg2(rng, 22)
        total = sum(basis.pair(h, x) * basis.pair(hd, y) for h, hd in zip(basis.classes, basis.duals))
        assert total == basis.pair(x, y)


def test_singular_gram_rejected():
    with pytest.raises(SingularGramError):
        CohBasis([[0, 0], [0, 0]], [1, 0], [0, 1])


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_family_pairings(basis, name):
    fam = family_choice(name, basis)
    assert class_dot_A(fam.F, fam, basis) == PolyInD.const(2)
    assert a_squared(fam, basis) == PolyInD([-8, 4])
    assert completeness_poly(fam, basis) == PolyInD([-8, 4])


def test_poly_in_d_string_and_eval():
    p = PolyInD([Fraction(4, 9), Fraction(-4, 9), Fraction(1, 9)])
    assert str(p) == "1/9*d^2 - 4/9*d + 4/9"
    assert p(2) == 0 and p(5) == 1
    assert str(PolyInD()) == "0"
    assert str(PolyInD([0, -1])) == "-d"
    assert p * PolyInD([1, 1]) == PolyInD([Fraction(4, 9), 0, Fraction(-1, 3), Fraction(1, 9)])


def _ins(*classes, level=0):
    return tuple(Insertion(c, level) for c in classes)


def test_ordinary_genus0_two_insertions_vanish(basis):
    fam = family_choice("2s,f", basis)
    for h in basis.classes:
        c = Correlator(ORDINARY, 0, _ins(fam.F, h))
        assert reduce(c, fam, basis).is_zero()


def test_ordinary_genus0_triple_intersection(basis):
    fam = family_choice("2s,f", basis)
    c = Correlator(ORDINARY, 0, _ins(basis.unit, basis.s, basis.f))
    assert reduce(c, fam, basis).scalar == PolyInD.const(1)
    c = Correlator(ORDINARY, 0, _ins(basis.s, basis.s, basis.f))
    assert reduce(c, fam, basis).is_zero()


def test_ordinary_genus1_vanishes_on_k3(basis):
    fam = family_choice("2s,f", basis)
    for h in basis.classes:
        assert reduce(Correlator(ORDINARY, 1, _ins(h)), fam, basis).is_zero()


def test_ordinary_genus2_descendant_rules(basis):
    fam = family_choice("2s,f", basis)
    for h in basis.classes:
        c = Correlator(ORDINARY, 2, (Insertion(fam.F, 1), Insertion(h)))
        assert reduce(c, fam, basis).is_zero()
        assert reduce(Correlator(ORDINARY, 2, (Insertion(h, 1),)), fam, basis).is_zero()
    c = Correlator(ORDINARY, 2, _ins(basis.s, basis.f))
    assert not reduce(c, fam, basis).fully_reduced


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_family_divisor_rule(basis, name):
    fam = family_choice(name, basis)
    trace = Counter()
    v = reduce(Correlator(FAMILY, 1, _ins(fam.F, fam.F, basis.point)), fam, basis, trace)
    assert v.gw1pt == PolyInD.const(4) and not v.gw0
    assert trace["divisor"] == 2 and trace["atom-gw1pt"] == 1


def test_family_vanishing_rules(basis):
    fam = family_choice("2s,f", basis)
    assert reduce(Correlator(FAMILY, 1, _ins(basis.unit, basis.point)), fam, basis).is_zero()
    assert reduce(Correlator(FAMILY, 0, _ins(fam.F, basis.point)), fam, basis).is_zero()
    v = reduce(Correlator(FAMILY, 0, _ins(basis.s, basis.s)), fam, basis)
    # s . (2s + d f) = -4 + d
    assert v.gw0 == PolyInD([-4, 1]) * PolyInD([-4, 1])
    assert not reduce(Correlator(FAMILY, 2, (Insertion(fam.F, 1),)), fam, basis).fully_reduced


def test_inhomogeneous_insertions_split(basis):
    fam = family_choice("2s,f", basis)
    mixed = basis.unit + basis.point
    v = reduce(Correlator(FAMILY, 1, _ins(fam.F, mixed)), fam, basis)
    assert v.gw1pt == PolyInD.const(2)


@given(st.permutations(range(5)), st.integers(0, 23), st.integers(0, 23))
def test_reduce_is_permutation_invariant(perm, i, j):
    basis = _BASIS
    fam = family_choice("s-3f,2f", basis)
    items = [fam.F, basis.classes[i], basis.duals[i], basis.classes[j], basis.duals[j]]
    base = Correlator(FAMILY, 1, _ins(*items))
    shuffled = Correlator(FAMILY, 1, _ins(*[items[k] for k in perm]))
    a, b = reduce(base, fam, basis), reduce(shuffled, fam, basis)
    # irreducible pieces keep their own insertion order in the printed label
    assert (a.scalar, a.gw1pt, a.gw0, a.fully_reduced) == (b.scalar, b.gw1pt, b.gw0, b.fully_reduced)
    with_pt = [items[k] for k in perm[:4]] + [basis.point]
    v1 = reduce(Correlator(FAMILY, 1, _ins(*with_pt)), fam, basis)
    v2 = reduce(Correlator(FAMILY, 1, _ins(*reversed(with_pt))), fam, basis)
    assert v1 == v2 and v1.fully_reduced
    o1 = Correlator(ORDINARY, 0, _ins(*items[:3]))
    o2 = Correlator(ORDINARY, 0, _ins(*[items[:3][k] for k in (2, 0, 1)]))
    assert reduce(o1, fam, basis) == reduce(o2, fam, basis)


_BASIS = build_basis()


def test_product_zero_beats_irreducible(basis):
    fam = family_choice("2s,f", basis)
    irreducible = Correlator(FAMILY, 2, (Insertion(basis.point, 1),))
    zero = Correlator(ORDINARY, 0, _ins(fam.F, fam.F, basis.unit))
    assert reduce_product([irreducible, zero], fam, basis).is_zero()
    stuck = Correlator(ORDINARY, 2, _ins(basis.s, basis.f))
    v = reduce_product([stuck, zero], fam, basis)
    assert v.is_zero()
    v = reduce_product([stuck, irreducible], fam, basis, source="X")
    assert v.irreducible_terms and v.irreducible_terms[0][0] == "X"


def test_trr_table_has_24_summands():
    assert len(TRR_TERMS) == 24
    coeffs = [t.coeff for t in TRR_TERMS]
    for c in (2, 3, Fraction(13, 10), Fraction(8, 5), Fraction(4, 5), Fraction(23, 240), Fraction(2, 48),
              Fraction(1, 80), Fraction(7, 30), Fraction(2, 30), Fraction(1, 30), Fraction(1, 576)):
        assert c in coeffs or -c in coeffs
    for t in TRR_TERMS:
        for p in t.products:
            factors = parse_product(p)
            assert sum(1 for f in factors if f[0] == FAMILY) == 1


def test_parse_product_errors():
    with pytest.raises(ValueError):
        parse_product("fam1(G)")
    with pytest.raises(ValueError):
        parse_product("junk fam1(F)")


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_full_trr_evaluation(name):
    ev = eval_trr_rhs(name)
    want = expected_closed_form()
    assert ev.total.fully_reduced
    assert ev.total.gw1pt == PolyInD.const(Fraction(-2, 3))
    assert ev.total.gw0 == PolyInD([4, -4, 1]) * Fraction(1, 9) == want.gw0
    assert sorted(c for _, c, _ in ev.survivors) == sorted([Fraction(-1, 80), Fraction(1, 15), Fraction(1, 576)])
    assert {lbl for lbl, _, _ in ev.survivors} == {"T20a", "T22b", "T24"}
    assert ev.rules["divisor"] > 0 and ev.rules["ord-g0-selection"] > 0


def test_pf_trr_intermediates(basis):
    fam = family_choice("2s,f", basis)
    pf2 = pf_trr2_check(fam, basis)
    assert pf2.sub_sums == (PolyInD.const(Fraction(-6, 5)), PolyInD.const(Fraction(8, 15)))
    assert pf2.total == PolyInD.const(Fraction(-2, 3)) and pf2.ok
    pf3 = pf_trr3_value(fam, basis)
    assert pf3.gw0 == PolyInD([-8, 4]) * PolyInD([-8, 4]) * Fraction(4, 576)
    assert eval_pf_trr(fam, basis).total == eval_trr_rhs(fam, basis).total


@pytest.mark.parametrize("model", [diagonal_model, lambda: random_unimodular_model(7, steps=25)])
def test_basis_independence(model):
    alt = model()
    assert alt.euler_trace() == 24
    assert alt.pair(alt.s, alt.s) == -2 and alt.pair(alt.s, alt.f) == 1 and alt.pair(alt.f, alt.f) == 0
    ref = eval_trr_rhs("2s,f").total
    got = eval_trr_rhs("s-3f,2f", alt).total
    assert got == ref


def test_corrupted_table_is_detected():
    bad = list(TRR_TERMS)
    bad[-1] = Summand(Fraction(1, 575), bad[-1].products)
    ev = eval_trr_rhs("2s,f", terms=bad)
    assert ev.total.gw0 != expected_closed_form().gw0
