import random

import pytest
from hypothesis import given, settings, strategies as st

from ljindex.formulas import (
    FArrow,
    FAtom,
    FormulaError,
    FStar,
    Hypothesis,
    expand_spine,
    hyp_family,
    relocate,
    represent,
    restrict,
    similar,
    underlying_type,
)
from ljindex.indices import Allocator, FrozenMap, IndexDataError, IndexMap, IndexSet, Multiset, iset, mset
from ljindex.relmodel import STAR, Atom, enumerate_dinf, enumerate_points, pt
from ljindex.terms import TArrow, TAtom

p, q = Atom("p"), Atom("q")
alpha = TAtom("a")
CARRIERS = {"a": ("p", "q")}
DPOINTS = enumerate_dinf(3)


def test_dom_and_fam():
    A = FStar(iset(1, 2))
    assert A.dom == iset(1, 2) and A.fam == {1: STAR, 2: STAR}
    B = FAtom("a", {1: p})
    assert B.dom == iset(1) and B.fam[1] == p
    C = FArrow(FStar(iset(5)), IndexMap({5: 1}), FStar(iset(1)))
    assert C.fam[1] == pt([STAR], STAR)


def test_arrow_map_must_be_total():
    with pytest.raises(FormulaError):
        FArrow(FStar(iset(5, 6)), IndexMap({5: 1}), FStar(iset(1)))
    with pytest.raises(FormulaError):
        FArrow(FStar(iset(5)), IndexMap({5: 2}), FStar(iset(1)))


def test_hyp_family():
    A = FAtom("a", {1: p, 2: p})
    assert hyp_family(Hypothesis(A, IndexMap({1: 7, 2: 7})), 7) == mset(p, p)
    assert hyp_family(Hypothesis(A, IndexMap({1: 7, 2: 8})), 8) == mset(p)
    assert hyp_family(Hypothesis(FStar(iset()), IndexMap()), 3) == Multiset()


def random_formula(rng: random.Random, typed: bool = False):
    J = IndexSet(rng.sample(range(1, 9), rng.randint(0, 3)))
    if typed:
        ty = rng.choice([alpha, TArrow(alpha, alpha), TArrow(TArrow(alpha, alpha), alpha)])
        pts = enumerate_points(ty, 3, CARRIERS)
        return represent(ty, J, {j: rng.choice(pts) for j in J}, Allocator(seed=rng.randint(0, 99)), CARRIERS)
    return represent(None, J, {j: rng.choice(DPOINTS) for j in J}, Allocator(seed=rng.randint(0, 99)))


seeds = st.integers(0, 2**32)


@given(seeds, st.booleans())
def test_restrict_laws(seed, typed):
    rng = random.Random(seed)
    A = random_formula(rng, typed)
    J = IndexSet(rng.sample(range(1, 9), rng.randint(0, 4)))
    R = restrict(A, J)
    assert R.dom == A.dom & J
    assert R.fam == {j: A.fam[j] for j in A.dom & J}
    assert restrict(A, A.dom) == A
    assert not restrict(A, iset()).dom
    assert underlying_type(R) == underlying_type(A)


@given(seeds, st.booleans())
def test_relocate_laws(seed, typed):
    rng = random.Random(seed)
    A = random_formula(rng, typed)
    src = sorted(A.dom)
    u = IndexMap(zip(src, rng.sample(range(20, 40), len(src))))
    B = relocate(u, A)
    assert B.dom == u.image()
    assert all(B.fam[u[j]] == A.fam[j] for j in src)
    assert relocate(u.inverse(), B) == A
    assert relocate(IndexMap({j: j for j in src}), A) == A


def test_relocate_atom():
    assert relocate(IndexMap({1: 9}), FAtom("a", {1: p})) == FAtom("a", {9: p})
    with pytest.raises(IndexDataError):
        relocate(IndexMap({1: 9, 2: 9}), FAtom("a", {1: p, 2: q}))


def test_similar():
    A = FArrow(FStar(iset(3)), IndexMap({3: 1}), FStar(iset(1)))
    B = FArrow(FStar(iset(8)), IndexMap({8: 1}), FStar(iset(1)))
    assert similar(A, A) and similar(A, B)
    assert not similar(FStar(iset(1)), FStar(iset(2)))
    assert not similar(FAtom("a", {}), FAtom("b", {}))


def test_represent_examples():
    assert represent(None, iset(1, 2), {1: STAR, 2: STAR}, Allocator()) == FStar(iset(1, 2))
    assert represent(None, iset(), {}, Allocator()) == FStar(iset())
    assert represent(alpha, iset(), {}, Allocator()) == FAtom("a", {})
    with pytest.raises(FormulaError):
        represent(alpha, iset(1), {1: STAR}, Allocator(), CARRIERS)


@settings(max_examples=200)
@given(seeds, st.booleans())
def test_represent_round_trip(seed, typed):
    rng = random.Random(seed)
    J = IndexSet(rng.sample(range(1, 9), rng.randint(0, 3)))
    if typed:
        ty = TArrow(TArrow(alpha, alpha), alpha)
        pts = enumerate_points(ty, 3, CARRIERS)
    else:
        ty, pts = None, DPOINTS
    f = FrozenMap((j, rng.choice(pts)) for j in J)
    A = represent(ty, J, f, Allocator(seed=1), CARRIERS if typed else None)
    B = represent(ty, J, f, Allocator(seed=2), CARRIERS if typed else None)
    assert A.dom == J and A.fam == f
    assert similar(A, B)
    if typed:
        assert underlying_type(A) == ty


def test_empty_domain_arrow_has_empty_parts():
    rng = random.Random(0)
    for _ in range(50):
        A = restrict(random_formula(rng), iset())
        while isinstance(A, FArrow):
            assert not A.arg.dom and not A.map
            A = A.res


def test_expand_spine_keeps_family():
    A = FStar(iset(1, 2))
    E = expand_spine(A, 2)
    assert E.dom == A.dom and E.fam == A.fam
    assert isinstance(E, FArrow) and isinstance(E.res, FArrow)
    with pytest.raises(FormulaError):
        expand_spine(FAtom("a", {}), 1)
