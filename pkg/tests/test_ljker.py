import random

import pytest

from corpus import proof_corpus, similar_copy
from ljindex.formulas import FArrow, FAtom, FStar, Hypothesis, relocate, restrict
from ljindex.indices import IndexMap, IndexSet, iset
from ljindex.ljker import (
    Ax,
    Elim,
    KernelError,
    ProofViolation,
    Sequent,
    StarAx,
    axiom,
    check_proof,
    elim,
    empty_proof,
    extract_term,
    id_hyp,
    intro,
    proof_ok,
    relocate_proof,
    restrict_proof,
    sim_conversion,
    starax,
    subst_into_single,
    subst_single,
    weaken,
)
from ljindex.relmodel import Atom
from ljindex.terms import BOT, app, lam, omega_normalize, subst, var

CORPUS = proof_corpus(11, 60)


def test_axiom_and_starax():
    A = FStar(iset(1, 2))
    check_proof(axiom([id_hyp(A)], 1))
    check_proof(StarAx(Sequent((), FStar(iset()))))
    assert extract_term(axiom([id_hyp(A)], 1), ["x"]) == var("x")
    assert extract_term(starax([]), []) == BOT


def test_identity_proof():
    A = FStar(iset(1))
    ident = intro([], axiom([id_hyp(A)], 1))
    check_proof(ident)
    assert extract_term(ident, []) == lam("x", var("x"))


def test_axiom_map_must_be_a_bijection():
    A = FAtom("a", {1: Atom("p"), 2: Atom("p")})
    moved = Ax(Sequent((Hypothesis(A, IndexMap({1: 3, 2: 4})),), FAtom("a", {3: Atom("p"), 4: Atom("p")})), 1)
    check_proof(moved)
    glued = Ax(Sequent((Hypothesis(A, IndexMap({1: 3, 2: 3})),), FAtom("a", {3: Atom("p")})), 1)
    with pytest.raises(ProofViolation) as e:
        check_proof(glued)
    assert e.value.path == ("ax1",)


def test_elim_with_mutated_map_is_rejected():
    X = FStar(iset(5, 6))
    A = FArrow(X, IndexMap({5: 1, 6: 2}), FStar(iset(1, 2)))
    E0 = Hypothesis(restrict(A, iset()), IndexMap())
    X0 = Hypothesis(FStar(iset()), IndexMap())
    two = [id_hyp(A), Hypothesis(X, IndexMap({5: 1, 6: 2}))]
    good = elim(two, axiom([id_hyp(A), X0], 1), axiom([E0, id_hyp(X)], 2))
    check_proof(good)
    assert extract_term(good, ["f", "x"]) == app(var("f"), var("x"))
    bad_hyps = (good.seq.hyps[0], Hypothesis(X, IndexMap({5: 1, 6: 1})))
    bad = Elim(Sequent(bad_hyps, good.seq.concl), good.fun, good.arg, good.splits)
    with pytest.raises(ProofViolation) as e:
        check_proof(bad)
    assert e.value.path == ("elim",)


@pytest.mark.parametrize("k", range(0, 60, 3))
def test_weakening_everywhere(k):
    names, _, pi, _ = CORPUS[k]
    for pos in range(1, len(names) + 2):
        B = restrict(FStar(iset()), iset())
        out = weaken(pi, B, pos)
        check_proof(out)
        wide = names[: pos - 1] + ["dummy"] + names[pos - 1 :]
        assert extract_term(out, wide) == extract_term(pi, names)
    with pytest.raises(KernelError):
        weaken(pi, FStar(iset(1)), 1)


@pytest.mark.parametrize("k", range(60))
def test_relocation(k):
    names, seq, pi, _ = CORPUS[k]
    rng = random.Random(k)
    src = sorted(seq.concl.dom)
    u = IndexMap(zip(src, rng.sample(range(7000, 7100), len(src))))
    out = relocate_proof(pi, u)
    check_proof(out)
    assert out.seq.concl == relocate(u, seq.concl)
    assert extract_term(out, names) == extract_term(pi, names)
    back = relocate_proof(out, u.inverse())
    assert back.seq == pi.seq


@pytest.mark.parametrize("k", range(60))
def test_restriction(k):
    names, seq, pi, _ = CORPUS[k]
    rng = random.Random(k)
    dom = sorted(seq.concl.dom)
    for J in (dom, [], rng.sample(dom, rng.randint(0, len(dom)))):
        out = restrict_proof(pi, J)
        check_proof(out)
        assert out.seq.concl.dom == IndexSet(J)
        assert extract_term(out, names) == extract_term(pi, names)


@pytest.mark.parametrize("k", range(0, 60, 2))
def test_substitution_of_similar_hypothesis(k):
    names, seq, mu, _ = CORPUS[k]
    for i, h in enumerate(seq.hyps, start=1):
        B = similar_copy(h.formula, seed=k + i)
        rho = sim_conversion(B, h.formula)
        out = subst_single(mu, rho, i)
        check_proof(out)
        xi = names[i - 1]
        assert out.seq.hyps[i - 1].formula == B
        expected = subst(extract_term(mu, names), xi, extract_term(rho, [xi]))
        assert extract_term(out, names) == expected


@pytest.mark.parametrize("k", range(1, 60, 2))
def test_substitution_into_conversion(k):
    names, seq, rho, _ = CORPUS[k]
    C = similar_copy(seq.concl, seed=k)
    mu = sim_conversion(seq.concl, C)
    out = subst_into_single(mu, rho)
    check_proof(out)
    assert out.seq.concl == C
    expected = subst(extract_term(mu, ["x"]), "x", extract_term(rho, names))
    assert extract_term(out, names) == expected


def test_sim_conversion_examples():
    A = FArrow(FStar(iset(3)), IndexMap({3: 1}), FStar(iset(1)))
    B = FArrow(FStar(iset(8)), IndexMap({8: 1}), FStar(iset(1)))
    pi = sim_conversion(A, B)
    check_proof(pi)
    assert pi.seq.hyps == (id_hyp(A),) and pi.seq.concl == B
    assert proof_ok(sim_conversion(FStar(iset(1)), FStar(iset(1))))
    star_to_arrow = sim_conversion(FStar(iset()), restrict(A, iset()))
    check_proof(star_to_arrow)
    with pytest.raises(KernelError):
        sim_conversion(FStar(iset(1)), FStar(iset(2)))


def test_empty_proofs():
    A = restrict(FArrow(FStar(iset(3)), IndexMap({3: 1}), FStar(iset(1))), iset())
    for hyps, concl in (([], FStar(iset())), ([A], A), ([FStar(iset()), A], FStar(iset()))):
        pi = empty_proof(hyps, concl)
        check_proof(pi)
        names = [f"x{j}" for j in range(len(hyps))]
        assert omega_normalize(extract_term(pi, names)) == BOT
    with pytest.raises(KernelError):
        empty_proof([], FStar(iset(1)))
