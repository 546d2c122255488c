"""Acceptance criteria, one timed check per criterion.

Each check prints ``criterion N: PASS|FAIL (...)``; the lines are repeated in the
pytest terminal summary.  Run ``python3 tests/test_acceptance.py`` to get the
lines without pytest.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CARRIERS, church_mutations, family_corpus, proof_corpus, similar_copy  # noqa: E402
from ljindex.church import ChurchViolation, check_church, erase, is_term, to_church  # noqa: E402
from ljindex.formulas import expand_spine, hyp_family, represent, restrict, similar, underlying_type  # noqa: E402
from ljindex.indices import Allocator, FrozenMap, IndexMap, IndexSet, mset_sum  # noqa: E402
from ljindex.itsys import derivation_ok, judgment_set, search  # noqa: E402
from ljindex.ljker import (  # noqa: E402
    Elim,
    Intro,
    extract_term,
    proof_ok,
    relocate_proof,
    restrict_proof,
    sim_conversion,
    subst_into_single,
    subst_single,
    weaken,
)
from ljindex.relmodel import category_laws, dinfr_size, enumerate_dinf, enumerate_points, finset, random_morphism  # noqa: E402
from ljindex.terms import (  # noqa: E402
    BOT,
    App,
    Lam,
    TArrow,
    TAtom,
    app,
    eta_equivalent,
    free_vars,
    fresh_name,
    lam,
    open_,
    qproj_member,
    qprojo_member,
    size,
    subst,
    type_depth,
    var,
)
from ljindex.xlate import FamilyTyping, check_scaffold, complete_family, soundness  # noqa: E402

RESULTS: dict[int, str] = {}


def _record(n: int, fn) -> None:
    t0 = time.perf_counter()
    try:
        detail = fn()
    except AssertionError as e:
        line = f"criterion {n}: FAIL ({time.perf_counter() - t0:.1f}s) {e}"
        RESULTS[n] = line
        print(line)
        raise
    line = f"criterion {n}: PASS ({time.perf_counter() - t0:.1f}s) {detail}"
    RESULTS[n] = line
    print(line)


def _timed(limit: float, t0: float, what: str) -> None:
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"{what} took {elapsed:.1f}s, limit {limit}s"


_PROOFS: list | None = None


def corpus_proofs() -> list:
    global _PROOFS
    if _PROOFS is None:
        _PROOFS = proof_corpus(2024, 240)
    return _PROOFS


# -- 1. category laws ---------------------------------------------------------------------


def criterion_1() -> str:
    t0 = time.perf_counter()
    rng = random.Random(1)
    n = 1000
    for _ in range(n):
        objs = [finset(range(rng.randint(1, 3)), f"X{k}") for k in range(4)]
        r, s, t = (random_morphism(rng, objs[k], objs[k + 1], max_card=3) for k in range(3))
        laws = category_laws(r, s, t)
        assert all(laws.values()), f"law failure {laws}"
    _timed(10, t0, "category laws")
    return f"{n} triples"


# -- 2. representation ---------------------------------------------------------------------


def _random_type(rng: random.Random, depth: int):
    a = TAtom("a")
    if depth == 0 or rng.random() < 0.3:
        return a
    return TArrow(_random_type(rng, depth - 1), _random_type(rng, depth - 1))


def criterion_2() -> str:
    t0 = time.perf_counter()
    rng = random.Random(2)
    pool = [p for p in enumerate_dinf(4) if dinfr_size(p) <= 3]
    cases = [(None, pool, None)] * 500
    types = []
    while len(types) < 3:
        ty = _random_type(rng, 3)
        if type_depth(ty) <= 3 and ty not in types:
            types.append(ty)
    for ty in types:
        cases += [(ty, enumerate_points(ty, 3, CARRIERS), CARRIERS)] * 60
    for ty, pts, carriers in cases:
        J = IndexSet(rng.sample(range(1, 12), rng.randint(0, 4)))
        f = FrozenMap((j, rng.choice(pts)) for j in J)
        A = represent(ty, J, f, Allocator(seed=rng.randint(0, 10**6)), carriers)
        B = represent(ty, J, f, Allocator(seed=rng.randint(0, 10**6)), carriers)
        assert A.dom == J and A.fam == f, f"wrong dom/fam for {f}"
        assert similar(A, B), f"allocator seeds disagree on {f}"
        if ty is not None:
            assert underlying_type(A) == ty
    _timed(10, t0, "representation")
    return f"{len(cases)} families, types {[str(t) for t in types]}"


# -- 3. kernel transformations -------------------------------------------------------------


def criterion_3() -> str:
    proofs = corpus_proofs()
    t0 = time.perf_counter()
    rng = random.Random(3)
    checked = 0

    def ok(pi, term, names, what):
        nonlocal checked
        assert proof_ok(pi), f"{what}: output fails check_proof"
        assert extract_term(pi, names) == term, f"{what}: term equation fails"
        checked += 1

    for k, (names, seq, pi, _) in enumerate(proofs):
        t = extract_term(pi, names)
        pos = rng.randint(1, len(names) + 1)
        wide = names[: pos - 1] + ["w"] + names[pos - 1 :]
        ok(weaken(pi, restrict(seq.concl, IndexSet()), pos), t, wide, "weakening")
        src = sorted(seq.concl.dom)
        u = IndexMap(zip(src, rng.sample(range(7000, 7200), len(src))))
        ok(relocate_proof(pi, u), t, names, "relocation")
        J = rng.sample(src, rng.randint(0, len(src)))
        ok(restrict_proof(pi, J), t, names, "restriction")
        for i, h in enumerate(seq.hyps, start=1):
            rho = sim_conversion(similar_copy(h.formula, k + i), h.formula)
            xi = names[i - 1]
            expected = subst(t, xi, extract_term(rho, [xi]))
            ok(subst_single(pi, rho, i), expected, names, "substitution")
        mu = sim_conversion(seq.concl, similar_copy(seq.concl, k))
        expected = subst(extract_term(mu, ["x"]), "x", t)
        ok(subst_into_single(mu, pi), expected, names, "substitution into")
    _timed(60, t0, "kernel suite")
    return f"{len(proofs)} proofs, {checked} outputs"


# -- 4. soundness --------------------------------------------------------------------------


def _elim_identity(pi) -> None:
    """Pointwise: m_j(Eᵢ) = m_j(Cᵢ) + Σ_{k ∈ u⁻¹(j)} m_k(Dᵢ) at every elimination."""
    match pi:
        case Elim(seq, fun, arg, _):
            u = fun.seq.concl.map
            for j in seq.concl.dom:
                for E, C, D in zip(seq.hyps, fun.seq.hyps, arg.seq.hyps):
                    rhs = hyp_family(C, j) + mset_sum(hyp_family(D, k) for k in u.preimage({j}))
                    assert hyp_family(E, j) == rhs, f"elim multiset identity fails at {j}"
            _elim_identity(fun)
            _elim_identity(arg)
        case Intro(_, prem):
            _elim_identity(prem)


def criterion_4() -> str:
    count = 0
    for names, seq, pi, _ in corpus_proofs():
        _elim_identity(pi)
        G = soundness(pi, names)
        assert G.J == seq.concl.dom and G.subject == extract_term(pi, names)
        for d in G.derivs.values():
            assert derivation_ok(d, G.typed, CARRIERS), "soundness derivation fails itsys checking"
            count += 1
        check_scaffold(G, seq)
    return f"{len(corpus_proofs())} proofs, {count} derivations"


# -- 5. completeness -----------------------------------------------------------------------


def criterion_5() -> str:
    t0 = time.perf_counter()
    fams = family_corpus(55, 120)
    x, y = var("x"), var("y")
    for M in (BOT, lam("z", BOT), app(x, BOT, y), app(BOT, x)):
        names = tuple(sorted(free_vars(M)))
        fams.append(FamilyTyping(names, M, {}))
    typed = 0
    for k, F in enumerate(fams):
        assert size(F.subject) <= 6
        _, pi = complete_family(F, Allocator(seed=k))
        assert proof_ok(pi), f"completeness proof fails for {F.subject}"
        t = extract_term(pi, F.names)
        if F.typed:
            typed += 1
            assert eta_equivalent(t, F.subject), f"{t} is not η-equivalent to {F.subject}"
        else:
            assert qprojo_member(t, F.subject), f"{t} is not in Q°({F.subject})"
    _timed(120, t0, "completeness")
    return f"{len(fams)} families ({typed} typed)"


# -- 6. similarity -------------------------------------------------------------------------


def criterion_6() -> str:
    rng = random.Random(6)
    a = TAtom("a")
    types = [a, TArrow(a, a), TArrow(TArrow(a, a), a)]
    pairs = 0
    while pairs < 240:
        typed = pairs % 2 == 0
        J = IndexSet(rng.sample(range(1, 9), rng.randint(0, 3)))
        ty = rng.choice(types) if typed else None
        pts = enumerate_points(ty, 3, CARRIERS)
        f = {j: rng.choice(pts) for j in J}
        A = represent(ty, J, f, Allocator(seed=rng.randint(0, 999)), CARRIERS)
        B = represent(ty, J, f, Allocator(seed=rng.randint(0, 999)), CARRIERS)
        if not typed and rng.random() < 0.5:
            B = expand_spine(B, rng.randint(1, 2))
        assert similar(A, B)
        pi = sim_conversion(A, B)
        assert proof_ok(pi), "similarity proof fails check_proof"
        t = extract_term(pi, ["x"])
        if typed:
            assert eta_equivalent(t, var("x")), f"{t} is not η-equivalent to x"
        else:
            assert qproj_member(t, "x"), f"{t} is not in Q(x)"
        pairs += 1
    return f"{pairs} pairs"


# -- 7. β-invariance -----------------------------------------------------------------------

x, y, z = var("x"), var("y"), var("z")
I = lam("a", var("a"))
K = lam("a", lam("b", var("a")))
KI = lam("a", lam("b", var("b")))


def L(n, body):
    return lam(n, body)


a_, b_, f_ = var("a"), var("b"), var("f")

BETA_PAIRS = [
    (app(I, x), x),
    (app(I, I), I),
    (app(K, x), L("b", x)),
    (app(L("b", x), y), x),
    (app(L("a", app(a_, a_)), x), app(x, x)),
    (app(L("a", app(a_, y)), x), app(x, y)),
    (app(L("a", app(x, a_)), y), app(x, y)),
    (app(I, app(x, y)), app(x, y)),
    (app(x, app(I, y)), app(x, y)),
    (L("z", app(I, z)), L("z", z)),
    (app(L("a", L("b", app(a_, b_))), x), L("b", app(x, b_))),
    (app(L("a", L("b", app(b_, a_))), x), L("b", app(b_, x))),
    (app(I, BOT), BOT),
    (app(L("a", x), BOT), x),
    (app(L("a", BOT), x), BOT),
    (app(L("a", app(a_, x)), I), app(I, x)),
    (app(I, x, y), app(x, y)),
    (app(y, app(I, x)), app(y, x)),
    (app(L("a", app(a_, a_)), I), app(I, I)),
    (app(K, x, y), app(L("b", x), y)),
    (app(L("f", app(f_, y)), KI), app(KI, y)),
    (app(L("f", app(f_, y)), I), app(I, y)),
    (app(L("a", app(x, a_, a_)), y), app(x, y, y)),
    (app(I, L("b", app(x, b_))), L("b", app(x, b_))),
    (L("z", app(L("a", app(a_, z)), x)), L("z", app(x, z))),
    (app(K, BOT), L("b", BOT)),
    (app(x, app(I, BOT)), app(x, BOT)),
    (app(L("a", app(a_, BOT)), x), app(x, BOT)),
    (app(L("a", app(a_, BOT)), I), app(I, BOT)),
    (app(L("a", y), app(x, x)), y),
    (app(I, L("b", app(b_, b_))), L("b", app(b_, b_))),
    (app(L("a", app(a_, y, y)), x), app(x, y, y)),
    (L("z", app(L("a", z), x)), L("z", z)),
    (L("z", app(I, z, x)), L("z", app(z, x))),
    (app(KI, x), L("b", b_)),
    (app(KI, x, y), app(L("b", b_), y)),
    (app(L("a", L("b", app(a_, b_))), x, y), app(L("b", app(x, b_)), y)),
    (app(L("a", app(a_, app(a_, y))), x), app(x, app(x, y))),
    (app(L("a", app(x, app(a_, y))), z), app(x, app(z, y))),
    (app(K, y, x), app(L("b", y), x)),
    (app(L("a", app(a_, z)), L("b", app(x, b_))), app(L("b", app(x, b_)), z)),
    (app(L("a", x), I), x),
    (L("z", app(K, z)), L("z", L("b", z))),
    (app(L("a", app(y, a_)), app(x, z)), app(y, app(x, z))),
    (app(I, app(I, x)), app(I, x)),
    (app(x, app(K, y)), app(x, L("b", y))),
    (app(K, app(x, y)), L("b", app(x, y))),
    (app(x, L("a", app(I, a_))), app(x, L("a", a_))),
    (app(L("a", app(a_, x)), L("b", y)), app(L("b", y), x)),
    (app(L("a", x), y, z), app(x, z)),
]


def one_step_reducts(t):
    """All terms reachable from ``t`` by contracting exactly one β-redex."""
    match t:
        case App(f, a):
            if isinstance(f, Lam):
                yield open_(f.body, a)
            for g in one_step_reducts(f):
                yield App(g, a)
            for b in one_step_reducts(a):
                yield App(f, b)
        case Lam(body, hint, ty):
            n = fresh_name(hint, free_vars(t))
            for b in one_step_reducts(open_(body, var(n))):
                yield lam(n, b, ty)


def criterion_7() -> str:
    distinct = len(set(BETA_PAIRS))
    assert len(BETA_PAIRS) == 50 and distinct == 50, f"{distinct} distinct pairs listed"
    t0 = time.perf_counter()
    for M, N in BETA_PAIRS:
        assert N in set(one_step_reducts(M)), f"{M} does not β-reduce to {N} in one step"
        names = sorted(free_vars(M) | free_vars(N))
        lhs = judgment_set(search(M, 2, 2, names, with_derivations=False))
        rhs = judgment_set(search(N, 2, 2, names, with_derivations=False))
        assert lhs == rhs, f"judgment sets differ for {M} → {N}: {len(lhs)} vs {len(rhs)}"
    _timed(60, t0, "β-invariance")
    return f"{len(BETA_PAIRS)} pairs at bounds 2/2"


# -- 8. Church calculus --------------------------------------------------------------------


def criterion_8() -> str:
    mutants = 0
    for names, seq, pi, _ in corpus_proofs():
        ctx = list(zip(names, seq.hyps))
        s = to_church(pi, names)
        assert is_term(s), "annotated proof is not a term"
        assert erase(s) == extract_term(pi, names)
        check_church(ctx, s, seq.concl)
        for bctx, bs, bB in church_mutations(ctx, s, seq.concl):
            mutants += 1
            with pytest.raises(ChurchViolation):
                check_church(bctx, bs, bB)
    return f"{len(corpus_proofs())} proofs, {mutants} mutations rejected"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    _record(n, CRITERIA[n - 1])


if __name__ == "__main__":
    failed = 0
    for n, fn in enumerate(CRITERIA, start=1):
        try:
            _record(n, fn)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
