"""The LJ(I) proof kernel.

Sequents are positional: ``⟨A₁⟩u₁, …, ⟨Aₙ⟩uₙ ⊢ B``.  Proofs are trees of
:class:`Ax`, :class:`Intro`, :class:`Elim` and (untyped only)
:class:`StarAx` nodes, each carrying its full sequent so that checking
is local.  The transformations below (weakening, relocation,
restriction, substitution and its two corollaries, similarity
conversion, empty proofs) build new proof trees and never mutate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .formulas import (
    FArrow,
    FAtom,
    Formula,
    FormulaError,
    FStar,
    Hypothesis,
    relocate,
    restrict,
    similar,
    underlying_type,
)
from .indices import EMPTY, IndexDataError, IndexMap, IndexSet, csucc, identity_map
from .terms import App, BOT, Term, fresh_name, lam, var


class ProofViolation(ValueError):
    """A proof fails a rule side condition; ``path`` locates the node."""

    def __init__(self, path: Sequence[str], message: str) -> None:
        self.path = tuple(path)
        self.message = message
        where = "/".join(self.path) or "root"
        super().__init__(f"{where}: {message}")


class KernelError(ValueError):
    """A transformation was called outside its preconditions."""


@dataclass(frozen=True)
class Sequent:
    hyps: tuple[Hypothesis, ...]
    concl: Formula

    def __post_init__(self) -> None:
        if not isinstance(self.hyps, tuple):
            object.__setattr__(self, "hyps", tuple(self.hyps))
        d = self.concl.dom
        for h in self.hyps:
            if not h.map.image() <= d:
                raise FormulaError("hypothesis map does not land in the conclusion domain")

    def __len__(self) -> int:
        return len(self.hyps)


@dataclass(frozen=True)
class Ax:
    seq: Sequent
    i: int  # 1-based


@dataclass(frozen=True)
class Intro:
    seq: Sequent
    premise: "Proof"


@dataclass(frozen=True)
class Elim:
    seq: Sequent
    fun: "Proof"
    arg: "Proof"
    splits: tuple[tuple[IndexSet, IndexSet], ...]


@dataclass(frozen=True)
class StarAx:
    seq: Sequent


Proof = Union[Ax, Intro, Elim, StarAx]


def hyp(A: Formula, u: IndexMap | dict | None = None) -> Hypothesis:
    return Hypothesis(A, IndexMap() if u is None else u)


def id_hyp(A: Formula) -> Hypothesis:
    return Hypothesis(A, identity_map(A.dom))


def empty_hyp(A: Formula) -> Hypothesis:
    """``⟨A↾∅⟩∅``."""
    return Hypothesis(restrict(A, EMPTY), IndexMap())


# -- construction helpers ----------------------------------------------------------


def axiom(hyps: Sequence[Hypothesis], i: int) -> Ax:
    h = hyps[i - 1]
    return Ax(Sequent(tuple(hyps), relocate(h.map, h.formula)), i)


def intro(hyps: Sequence[Hypothesis], premise: Proof) -> Intro:
    last = premise.seq.hyps[-1]
    return Intro(Sequent(tuple(hyps), FArrow(last.formula, last.map, premise.seq.concl)), premise)


def elim(hyps: Sequence[Hypothesis], fun: Proof, arg: Proof) -> Elim:
    concl = fun.seq.concl
    if not isinstance(concl, FArrow):
        raise KernelError("function premise does not prove an arrow")
    splits = tuple(
        (c.formula.dom, d.formula.dom) for c, d in zip(fun.seq.hyps, arg.seq.hyps)
    )
    return Elim(Sequent(tuple(hyps), concl.res), fun, arg, splits)


def starax(hyps: Sequence[Hypothesis], concl: Formula | None = None) -> StarAx:
    return StarAx(Sequent(tuple(hyps), FStar(EMPTY) if concl is None else concl))


# -- checking ------------------------------------------------------------------------


def proof_mode(pi: Proof) -> str:
    return pi.seq.concl.flavor


def check_proof(pi: Proof, mode: str | None = None) -> None:
    """Raise :class:`ProofViolation` at the first violated side condition."""
    mode = mode or proof_mode(pi)
    _check(pi, mode, [])


def proof_ok(pi: Proof, mode: str | None = None) -> bool:
    try:
        check_proof(pi, mode)
    except (ProofViolation, FormulaError, IndexDataError):
        return False
    return True


def _check(pi: Proof, mode: str, path: list[str]) -> None:
    seq = pi.seq
    for h in (*seq.hyps, seq):
        f = h.formula if isinstance(h, Hypothesis) else h.concl
        if f.flavor != mode:
            raise ProofViolation(path, f"{f.flavor} formula in a {mode} proof")
    match pi:
        case Ax(seq, i):
            here = path + [f"ax{i}"]
            if not 1 <= i <= len(seq.hyps):
                raise ProofViolation(here, f"axiom position {i} out of range")
            for j, h in enumerate(seq.hyps, start=1):
                if j != i and h.formula.dom:
                    raise ProofViolation(here, f"hypothesis {j} has a non-empty domain")
            h = seq.hyps[i - 1]
            if not h.map.is_bijection_onto(seq.concl.dom):
                raise ProofViolation(here, f"map of hypothesis {i} is not a bijection onto the conclusion domain")
            if relocate(h.map, h.formula) != seq.concl:
                raise ProofViolation(here, "conclusion is not the relocated hypothesis")
        case Intro(seq, prem):
            here = path + ["intro"]
            ph = prem.seq.hyps
            if len(ph) != len(seq.hyps) + 1 or ph[:-1] != seq.hyps:
                raise ProofViolation(here, "premise hypotheses do not extend the conclusion hypotheses by one")
            last = ph[-1]
            if seq.concl != FArrow(last.formula, last.map, prem.seq.concl):
                raise ProofViolation(here, "conclusion is not the arrow built from the discharged hypothesis")
            _check(prem, mode, here)
        case Elim(seq, fun, arg, splits):
            here = path + ["elim"]
            fc = fun.seq.concl
            if not isinstance(fc, FArrow):
                raise ProofViolation(here, "function premise does not prove an arrow")
            if fc.res != seq.concl:
                raise ProofViolation(here, "arrow result differs from the conclusion")
            if arg.seq.concl != fc.arg:
                raise ProofViolation(here, "argument premise does not prove the arrow argument")
            n = len(seq.hyps)
            if len(fun.seq.hyps) != n or len(arg.seq.hyps) != n or len(splits) != n:
                raise ProofViolation(here, "premises and splits must have one entry per hypothesis")
            u = fc.map
            for i, (E, C, D, (l, r)) in enumerate(
                zip(seq.hyps, fun.seq.hyps, arg.seq.hyps, splits), start=1
            ):
                dc, dd = C.formula.dom, D.formula.dom
                if (l, r) != (dc, dd):
                    raise ProofViolation(here, f"recorded split of hypothesis {i} differs from the premises")
                if dc & dd:
                    raise ProofViolation(here, f"hypothesis {i}: premise domains overlap")
                if E.formula.dom != dc | dd:
                    raise ProofViolation(here, f"hypothesis {i}: domain is not the sum of the premise domains")
                if restrict(E.formula, dc) != C.formula:
                    raise ProofViolation(here, f"hypothesis {i}: function-side formula is not a restriction")
                if restrict(E.formula, dd) != D.formula:
                    raise ProofViolation(here, f"hypothesis {i}: argument-side formula is not a restriction")
                if E.map.restrict(dc) != C.map:
                    raise ProofViolation(here, f"hypothesis {i}: map disagrees with the function premise")
                if E.map.restrict(dd) != D.map.then(u):
                    raise ProofViolation(here, f"hypothesis {i}: map disagrees with u∘v on the argument side")
            _check(fun, mode, here + ["fun"])
            _check(arg, mode, here + ["arg"])
        case StarAx(seq):
            here = path + ["starax"]
            if mode != "untyped":
                raise ProofViolation(here, "the ⊥ axiom exists only in the untyped system")
            if seq.concl.dom:
                raise ProofViolation(here, "conclusion domain is not empty")
            for j, h in enumerate(seq.hyps, start=1):
                if h.formula.dom:
                    raise ProofViolation(here, f"hypothesis {j} has a non-empty domain")
        case _:
            raise ProofViolation(path, f"unknown proof node {type(pi).__name__}")


# -- extraction ----------------------------------------------------------------------


def binder_name(names: Sequence[str]) -> str:
    return fresh_name(f"x{len(names) + 1}", names)


def extract_term(pi: Proof, names: Sequence[str]) -> Term:
    """The underlying λ-term ``⌊π⌋(x⃗)``."""
    names = list(names)
    if len(names) != len(pi.seq.hyps):
        raise KernelError(f"{len(names)} names for {len(pi.seq.hyps)} hypotheses")
    if len(set(names)) != len(names):
        raise KernelError("variable names must be pairwise distinct")
    return _extract(pi, names)


def _extract(pi: Proof, names: list[str]) -> Term:
    match pi:
        case Ax(_, i):
            return var(names[i - 1])
        case Intro(_, prem):
            y = binder_name(names)
            body = _extract(prem, names + [y])
            return lam(y, body, underlying_type(prem.seq.hyps[-1].formula))
        case Elim(_, fun, arg, _):
            return App(_extract(fun, names), _extract(arg, names))
        case StarAx():
            return BOT
    raise TypeError(pi)


def proof_size(pi: Proof) -> int:
    match pi:
        case Intro(_, p):
            return 1 + proof_size(p)
        case Elim(_, f, a, _):
            return 1 + proof_size(f) + proof_size(a)
        case _:
            return 1


# -- weakening, relocation, restriction ---------------------------------------------


def weaken(pi: Proof, B: Formula, position: int) -> Proof:
    """Insert ``⟨B⟩∅`` (``dom B = ∅``) as hypothesis number ``position``."""
    if B.dom:
        raise KernelError("weakening needs a formula with empty domain")
    n = len(pi.seq.hyps)
    if not 1 <= position <= n + 1:
        raise KernelError(f"weakening position {position} out of range 1..{n + 1}")
    h = Hypothesis(B, IndexMap())
    return _weaken(pi, h, position)


def _ins(seq: Sequent, h: Hypothesis, p: int) -> Sequent:
    return Sequent(seq.hyps[: p - 1] + (h,) + seq.hyps[p - 1 :], seq.concl)


def _weaken(pi: Proof, h: Hypothesis, p: int) -> Proof:
    seq = _ins(pi.seq, h, p)
    match pi:
        case Ax(_, i):
            return Ax(seq, i + 1 if i >= p else i)
        case Intro(_, prem):
            return Intro(seq, _weaken(prem, h, p))
        case Elim(_, fun, arg, splits):
            sp = splits[: p - 1] + ((EMPTY, EMPTY),) + splits[p - 1 :]
            return Elim(seq, _weaken(fun, h, p), _weaken(arg, h, p), sp)
        case StarAx():
            return StarAx(seq)
    raise TypeError(pi)


def relocate_proof(pi: Proof, u: IndexMap | dict) -> Proof:
    """Proof of ``⟨Aᵢ⟩(u∘uᵢ) ⊢ u·A`` with the same extracted term."""
    u = u if isinstance(u, IndexMap) else IndexMap(u)
    if u.source != pi.seq.concl.dom or not u.is_injective():
        raise KernelError("relocation needs a bijection on the conclusion domain")
    return _relocate_proof(pi, u)


def _reloc_seq(seq: Sequent, u: IndexMap) -> Sequent:
    return Sequent(
        tuple(Hypothesis(h.formula, h.map.then(u)) for h in seq.hyps), relocate(u, seq.concl)
    )


def _relocate_proof(pi: Proof, u: IndexMap) -> Proof:
    seq = _reloc_seq(pi.seq, u)
    match pi:
        case Ax(_, i):
            return Ax(seq, i)
        case Intro(_, prem):
            return Intro(seq, _relocate_proof(prem, u))
        case Elim(_, fun, arg, splits):
            return Elim(seq, _relocate_proof(fun, u), arg, splits)
        case StarAx():
            return StarAx(seq)
    raise TypeError(pi)


def restrict_proof(pi: Proof, J: Iterable[int]) -> Proof:
    """Proof of ``⟨Aᵢ↾Kᵢ⟩(uᵢ↾Kᵢ) ⊢ A↾J`` where ``Kᵢ = uᵢ⁻¹(J)``."""
    J = IndexSet(J)
    if not J <= pi.seq.concl.dom:
        raise KernelError("restriction set is not contained in the conclusion domain")
    return _restrict_proof(pi, J)


def _restr_seq(seq: Sequent, J: IndexSet) -> Sequent:
    hs = []
    for h in seq.hyps:
        K = h.map.preimage(J)
        hs.append(Hypothesis(restrict(h.formula, K), h.map.restrict(K)))
    return Sequent(tuple(hs), restrict(seq.concl, J))


def _restrict_proof(pi: Proof, J: IndexSet) -> Proof:
    seq = _restr_seq(pi.seq, J)
    match pi:
        case Ax(_, i):
            return Ax(seq, i)
        case Intro(_, prem):
            return Intro(seq, _restrict_proof(prem, J))
        case Elim(_, fun, arg, _):
            L = fun.seq.concl.map.preimage(J)
            f2 = _restrict_proof(fun, J)
            a2 = _restrict_proof(arg, L)
            splits = tuple((c.formula.dom, d.formula.dom) for c, d in zip(f2.seq.hyps, a2.seq.hyps))
            return Elim(seq, f2, a2, splits)
        case StarAx():
            return StarAx(seq)
    raise TypeError(pi)


# -- substitution -------------------------------------------------------------------


def check_merge(mu: Proof, rho: Proof, i: int, Cs: Sequence[Formula], ws: Sequence[IndexMap]) -> None:
    """Validate the merge data of a substitution."""
    A = mu.seq.hyps
    n = len(A)
    if not 1 <= i <= n:
        raise KernelError(f"substitution position {i} out of range")
    if len(rho.seq.hyps) != n - 1 or len(Cs) != n - 1 or len(ws) != n - 1:
        raise KernelError("substituting proof and merge data need n-1 entries")
    if rho.seq.concl != A[i - 1].formula:
        raise KernelError("substituting proof does not prove the replaced hypothesis")
    ui = A[i - 1].map
    for j in range(1, n):
        a = A[csucc(j, i) - 1]
        b = rho.seq.hyps[j - 1]
        C, w = Cs[j - 1], ws[j - 1]
        da, db = a.formula.dom, b.formula.dom
        if da & db or C.dom != da | db:
            raise KernelError(f"merge {j}: domain is not the disjoint sum")
        if restrict(C, da) != a.formula or w.restrict(da) != a.map:
            raise KernelError(f"merge {j}: disagrees with the kept hypothesis")
        if restrict(C, db) != b.formula or w.restrict(db) != b.map.then(ui):
            raise KernelError(f"merge {j}: disagrees with the substituted hypothesis")


def substitute_proof(
    mu: Proof, rho: Proof, i: int, Cs: Sequence[Formula], ws: Sequence[IndexMap | dict]
) -> Proof:
    """Proof of ``⟨Cⱼ⟩wⱼ ⊢ A`` whose term is ``⌊μ⌋[⌊ρ⌋/xᵢ]``."""
    ws = [w if isinstance(w, IndexMap) else IndexMap(w) for w in ws]
    check_merge(mu, rho, i, Cs, ws)
    return _subst(mu, rho, i, tuple(Cs), tuple(ws))


def _subst(mu: Proof, rho: Proof, i: int, Cs: tuple, ws: tuple) -> Proof:
    A = mu.seq.hyps
    seq = Sequent(tuple(Hypothesis(C, w) for C, w in zip(Cs, ws)), mu.seq.concl)
    match mu:
        case Ax(_, k):
            if k == i:
                moved = relocate_proof(rho, A[i - 1].map)
                return _replace_seq(moved, seq)
            return Ax(seq, k if k < i else k - 1)
        case Intro(_, theta):
            extra = theta.seq.hyps[-1]
            rho2 = weaken(rho, restrict(extra.formula, EMPTY), len(rho.seq.hyps) + 1)
            pi0 = _subst(theta, rho2, i, Cs + (extra.formula,), ws + (extra.map,))
            return Intro(seq, pi0)
        case Elim(_, phi, psi, _):
            n = len(A)
            Es, Fs = phi.seq.hyps, psi.seq.hyps
            dEi, dFi = Es[i - 1].formula.dom, Fs[i - 1].formula.dom
            rho_l = restrict_proof(rho, dEi)
            rho_r = restrict_proof(rho, dFi)
            t_i = Fs[i - 1].map
            G, wl, H, r = [], [], [], []
            for j in range(1, n):
                jj = csucc(j, i)
                vj = rho.seq.hyps[j - 1].map
                Lj, Rj = vj.preimage(dEi), vj.preimage(dFi)
                gdom = Es[jj - 1].formula.dom | Lj
                hdom = Fs[jj - 1].formula.dom | Rj
                G.append(restrict(Cs[j - 1], gdom))
                wl.append(ws[j - 1].restrict(gdom))
                H.append(restrict(Cs[j - 1], hdom))
                r.append(Fs[jj - 1].map + vj.restrict(Rj).then(t_i))
            phi2 = _subst(phi, rho_l, i, tuple(G), tuple(wl))
            psi2 = _subst(psi, rho_r, i, tuple(H), tuple(r))
            splits = tuple((g.dom, h.dom) for g, h in zip(G, H))
            return Elim(seq, phi2, psi2, splits)
        case StarAx():
            return StarAx(seq)
    raise TypeError(mu)


def _replace_seq(pi: Proof, seq: Sequent) -> Proof:
    if pi.seq != seq:
        raise KernelError("constructed sequent differs from the requested one")
    return pi


def subst_single(mu: Proof, rho: Proof, i: int) -> Proof:
    """Replace hypothesis ``i`` of ``μ`` by the single hypothesis ``⟨B⟩v`` of ``ρ``.

    The result proves ``…, ⟨B⟩(uᵢ∘v), … ⊢ A`` with term ``⌊μ⌋[⌊ρ⌋(xᵢ)/xᵢ]``.
    """
    A = mu.seq.hyps
    n = len(A)
    if len(rho.seq.hyps) != 1:
        raise KernelError("the substituting proof must have exactly one hypothesis")
    if not 1 <= i <= n:
        raise KernelError(f"position {i} out of range")
    Bh = rho.seq.hyps[0]
    mu2 = weaken(mu, restrict(Bh.formula, EMPTY), i + 1)
    rho2 = rho
    for j in range(1, i):
        rho2 = weaken(rho2, restrict(A[j - 1].formula, EMPTY), j)
    for j in range(i + 1, n + 1):
        rho2 = weaken(rho2, restrict(A[j - 1].formula, EMPTY), j)
    Cs, ws = [], []
    for j in range(1, n + 1):
        if j == i:
            Cs.append(Bh.formula)
            ws.append(Bh.map.then(A[i - 1].map))
        else:
            Cs.append(A[j - 1].formula)
            ws.append(A[j - 1].map)
    return substitute_proof(mu2, rho2, i, Cs, ws)


def subst_into_single(mu: Proof, rho: Proof) -> Proof:
    """Plug ``ρ : ⟨Aⱼ⟩uⱼ ⊢ A`` into the single hypothesis of ``μ : ⟨A⟩v ⊢ B``.

    The result proves ``⟨Aⱼ⟩(v∘uⱼ) ⊢ B`` with term ``⌊μ⌋(x)[⌊ρ⌋/x]``.
    """
    if len(mu.seq.hyps) != 1:
        raise KernelError("the receiving proof must have exactly one hypothesis")
    v = mu.seq.hyps[0].map
    mu2 = mu
    for j, h in enumerate(rho.seq.hyps, start=2):
        mu2 = weaken(mu2, restrict(h.formula, EMPTY), j)
    Cs = [h.formula for h in rho.seq.hyps]
    ws = [h.map.then(v) for h in rho.seq.hyps]
    return substitute_proof(mu2, rho, 1, Cs, ws)


# -- similarity and empty proofs --------------------------------------------------


def match_bijection(E: Formula, C: Formula, u: IndexMap, v: IndexMap) -> IndexMap:
    """A bijection ``w : dom E → dom C`` with ``u∘w = v`` and ``fam(C)∘w = fam(E)``."""
    pool: dict[tuple, list[int]] = {}
    fc = C.fam
    for k in sorted(C.dom):
        pool.setdefault((u[k], fc[k]), []).append(k)
    fe = E.fam
    graph = []
    for k in sorted(E.dom):
        bucket = pool.get((v[k], fe[k]))
        if not bucket:
            raise KernelError("no matching index: formulas are not similar")
        graph.append((k, bucket.pop(0)))
    if any(pool.values()):
        raise KernelError("unmatched indices: formulas are not similar")
    return IndexMap(graph)


def sim_conversion(A: Formula, B: Formula) -> Proof:
    """Proof of ``⟨A⟩id ⊢ B`` for similar ``A`` and ``B``."""
    if not similar(A, B):
        raise KernelError("formulas are not similar")
    return _sim(A, B)


def _sim(A: Formula, B: Formula) -> Proof:
    top = [id_hyp(A)]
    match A, B:
        case (FAtom(), FAtom()) | (FStar(), FStar()):
            return axiom(top, 1)
        case FStar(), FArrow(C, _, D):
            rho = weaken(_sim(A, D), C, 2)
            return intro(top, rho)
        case FArrow(C, _, D), FStar():
            rho = _sim(D, B)
            fun = axiom(top, 1)
            arg = starax([empty_hyp(A)], C)
            pi1 = elim(top, fun, arg)
            return subst_into_single(rho, pi1)
        case FArrow(C, u, D), FArrow(E, v, F):
            rho = _sim(D, F)
            w = match_bijection(E, C, u, v)
            wE = relocate(w, E)
            mu = _sim(wE, C)
            mu1 = subst_single(mu, axiom([Hypothesis(E, w)], 1), 1)
            two = [id_hyp(A), Hypothesis(C, u)]
            fun = axiom([id_hyp(A), empty_hyp(C)], 1)
            arg = axiom([empty_hyp(A), id_hyp(C)], 2)
            pi1 = elim(two, fun, arg)
            pi2 = subst_single(pi1, mu1, 2)
            pi3 = subst_into_single(rho, pi2)
            return intro(top, pi3)
    raise KernelError(f"no similarity case for {type(A).__name__} and {type(B).__name__}")


def empty_proof(hyps: Sequence[Formula], A: Formula) -> Proof:
    """Proof of ``⟨Aᵢ⟩∅ ⊢ A`` (all domains empty) whose term Ω-reduces to ⊥."""
    if A.dom or any(h.dom for h in hyps):
        raise KernelError("empty proofs need empty domains")
    match A:
        case FStar():
            pi: Proof = starax([])
            for p, h in enumerate(hyps, start=1):
                pi = weaken(pi, h, p)
            return pi
        case FArrow(B, _, C):
            rho = empty_proof(list(hyps) + [B], C)
            return intro([Hypothesis(h, IndexMap()) for h in hyps], rho)
        case FAtom():
            raise KernelError("empty proofs exist only in the untyped system")
    raise TypeError(A)
