"""Translations between LJ(I) proofs and families of intersection typings.

``soundness`` reads a proof as one intersection derivation per index of
the conclusion domain; ``completeness`` goes back, building a proof of a
given sequent ("scaffold") from a family of derivations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .formulas import (
    FArrow,
    Hypothesis,
    expand_spine,
    hyp_families,
    relocate,
    represent,
    restrict,
    split_multisets,
    underlying_type,
)
from .indices import Allocator, FrozenMap, IndexMap, IndexSet, Multiset, mset_sum
from .itsys import TAbs, TApp, TVar, TypingDeriv, TypingJudgment, ctx_of, rename_deriv
from .ljker import (
    Ax,
    Elim,
    Intro,
    Proof,
    Sequent,
    StarAx,
    axiom,
    binder_name,
    elim,
    empty_proof,
    intro,
    sim_conversion,
    subst_into_single,
)
from .terms import App, Bot, FVar, Lam, SimpleType, Term, fresh_name, infer_type, lam, open_, var


class SoundnessError(ValueError):
    pass


class CompletenessError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyTyping:
    """Derivations ``x⃗ : m⃗ʲ ⊢ M : bⱼ`` for every ``j ∈ J`` over one variable spine."""

    names: tuple[str, ...]
    subject: Term
    derivs: FrozenMap = field(default_factory=FrozenMap)
    var_types: tuple | None = None
    ty: SimpleType | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if not isinstance(self.derivs, FrozenMap):
            object.__setattr__(self, "derivs", FrozenMap(self.derivs))
        if self.var_types is not None:
            object.__setattr__(self, "var_types", tuple(self.var_types))
        for j, d in self.derivs.items():
            jd = d.judgment
            if jd.names != self.names:
                raise ValueError(f"derivation {j} has a different variable spine")
            if jd.subject != self.subject:
                raise ValueError(f"derivation {j} has a different subject")

    @property
    def J(self) -> IndexSet:
        return IndexSet(self.derivs)

    @property
    def typed(self) -> bool:
        return self.var_types is not None

    def point(self, j: int):
        return self.derivs[j].judgment.point

    def context(self, j: int) -> tuple[Multiset, ...]:
        return tuple(m for _, m, _ in self.derivs[j].judgment.ctx)


# -- soundness ----------------------------------------------------------------------


def soundness(pi: Proof, names: Sequence[str]) -> FamilyTyping:
    """One intersection derivation per index of the conclusion domain."""
    names = list(names)
    if len(names) != len(pi.seq.hyps) or len(set(names)) != len(names):
        raise SoundnessError("need one distinct name per hypothesis")
    typed = pi.seq.concl.flavor == "typed"
    types = [underlying_type(h.formula) for h in pi.seq.hyps] if typed else None
    term, derivs = _sound(pi, names, types)
    return FamilyTyping(tuple(names), term, derivs, types, underlying_type(pi.seq.concl) if typed else None)


def _contexts(seq: Sequent, names, types) -> dict[int, tuple]:
    J = seq.concl.dom
    fams = [hyp_families(h, J) for h in seq.hyps]
    return {j: ctx_of(names, [f[j] for f in fams], types) for j in J}


def _sound(pi: Proof, names: list[str], types) -> tuple[Term, dict[int, TypingDeriv]]:
    seq = pi.seq
    B = seq.concl
    bty = underlying_type(B) if types is not None else None
    ctxs = _contexts(seq, names, types)
    match pi:
        case Ax(_, i):
            term = var(names[i - 1])
            return term, {j: TVar(TypingJudgment(ctxs[j], term, B.fam[j], bty)) for j in B.dom}
        case Intro(_, prem):
            y = binder_name(names)
            yty = underlying_type(prem.seq.hyps[-1].formula) if types is not None else None
            body, ds = _sound(prem, names + [y], None if types is None else types + [yty])
            term = lam(y, body, yty)
            return term, {
                j: TAbs(TypingJudgment(ctxs[j], term, B.fam[j], bty), ds[j]) for j in B.dom
            }
        case Elim(_, fun, arg, _):
            tf, df = _sound(fun, names, types)
            ta, da = _sound(arg, names, types)
            term = App(tf, ta)
            u = fun.seq.concl.map
            out = {}
            for j in B.dom:
                K = sorted(u.preimage([j]))
                args = tuple(da[l] for l in K)
                for idx, (n, m, _t) in enumerate(ctxs[j]):
                    parts = [df[j].judgment.ctx[idx][1]] + [a.judgment.ctx[idx][1] for a in args]
                    if mset_sum(parts) != m:
                        raise SoundnessError(f"multiset identity fails for {n} at index {j}")
                out[j] = TApp(TypingJudgment(ctxs[j], term, B.fam[j], bty), df[j], args)
            return term, out
        case StarAx(_):
            return Bot(), {}
    raise TypeError(pi)


# -- completeness -------------------------------------------------------------------


def abstraction_demand(t: Term) -> int:
    """How many arrows the conclusion formula must expose for ``t``."""
    match t:
        case Lam(b):
            return 1 + abstraction_demand(b)
        case App(f, _):
            return max(abstraction_demand(f) - 1, 0)
        case _:
            return 0


def _deriv_names(d: TypingDeriv, acc: set) -> set:
    acc.update(d.judgment.names)
    match d:
        case TAbs(_, p):
            _deriv_names(p, acc)
        case TApp(_, f, args):
            _deriv_names(f, acc)
            for a in args:
                _deriv_names(a, acc)
    return acc


def check_scaffold(F: FamilyTyping, seq: Sequent) -> None:
    if len(seq.hyps) != len(F.names):
        raise CompletenessError("scaffold has the wrong number of hypotheses")
    if seq.concl.dom != F.J:
        raise CompletenessError("scaffold conclusion domain differs from J")
    typed = seq.concl.flavor == "typed"
    if typed != F.typed:
        raise CompletenessError("scaffold flavor differs from the family")
    if typed:
        if underlying_type(seq.concl) != F.ty:
            raise CompletenessError("conclusion type mismatch")
        for h, t in zip(seq.hyps, F.var_types):
            if underlying_type(h.formula) != t:
                raise CompletenessError("hypothesis type mismatch")
    for j in F.J:
        if seq.concl.fam[j] != F.point(j):
            raise CompletenessError(f"fam(B) differs from the typed point at {j}")
    for idx, h in enumerate(seq.hyps):
        fams = hyp_families(h, F.J)
        for j in F.J:
            if fams[j] != F.context(j)[idx]:
                raise CompletenessError(f"hypothesis {idx + 1} family differs from the context at {j}")


def completeness(F: FamilyTyping, scaffold: Sequent, allocator: Allocator) -> Proof:
    """A proof of the scaffold sequent whose term approximates (or η-expands) the subject."""
    check_scaffold(F, scaffold)
    allocator.reserve(_scaffold_indices(scaffold))
    typed = F.typed
    return _complete(
        list(F.names),
        F.subject,
        dict(F.derivs),
        scaffold,
        allocator,
        list(F.var_types) if typed else None,
    )


def _scaffold_indices(seq: Sequent) -> set[int]:
    from .formulas import indices_of

    out: set[int] = set()
    for h in seq.hyps:
        out |= indices_of(h.formula) | set(h.map.image())
    return out | indices_of(seq.concl)


def _complete(names: list[str], M: Term, derivs: dict, seq: Sequent, alloc: Allocator, types) -> Proof:
    J = seq.concl.dom
    typed = types is not None
    if not typed and not J:
        return empty_proof([h.formula for h in seq.hyps], seq.concl)
    match M:
        case Bot():
            raise CompletenessError("⊥ is typable only by the empty family")
        case FVar(x):
            i = names.index(x) + 1
            h = seq.hyps[i - 1]
            for q, other in enumerate(seq.hyps, start=1):
                if q != i and other.formula.dom:
                    raise CompletenessError(f"hypothesis {q} is used by a variable axiom")
            if not h.map.is_bijection_onto(J):
                raise CompletenessError(f"hypothesis {i} map is not a bijection")
            rho = sim_conversion(relocate(h.map, h.formula), seq.concl)
            return subst_into_single(rho, axiom(seq.hyps, i))
        case Lam(body, _, ty):
            B = seq.concl
            if not isinstance(B, FArrow):
                raise CompletenessError("the conclusion of an abstraction case must be an arrow formula")
            used: set = set(names)
            for d in derivs.values():
                if not isinstance(d, TAbs):
                    raise CompletenessError("derivation shape does not follow the term")
                _deriv_names(d, used)
            y = fresh_name(binder_name(names), used)
            inner = {}
            for j, d in derivs.items():
                old = d.premise.judgment.ctx[-1][0]
                inner[j] = rename_deriv(d.premise, old, y) if old != y else d.premise
            sub = Sequent(seq.hyps + (Hypothesis(B.arg, B.map),), B.res)
            rho = _complete(
                names + [y], open_(body, FVar(y)), inner, sub, alloc, None if not typed else types + [ty]
            )
            return intro(seq.hyps, rho)
        case App(N, P):
            for d in derivs.values():
                if not isinstance(d, TApp):
                    raise CompletenessError("derivation shape does not follow the term")
            Ls: dict[int, list[int]] = {j: alloc.take(len(derivs[j].args)) for j in sorted(J)}
            u = IndexMap((l, j) for j, ls in Ls.items() for l in ls)
            apoints = {l: derivs[j].args[k].judgment.point for j, ls in Ls.items() for k, l in enumerate(ls)}
            sigma = infer_type(P, dict(zip(names, types))) if typed else None
            A = represent(sigma, u.source, apoints, alloc)
            if not typed:
                A = expand_spine(A, abstraction_demand(P))
            fun_hyps, arg_hyps = [], []
            for idx, h in enumerate(seq.hyps):
                r0, r1 = _split_hypothesis(h, idx, derivs, Ls)
                K0 = IndexSet(r0)
                fun_hyps.append(Hypothesis(restrict(h.formula, K0), h.map.restrict(K0)))
                v = IndexMap(r1)
                arg_hyps.append(Hypothesis(restrict(h.formula, v.source), v))
            fun_seq = Sequent(tuple(fun_hyps), FArrow(A, u, seq.concl))
            arg_seq = Sequent(tuple(arg_hyps), A)
            mu = _complete(names, N, {j: d.fun for j, d in derivs.items()}, fun_seq, alloc, types)
            arg_derivs = {l: derivs[j].args[k] for j, ls in Ls.items() for k, l in enumerate(ls)}
            rho = _complete(names, P, arg_derivs, arg_seq, alloc, types)
            return elim(seq.hyps, mu, rho)
    raise CompletenessError(f"unexpected subject {M!r}")


def _split_hypothesis(h: Hypothesis, idx: int, derivs: dict, Ls: dict) -> tuple[list[int], dict]:
    """Greedy split of each fibre ``dom(Aᵢ) ∩ uᵢ⁻¹(j)`` along the derivation contexts."""
    fa = h.formula.fam
    pools: dict[int, dict] = {}
    for r in sorted(h.formula.dom):
        pools.setdefault(h.map[r], {}).setdefault(fa[r], []).append(r)
    r0: list[int] = []
    r1: dict[int, int] = {}
    for j, ls in Ls.items():
        d = derivs[j]
        pool = pools.get(j, {})
        parts = [(None, d.fun.judgment.ctx[idx][1])] + [
            (l, a.judgment.ctx[idx][1]) for l, a in zip(ls, d.args)
        ]
        for l, m in parts:
            for e in m:
                bucket = pool.get(e)
                if not bucket:
                    raise CompletenessError(f"multiset decomposition mismatch for hypothesis {idx + 1} at {j}")
                r = bucket.pop(0)
                if l is None:
                    r0.append(r)
                else:
                    r1[r] = l
        if any(pool.values()):
            raise CompletenessError(f"hypothesis {idx + 1} has unused indices at {j}")
    return r0, r1


def scaffold_for(F: FamilyTyping, allocator: Allocator) -> Sequent:
    """A scaffold sequent synthesized from the family via ``represent``."""
    hyps = []
    for idx in range(len(F.names)):
        groups = {j: F.context(j)[idx] for j in F.J}
        u, g = split_multisets(groups, allocator)
        ty = F.var_types[idx] if F.typed else None
        hyps.append(Hypothesis(represent(ty, u.source, g, allocator), u))
    B = represent(F.ty if F.typed else None, F.J, {j: F.point(j) for j in F.J}, allocator)
    if not F.typed:
        B = expand_spine(B, abstraction_demand(F.subject))
    return Sequent(tuple(hyps), B)


def complete_family(F: FamilyTyping, allocator: Allocator | None = None) -> tuple[Sequent, Proof]:
    allocator = allocator or Allocator()
    seq = scaffold_for(F, allocator)
    return seq, completeness(F, seq, allocator)
