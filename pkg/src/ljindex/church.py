"""Church-style indexed λ-calculus denoting LJ(I) proofs.

Pre-terms are ``x^J``, ``λx^{A,u}.s``, ``s t`` and ``⊥``.  A pre-term is
a term when the two sides of every application use disjoint index
domains for each variable.  The typing rules follow the LJ(I) rules;
the argument-side maps ``wᵢ`` of an application are not written in the
term, so :func:`check_church` searches the finite set of candidates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .formulas import FArrow, Formula, FormulaError, Hypothesis, relocate, restrict, underlying_type
from .indices import EMPTY, IndexMap, IndexSet
from .ljker import Ax, Elim, Intro, Proof, StarAx, binder_name
from .terms import App, BOT, Term, lam, var


class ChurchViolation(ValueError):
    pass


@dataclass(frozen=True)
class CVar:
    name: str
    J: IndexSet

    def __post_init__(self) -> None:
        if not isinstance(self.J, IndexSet):
            object.__setattr__(self, "J", IndexSet(self.J))


@dataclass(frozen=True)
class CAbs:
    name: str
    formula: Formula
    map: IndexMap
    body: "PreTerm"

    def __post_init__(self) -> None:
        if not isinstance(self.map, IndexMap):
            object.__setattr__(self, "map", IndexMap(self.map))


@dataclass(frozen=True)
class CApp:
    fun: "PreTerm"
    arg: "PreTerm"


@dataclass(frozen=True)
class CBot:
    pass


PreTerm = Union[CVar, CAbs, CApp, CBot]


def var_domain(x: str, s: PreTerm) -> IndexSet:
    match s:
        case CVar(y, J):
            return J if y == x else EMPTY
        case CAbs(y, _, _, body):
            return EMPTY if y == x else var_domain(x, body)
        case CApp(f, a):
            return var_domain(x, f) | var_domain(x, a)
        case CBot():
            return EMPTY
    raise TypeError(s)


def _vars(s: PreTerm) -> set[str]:
    match s:
        case CVar(y, _):
            return {y}
        case CAbs(_, _, _, body):
            return _vars(body)
        case CApp(f, a):
            return _vars(f) | _vars(a)
    return set()


def is_term(s: PreTerm) -> bool:
    match s:
        case CApp(f, a):
            if not (is_term(f) and is_term(a)):
                return False
            return all(not (var_domain(x, f) & var_domain(x, a)) for x in _vars(s))
        case CAbs(_, _, _, body):
            return is_term(body)
    return True


def to_church(pi: Proof, names: Sequence[str]) -> PreTerm:
    """Annotate the extracted term of ``π`` with its index data."""
    names = list(names)
    match pi:
        case Ax(seq, i):
            return CVar(names[i - 1], seq.hyps[i - 1].formula.dom)
        case Intro(_, prem):
            y = binder_name(names)
            h = prem.seq.hyps[-1]
            return CAbs(y, h.formula, h.map, to_church(prem, names + [y]))
        case Elim(_, fun, arg, _):
            return CApp(to_church(fun, names), to_church(arg, names))
        case StarAx():
            return CBot()
    raise TypeError(pi)


def erase(s: PreTerm) -> Term:
    """Drop index data (keeping the underlying simple type on typed binders)."""
    match s:
        case CVar(x, _):
            return var(x)
        case CAbs(x, A, _, body):
            return lam(x, erase(body), underlying_type(A))
        case CApp(f, a):
            return App(erase(f), erase(a))
        case CBot():
            return BOT
    raise TypeError(s)


# -- checking -----------------------------------------------------------------------


class _Wild:
    """Stands for any formula with empty domain (synthesized from ⊥)."""

    dom = EMPTY

    def __repr__(self) -> str:
        return "?"


WILD = _Wild()


@dataclass(frozen=True)
class _PArrow:
    arg: Formula
    map: IndexMap
    res: object  # formula, _PArrow or WILD

    @property
    def dom(self) -> IndexSet:
        return self.res.dom


def _matches(pattern, F: Formula) -> bool:
    if pattern is WILD:
        return not F.dom
    if isinstance(pattern, _PArrow):
        return (
            isinstance(F, FArrow)
            and F.arg == pattern.arg
            and F.map == pattern.map
            and _matches(pattern.res, F.res)
        )
    return pattern == F


class _Checker:
    def __init__(self, typed: bool) -> None:
        self.typed = typed
        self.reasons: list[str] = []

    def fail(self, msg: str) -> None:
        self.reasons.append(msg)

    def solve(self, ctx: list, s: PreTerm, target) -> Iterator[tuple]:
        """Yield ``(formula, maps)`` for each way of typing ``s``.

        ``ctx`` entries are ``(name, formula, candidates)`` where
        ``candidates`` maps every index of the formula domain to the
        tuple of allowed targets.
        """
        n = len(ctx)
        match s:
            case CBot():
                if self.typed:
                    self.fail("⊥ is not a typed term")
                    return
                if any(A.dom for _, A, _ in ctx):
                    self.fail("⊥ with a non-empty hypothesis domain")
                    return
                if target is not None and target.dom:
                    self.fail("⊥ typed with a non-empty domain")
                    return
                yield (WILD if target is None else target), (IndexMap(),) * n
            case CVar(x, J):
                pos = [k for k, e in enumerate(ctx) if e[0] == x]
                if not pos:
                    self.fail(f"unbound variable {x}")
                    return
                i = pos[-1]
                _, A, cand = ctx[i]
                if any(e[1].dom for k, e in enumerate(ctx) if k != i):
                    self.fail(f"variable rule for {x} with another hypothesis of non-empty domain")
                    return
                if J != A.dom:
                    self.fail(f"variable {x} annotated with {J!r}, hypothesis domain is {A.dom!r}")
                    return
                found = False
                for w in self._bijections(A, cand, target):
                    F = relocate(w, A)
                    if target is not None and F != target:
                        continue
                    found = True
                    maps = tuple(w if k == i else IndexMap() for k in range(n))
                    yield F, maps
                if not found:
                    self.fail(f"no relocation of the hypothesis of {x} gives the expected formula")
            case CAbs(x, A, u, body):
                if any(e[0] == x for e in ctx):
                    self.fail(f"bound variable {x} shadows a hypothesis")
                    return
                if u.source != A.dom:
                    self.fail(f"map of {x} is not defined exactly on the annotation domain")
                    return
                if target is not None:
                    if not isinstance(target, FArrow) or target.arg != A or target.map != u:
                        self.fail(f"abstraction over {x} does not match the expected arrow")
                        return
                    sub = target.res
                else:
                    sub = None
                entry = (x, A, {r: (u[r],) for r in A.dom})
                for D, maps in self.solve(ctx + [entry], body, sub):
                    if target is not None:
                        yield target, maps[:-1]
                        continue
                    if not u.image() <= D.dom:
                        self.fail("abstraction map leaves the body domain")
                        continue
                    if isinstance(D, (_Wild, _PArrow)):
                        yield _PArrow(A, u, D), maps[:-1]
                    else:
                        try:
                            F = FArrow(A, u, D)
                        except FormulaError as e:
                            self.fail(str(e))
                            continue
                        yield F, maps[:-1]
            case CApp(f, a):
                ctx_f, ctx_a_base = [], []
                for x, A, cand in ctx:
                    df = var_domain(x, f) & A.dom
                    da = var_domain(x, a) & A.dom
                    if df & da:
                        self.fail(f"domains of {x} overlap across the application")
                        return
                    if (df | da) != A.dom:
                        self.fail(f"hypothesis {x} has indices used by neither side")
                        return
                    ctx_f.append((x, restrict(A, df), {r: cand[r] for r in df}))
                    ctx_a_base.append((x, restrict(A, da), {r: cand[r] for r in da}))
                for F, maps_f in self.solve(ctx_f, f, None):
                    if isinstance(F, (FArrow, _PArrow)):
                        A, u, B = F.arg, F.map, F.res
                    elif F is WILD:
                        A, u, B = None, IndexMap(), WILD
                    else:
                        self.fail("function side does not have an arrow formula")
                        continue
                    if target is not None and not _matches(B, target):
                        self.fail("application result differs from the expected formula")
                        continue
                    ctx_a = []
                    for x, C, cand in ctx_a_base:
                        cand2 = {
                            r: tuple(l for l, j in u.graph if j in cand[r]) for r in C.dom
                        }
                        ctx_a.append((x, C, cand2))
                    for G, maps_a in self.solve(ctx_a, a, A):
                        if A is None and G.dom:
                            self.fail("argument of a ⊥ function has a non-empty domain")
                            continue
                        maps = tuple(mf + ma.then(u) for mf, ma in zip(maps_f, maps_a))
                        yield (B if target is None else target), maps
            case _:
                raise TypeError(s)

    def _bijections(self, A: Formula, cand: dict, target) -> Iterator[IndexMap]:
        rs = sorted(A.dom)
        fa = A.fam
        tf = target.fam if target is not None else None
        if target is not None and len(target.dom) != len(rs):
            return

        def rec(k: int, used: set, graph: list):
            if k == len(rs):
                yield IndexMap(graph)
                return
            r = rs[k]
            for t in cand[r]:
                if t in used:
                    continue
                if tf is not None and (t not in tf or tf[t] != fa[r]):
                    continue
                used.add(t)
                graph.append((r, t))
                yield from rec(k + 1, used, graph)
                graph.pop()
                used.discard(t)

        yield from rec(0, set(), [])


def check_church(ctx: Sequence[tuple[str, Hypothesis]], s: PreTerm, B: Formula) -> None:
    """Raise :class:`ChurchViolation` unless ``x⃗ : ⟨A⃗⟩u⃗ ⊢ s : B`` is derivable."""
    names = [x for x, _ in ctx]
    if len(set(names)) != len(names):
        raise ChurchViolation("context variables are not pairwise distinct")
    if not is_term(s):
        raise ChurchViolation("pre-term violates the disjointness condition")
    for x, h in ctx:
        if not h.map.image() <= B.dom:
            raise ChurchViolation(f"map of {x} does not land in the conclusion domain")
    typed = B.flavor == "typed" or any(h.formula.flavor == "typed" for _, h in ctx)
    chk = _Checker(typed)
    entries = [(x, h.formula, {r: (h.map[r],) for r in h.formula.dom}) for x, h in ctx]
    for _F, maps in chk.solve(entries, s, B):
        if all(m == h.map for m, (_, h) in zip(maps, ctx)):
            return
    reason = chk.reasons[0] if chk.reasons else "no typing derivation"
    raise ChurchViolation(reason)


def church_ok(ctx, s: PreTerm, B: Formula) -> bool:
    try:
        check_church(ctx, s, B)
    except ChurchViolation:
        return False
    return True
