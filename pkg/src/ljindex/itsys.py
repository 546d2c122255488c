"""Non-idempotent intersection typing as checkable derivation trees.

A judgment ``x₁:m₁, …, xₙ:mₙ ⊢ M : a`` carries a total context over a
declared variable spine; each ``mᵢ`` is a multiset of points.  In the
simply typed system every entry also carries its simple type.  The
D∞ system has no rule for ⊥.

:func:`search` is an exhaustive oracle listing every derivable
judgment within bounds on the point weight (see
:func:`ljindex.relmodel.point_weight`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .indices import Multiset, mset_sum
from .relmodel import Point, conforms, enumerate_points, point_weight, pt, unfold
from .terms import (
    App,
    Bot,
    BVar,
    FVar,
    Lam,
    SimpleType,
    TArrow,
    Term,
    free_vars,
    fresh_name,
    infer_type,
    open_,
    rename,
)


class TypingViolation(ValueError):
    def __init__(self, path: Sequence[str], message: str) -> None:
        self.path = tuple(path)
        self.message = message
        super().__init__(f"{'/'.join(self.path) or 'root'}: {message}")


CtxEntry = tuple  # (name, Multiset, SimpleType | None)


@dataclass(frozen=True)
class TypingJudgment:
    ctx: tuple[CtxEntry, ...]
    subject: Term
    point: Point
    ty: SimpleType | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.ctx, tuple):
            object.__setattr__(self, "ctx", tuple(tuple(e) for e in self.ctx))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e[0] for e in self.ctx)

    def mset_of(self, name: str) -> Multiset:
        for n, m, _ in self.ctx:
            if n == name:
                return m
        raise KeyError(name)


@dataclass(frozen=True)
class TVar:
    judgment: TypingJudgment


@dataclass(frozen=True)
class TAbs:
    judgment: TypingJudgment
    premise: "TypingDeriv"


@dataclass(frozen=True)
class TApp:
    judgment: TypingJudgment
    fun: "TypingDeriv"
    args: tuple["TypingDeriv", ...]


TypingDeriv = Union[TVar, TAbs, TApp]


def ctx_of(names: Sequence[str], msets: Sequence[Multiset], types: Sequence | None = None) -> tuple:
    types = types or [None] * len(names)
    return tuple((n, m, t) for n, m, t in zip(names, msets, types))


# -- checking ----------------------------------------------------------------------


def check_typed(d: TypingDeriv, carriers: dict | None = None) -> None:
    _check(d, True, carriers, [])


def check_untyped(d: TypingDeriv) -> None:
    _check(d, False, None, [])


def derivation_ok(d: TypingDeriv, typed: bool = False, carriers: dict | None = None) -> bool:
    try:
        _check(d, typed, carriers, [])
    except TypingViolation:
        return False
    return True


def _check(d: TypingDeriv, typed: bool, carriers, path: list[str]) -> None:
    j = d.judgment
    names = j.names
    if len(set(names)) != len(names):
        raise TypingViolation(path, "context variables are not pairwise distinct")
    if isinstance(j.subject, Bot):
        raise TypingViolation(path, "bottom is untypable")
    if typed:
        if j.ty is None or not conforms(j.point, j.ty, carriers):
            raise TypingViolation(path, f"point {j.point!r} is not of type {j.ty}")
        for n, m, t in j.ctx:
            if t is None or not all(conforms(a, t, carriers) for a in m):
                raise TypingViolation(path, f"context entry {n} does not conform to its type")
    match d:
        case TVar(_):
            here = path + ["var"]
            if not isinstance(j.subject, FVar):
                raise TypingViolation(here, "Var rule on a non-variable")
            x = j.subject.name
            if x not in names:
                raise TypingViolation(here, f"variable {x} is not declared in the context")
            for n, m, t in j.ctx:
                if n == x:
                    if m != Multiset([j.point]):
                        raise TypingViolation(here, f"own multiset of {x} is not [{j.point!r}]")
                    if typed and t != j.ty:
                        raise TypingViolation(here, "variable type differs from the judgment type")
                elif len(m):
                    raise TypingViolation(here, f"multiset of {n} is not empty")
        case TAbs(_, prem):
            here = path + ["abs"]
            lam_ = j.subject
            if not isinstance(lam_, Lam):
                raise TypingViolation(here, "Abs rule on a non-abstraction")
            pj = prem.judgment
            if len(pj.ctx) != len(j.ctx) + 1 or pj.ctx[:-1] != j.ctx:
                raise TypingViolation(here, "premise context does not extend the conclusion context by one")
            y, m, ty_y = pj.ctx[-1]
            if y in names or y in free_vars(lam_):
                raise TypingViolation(here, f"bound variable name {y} is not fresh")
            if pj.subject != open_(lam_.body, FVar(y)):
                raise TypingViolation(here, "premise subject is not the abstraction body")
            if j.point != pt(m, pj.point):
                raise TypingViolation(here, "conclusion point is not (m, b)")
            if typed:
                if lam_.ty != ty_y:
                    raise TypingViolation(here, "binder annotation differs from the context type")
                if j.ty != TArrow(ty_y, pj.ty):
                    raise TypingViolation(here, "conclusion type is not an arrow over the premise")
            _check(prem, typed, carriers, here)
        case TApp(_, fun, args):
            here = path + ["app"]
            sub = j.subject
            if not isinstance(sub, App):
                raise TypingViolation(here, "App rule on a non-application")
            if fun.judgment.subject != sub.fun:
                raise TypingViolation(here, "function premise subject mismatch")
            for k, a in enumerate(args, start=1):
                if a.judgment.subject != sub.arg:
                    raise TypingViolation(here + [f"arg{k}"], "argument premise subject mismatch")
            for p in (fun, *args):
                spine = tuple((n, t) for n, _, t in p.judgment.ctx)
                if spine != tuple((n, t) for n, _, t in j.ctx):
                    raise TypingViolation(here, "premise context spine differs from the conclusion")
            try:
                ms, b = unfold(fun.judgment.point)
            except TypeError:
                raise TypingViolation(here, "function point is not a pair") from None
            if b != j.point:
                raise TypingViolation(here, "function result point differs from the conclusion point")
            if ms != Multiset(a.judgment.point for a in args):
                raise TypingViolation(here, "argument points do not match the function multiset")
            if typed:
                ft = fun.judgment.ty
                if not isinstance(ft, TArrow) or ft.res != j.ty:
                    raise TypingViolation(here, "function type does not end in the conclusion type")
                if any(a.judgment.ty != ft.arg for a in args):
                    raise TypingViolation(here, "argument type mismatch")
            for idx, (n, m, _) in enumerate(j.ctx):
                total = mset_sum([fun.judgment.ctx[idx][1]] + [a.judgment.ctx[idx][1] for a in args])
                if total != m:
                    raise TypingViolation(here, f"context of {n} is not the sum of the premise contexts")
            _check(fun, typed, carriers, here + ["fun"])
            for k, a in enumerate(args, start=1):
                _check(a, typed, carriers, here + [f"arg{k}"])
        case _:
            raise TypingViolation(path, f"unknown derivation node {type(d).__name__}")


# -- derivation utilities ------------------------------------------------------------


def rename_deriv(d: TypingDeriv, old: str, new: str) -> TypingDeriv:
    """Rename a context variable throughout a derivation."""
    j = d.judgment
    jj = TypingJudgment(
        tuple((new if n == old else n, m, t) for n, m, t in j.ctx),
        rename(j.subject, {old: new}),
        j.point,
        j.ty,
    )
    match d:
        case TVar(_):
            return TVar(jj)
        case TAbs(_, p):
            return TAbs(jj, rename_deriv(p, old, new))
        case TApp(_, f, args):
            return TApp(jj, rename_deriv(f, old, new), tuple(rename_deriv(a, old, new) for a in args))
    raise TypeError(d)


def weaken_deriv(d: TypingDeriv, name: str, ty: SimpleType | None = None, position: int | None = None) -> TypingDeriv:
    """Insert ``name:[]`` into every context of the derivation."""
    j = d.judgment
    pos = len(j.ctx) if position is None else position
    jj = TypingJudgment(j.ctx[:pos] + ((name, Multiset(), ty),) + j.ctx[pos:], j.subject, j.point, j.ty)
    match d:
        case TVar(_):
            return TVar(jj)
        case TAbs(_, p):
            return TAbs(jj, weaken_deriv(p, name, ty, pos))
        case TApp(_, f, args):
            return TApp(jj, weaken_deriv(f, name, ty, pos), tuple(weaken_deriv(a, name, ty, pos) for a in args))
    raise TypeError(d)


def deriv_size(d: TypingDeriv) -> int:
    match d:
        case TVar(_):
            return 1
        case TAbs(_, p):
            return 1 + deriv_size(p)
        case TApp(_, f, args):
            return 1 + deriv_size(f) + sum(deriv_size(a) for a in args)
    raise TypeError(d)


# -- search oracle -------------------------------------------------------------------
#
# Tables are computed per subterm under a *demand*: ``None`` (any point), a
# frozenset of points, or an ``_Arr`` constraining the argument multiset and
# the result.  Each bound variable carries the set of points it may take
# (``None`` when nothing is known, in which case points are enumerated up to
# the intermediate bound).  Demands flow from the root, whose points are
# bounded, and from the argument table of a redex into its binder, so most
# tables never enumerate.


@dataclass(frozen=True)
class _Arr:
    args: frozenset | None
    res: object  # a demand


def _accepts(demand, a: Point) -> bool:
    if demand is None:
        return True
    if isinstance(demand, frozenset):
        return a in demand
    try:
        ms, b = unfold(a)
    except TypeError:
        return False
    if demand.args is not None and any(e not in demand.args for e in ms):
        return False
    return _accepts(demand.res, b)


def _weight(m: Multiset) -> int:
    return sum(1 + point_weight(a) for a in m)


def _head(t: Term) -> Term:
    while isinstance(t, App):
        t = t.fun
    return t


class _Search:
    def __init__(self, term, variables, ctx_bound, point_bound, slack, env, carriers):
        self.term = term
        self.vars = list(variables)
        self.nf = len(self.vars)
        self.cb, self.pb = ctx_bound, point_bound
        self.S = point_bound + slack
        self.env = env
        self.carriers = carriers
        self.typed = env is not None
        self.tables: dict[tuple, dict] = {}
        self._points_cache: dict = {}

    def points(self, ty, bound):
        key = (ty, bound)
        if key not in self._points_cache:
            self._points_cache[key] = [
                a for a in enumerate_points(ty, bound, self.carriers) if point_weight(a) <= bound
            ]
        return self._points_cache[key]

    def fits(self, ctx: tuple, allowed: tuple) -> bool:
        for idx, m in enumerate(ctx):
            if idx < self.nf:
                if len(m) > self.cb:
                    return False
            elif allowed[idx - self.nf] is None:
                if _weight(m) > self.S:
                    return False
            elif len(m) > self.S:
                return False
        return True

    def table(self, t: Term, binders: tuple, allowed: tuple, demand) -> tuple:
        """``(key, entries)``: entries map ``(ctx, point)`` to a witness."""
        key = (id(t), binders, allowed, demand)
        if key in self.tables:
            return key, self.tables[key]
        depth = len(binders)
        width = self.nf + depth
        out: dict = {}
        empty = tuple(Multiset() for _ in range(width))
        match t:
            case FVar() | BVar():
                if isinstance(t, FVar):
                    idx = self.vars.index(t.name)
                    cands = self.points(self.env[t.name] if self.typed else None, self.pb)
                else:
                    k = depth - 1 - t.index
                    idx = self.nf + k
                    if allowed[k] is not None:
                        cands = sorted(allowed[k])
                    elif isinstance(demand, frozenset):
                        cands = sorted(demand)
                    else:
                        cands = self.points(binders[k], self.S - 1)
                for a in cands:
                    if _accepts(demand, a):
                        ctx = empty[:idx] + (Multiset([a]),) + empty[idx + 1 :]
                        out[(ctx, a)] = ("var",)
            case Lam(body, _, ty):
                if demand is None:
                    inner_allowed, inner_demand = None, None
                elif isinstance(demand, frozenset):
                    pairs = [unfold(a) for a in demand if not _is_atom(a)]
                    inner_allowed = frozenset(e for ms, _ in pairs for e in ms)
                    inner_demand = frozenset(b for _, b in pairs)
                else:
                    inner_allowed, inner_demand = demand.args, demand.res
                bkey, inner = self.table(body, binders + (ty,), allowed + (inner_allowed,), inner_demand)
                for (ctx, b) in inner:
                    a = pt(ctx[-1], b)
                    if _accepts(demand, a):
                        out.setdefault((ctx[:-1], a), ("lam", bkey, (ctx, b)))
            case App(f, p):
                h = _head(f)
                finite_head = isinstance(h, FVar) or (
                    isinstance(h, BVar) and allowed[depth - 1 - h.index] is not None
                )
                if finite_head:
                    fkey, tf = self.table(f, binders, allowed, _Arr(None, demand))
                    wanted = frozenset(e for (_, fp) in tf for e in unfold(fp)[0])
                    pkey, tp = self.table(p, binders, allowed, wanted)
                else:
                    pkey, tp = self.table(p, binders, allowed, None)
                    have = frozenset(a for (_, a) in tp)
                    fkey, tf = self.table(f, binders, allowed, _Arr(have, demand))
                by_point: dict = {}
                for (ctx, a) in tp:
                    by_point.setdefault(a, []).append(ctx)
                for (ctx0, fp) in tf:
                    ms, b = unfold(fp)
                    choices = [by_point.get(a, []) for a in ms]
                    if any(not c for c in choices):
                        continue
                    for total, picked in self._combos(ctx0, choices, allowed):
                        out.setdefault((total, b), ("app", fkey, (ctx0, fp), pkey, picked))
            case Bot():
                pass
        self.tables[key] = out
        return key, out

    def _combos(self, ctx0, choices, allowed):
        """Sum ``ctx0`` with one context per argument, pruning on the bounds."""

        def rec(k, acc, picked):
            if not self.fits(acc, allowed):
                return
            if k == len(choices):
                yield acc, tuple(picked)
                return
            for c in choices[k]:
                nxt = tuple(x + y for x, y in zip(acc, c))
                yield from rec(k + 1, nxt, picked + [c])

        yield from rec(0, ctx0, [])

    def run(self) -> tuple:
        ty = infer_type(self.term, self.env) if self.typed else None
        root = frozenset(self.points(ty, self.pb))
        key, entries = self.table(self.term, (), (), root)
        out = {}
        for (ctx, a), w in entries.items():
            if any(len(m) > self.cb or any(point_weight(x) > self.pb for x in m) for m in ctx):
                continue
            out[(ctx, a)] = w
        return key, out


def _is_atom(a: Point) -> bool:
    try:
        unfold(a)
    except TypeError:
        return True
    return False


def search(
    term: Term,
    ctx_bound: int,
    point_bound: int,
    variables: Iterable[str] | None = None,
    *,
    env: dict[str, SimpleType] | None = None,
    carriers: dict | None = None,
    slack: int = 3,
    with_derivations: bool = True,
) -> dict[TypingJudgment, TypingDeriv | None]:
    """Every derivable judgment for ``term`` within the bounds.

    Context multisets of the declared ``variables`` have at most
    ``ctx_bound`` elements, each of weight at most ``point_bound``, and
    the typed point has weight at most ``point_bound``.  Bound variables
    whose points are not determined by the surrounding term are
    enumerated up to weight ``point_bound + slack``.  With ``env`` the
    simply typed system is searched (atom carriers from ``carriers``),
    otherwise the D∞ system.
    """
    variables = sorted(free_vars(term)) if variables is None else list(variables)
    if not free_vars(term) <= set(variables):
        raise ValueError("variable spine does not cover the free variables")
    eng = _Search(term, variables, ctx_bound, point_bound, slack, env, carriers)
    key, found = eng.run()
    ty = infer_type(term, env) if env is not None else None
    types = [env[x] for x in variables] if env is not None else [None] * len(variables)
    result = {}
    for (ctx, a) in sorted(found, key=lambda k: (tuple(m.key() for m in k[0]), k[1].key())):
        jd = TypingJudgment(ctx_of(variables, ctx, types), term, a, ty)
        result[jd] = _rebuild(eng, term, key, ctx, a, list(variables), types) if with_derivations else None
    return result


def _rebuild(eng: _Search, t: Term, key: tuple, ctx: tuple, a: Point, names: list[str], types: list) -> TypingDeriv:
    w = eng.tables[key][(ctx, a)]
    subject = _named(t, names[eng.nf :])
    ty = None
    if eng.typed:
        ty = infer_type(subject, dict(zip(names, types)))
    jd = TypingJudgment(ctx_of(names, ctx, types), subject, a, ty)
    match w:
        case ("var",):
            return TVar(jd)
        case ("lam", bkey, (ictx, b)):
            y = fresh_name(t.name, set(names) | free_vars(subject))
            prem = _rebuild(eng, t.body, bkey, ictx, b, names + [y], types + [t.ty])
            return TAbs(jd, prem)
        case ("app", fkey, (fctx, fp), pkey, picked):
            fun = _rebuild(eng, t.fun, fkey, fctx, fp, names, types)
            ms, _b = unfold(fp)
            args = tuple(_rebuild(eng, t.arg, pkey, c, x, names, types) for c, x in zip(picked, ms))
            return TApp(jd, fun, args)
    raise AssertionError(w)


def _named(t: Term, binder_names: list[str]) -> Term:
    """Instantiate the dangling bound variables of ``t`` with the given binder names."""
    return _inst(t, binder_names, 0)


def _inst(t: Term, names: list[str], depth: int) -> Term:
    match t:
        case BVar(i):
            if i >= depth:
                return FVar(names[len(names) - 1 - (i - depth)])
            return t
        case FVar() | Bot():
            return t
        case Lam(b, hint, ty):
            return Lam(_inst(b, names, depth + 1), hint, ty)
        case App(f, a):
            return App(_inst(f, names, depth), _inst(a, names, depth))
    raise TypeError(t)


def judgment_key(jd: TypingJudgment) -> tuple:
    """Identity of a judgment ignoring the subject (for comparing two terms)."""
    return (tuple((n, m, t) for n, m, t in jd.ctx), jd.point)


def judgment_set(result: dict) -> set:
    return {judgment_key(j) for j in result}
