"""S-expression reading and printing for every object of the package.

The concrete syntax (``;`` starts a comment)::

    index data   (mset e ...)  (iset 1 2)  (imap (1 5) (2 5))
    points       star  a  (pt (mset p ...) p)      ; bare symbols are atoms
    types        (atom a)  (arr σ τ)
    terms        (var x)  (app M N)  (lam x M)  (lam x σ M)  bot
    formulas     (fatom α ((j p) ...))  (fstar (iset ...))  (farr A (imap ...) B)
    sequents     (hyp A (imap ...))  (seq (hyps h ...) B)
    proofs       (ax S i)  (intro S π)  (elim S π₁ π₂ (splits (K L) ...))  (starax S)
    judgments    (judg (ctx (x (mset ...) [σ]) ...) M p [σ])
    derivations  (tvar J)  (tabs J d)  (tapp J d (d₁ ... dₖ))
    families     (family (names x ...) M (derivs (j d) ...) [(types σ ...) (type τ)])
    Church       (cvar x (iset ...))  (cabs x A (imap ...) s)  (capp s t)  cbot
                 (church (ctx (x h) ...) s B)
    misc         (points ((j p) ...) [σ])  (env (x σ) ...)

A file is a sequence of forms; ``(carrier α (p q))`` declares an atom
carrier and ``(def name obj)`` names an object.  Any other form is an
anonymous object named ``_k``, with ``k`` its 0-based position in the file.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import sexpdata
from sexpdata import Symbol

from .church import CAbs, CApp, CBot, CVar
from .formulas import FArrow, FAtom, FStar, Hypothesis
from .indices import FrozenMap, IndexMap, IndexSet, Multiset
from .itsys import TAbs, TApp, TVar, TypingJudgment
from .ljker import Ax, Elim, Intro, Sequent, StarAx
from .relmodel import STAR, Atom, Pair, Point, pt
from .terms import (
    BOT,
    App,
    Bot,
    BVar,
    FVar,
    Lam,
    TArrow,
    TAtom,
    free_vars,
    fresh_name,
    lam,
    open_,
    var,
)
from .xlate import FamilyTyping


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Points:
    """A finite family of points, optionally with the simple type it lives in."""

    fam: FrozenMap
    ty: Any = None

    def __post_init__(self) -> None:
        if not isinstance(self.fam, FrozenMap):
            object.__setattr__(self, "fam", FrozenMap(self.fam))


@dataclass(frozen=True)
class Env:
    """Simple types of free variables, in declaration order."""

    types: tuple  # of (name, SimpleType)

    def as_dict(self) -> dict:
        return dict(self.types)


@dataclass(frozen=True)
class ChurchJudgment:
    ctx: tuple  # of (name, Hypothesis)
    term: Any
    concl: Any


@dataclass
class Workspace:
    carriers: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)  # name -> object, in file order

    def of_kind(self, *kinds: type) -> list[tuple[str, Any]]:
        return [(n, o) for n, o in self.objects.items() if isinstance(o, kinds)]


S = Symbol


# -- printing --------------------------------------------------------------------


def to_sexp(obj: Any) -> Any:
    match obj:
        case bool():
            raise TypeError("booleans have no textual form")
        case int():
            return obj
        case str():
            return S(obj)
        case Multiset():
            return [S("mset"), *(to_sexp(e) for e in obj)]
        case IndexSet():
            return [S("iset"), *sorted(obj)]
        case IndexMap():
            return [S("imap"), *([k, v] for k, v in sorted(obj.graph))]
        case Point() if obj is STAR:
            return S("star")
        case Atom(name):
            return S(name)
        case Pair(m, a):
            return [S("pt"), to_sexp(m), to_sexp(a)]
        case TAtom(name):
            return [S("atom"), S(name)]
        case TArrow(a, b):
            return [S("arr"), to_sexp(a), to_sexp(b)]
        case FVar(x):
            return [S("var"), S(x)]
        case BVar():
            raise ValueError("dangling bound variable")
        case Bot():
            return S("bot")
        case App(f, a):
            return [S("app"), to_sexp(f), to_sexp(a)]
        case Lam():
            return _lam_sexp(obj, set())
        case FAtom(name, f):
            return [S("fatom"), S(name), [[j, to_sexp(p)] for j, p in sorted(f.graph)]]
        case FStar(J):
            return [S("fstar"), to_sexp(J)]
        case FArrow(a, u, b):
            return [S("farr"), to_sexp(a), to_sexp(u), to_sexp(b)]
        case Hypothesis(A, u):
            return [S("hyp"), to_sexp(A), to_sexp(u)]
        case Sequent(hyps, B):
            return [S("seq"), [S("hyps"), *(to_sexp(h) for h in hyps)], to_sexp(B)]
        case Ax(seq, i):
            return [S("ax"), to_sexp(seq), i]
        case Intro(seq, p):
            return [S("intro"), to_sexp(seq), to_sexp(p)]
        case Elim(seq, p1, p2, splits):
            return [
                S("elim"),
                to_sexp(seq),
                to_sexp(p1),
                to_sexp(p2),
                [S("splits"), *([to_sexp(K), to_sexp(L)] for K, L in splits)],
            ]
        case StarAx(seq):
            return [S("starax"), to_sexp(seq)]
        case TypingJudgment(ctx, M, a, ty):
            entries = []
            for x, m, sigma in ctx:
                e = [S(x), to_sexp(m)]
                if sigma is not None:
                    e.append(to_sexp(sigma))
                entries.append(e)
            out = [S("judg"), [S("ctx"), *entries], to_sexp(M), to_sexp(a)]
            if ty is not None:
                out.append(to_sexp(ty))
            return out
        case TVar(jd):
            return [S("tvar"), to_sexp(jd)]
        case TAbs(jd, d):
            return [S("tabs"), to_sexp(jd), to_sexp(d)]
        case TApp(jd, d, ds):
            return [S("tapp"), to_sexp(jd), to_sexp(d), [to_sexp(e) for e in ds]]
        case FamilyTyping():
            out = [
                S("family"),
                [S("names"), *(S(x) for x in obj.names)],
                to_sexp(obj.subject),
                [S("derivs"), *([j, to_sexp(d)] for j, d in sorted(obj.derivs.graph))],
            ]
            if obj.typed:
                out.append([S("types"), *(to_sexp(t) for t in obj.var_types)])
                out.append([S("type"), to_sexp(obj.ty)])
            return out
        case CVar(x, J):
            return [S("cvar"), S(x), to_sexp(J)]
        case CAbs(x, A, u, s):
            return [S("cabs"), S(x), to_sexp(A), to_sexp(u), to_sexp(s)]
        case CApp(s, t):
            return [S("capp"), to_sexp(s), to_sexp(t)]
        case CBot():
            return S("cbot")
        case ChurchJudgment(ctx, s, B):
            return [
                S("church"),
                [S("ctx"), *([S(x), to_sexp(h)] for x, h in ctx)],
                to_sexp(s),
                to_sexp(B),
            ]
        case Env(types):
            return [S("env"), *([S(x), to_sexp(t)] for x, t in types)]
        case Points(f, ty):
            out = [S("points"), [[j, to_sexp(p)] for j, p in sorted(f.graph)]]
            if ty is not None:
                out.append(to_sexp(ty))
            return out
    raise TypeError(f"no textual form for {type(obj).__name__}")


def _lam_sexp(t: Lam, avoid: set) -> list:
    x = fresh_name(t.name, free_vars(t.body) | avoid)
    body = to_sexp(open_(t.body, var(x)))
    if t.ty is None:
        return [S("lam"), S(x), body]
    return [S("lam"), S(x), to_sexp(t.ty), body]


def dumps(obj: Any) -> str:
    return sexpdata.dumps(to_sexp(obj))


def dump_workspace(ws: Workspace) -> str:
    lines = []
    for a, elems in ws.carriers.items():
        lines.append(sexpdata.dumps([S("carrier"), S(a), [S(e) for e in elems]]))
    for name, obj in ws.objects.items():
        lines.append(sexpdata.dumps([S("def"), S(name), to_sexp(obj)]))
    return "\n".join(lines) + "\n"


# -- parsing ---------------------------------------------------------------------


def _sym(x: Any, what: str = "symbol") -> str:
    if isinstance(x, Symbol):
        return str(x)
    raise ParseError(f"expected a {what}, got {x!r}")


def _int(x: Any) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ParseError(f"expected an index, got {x!r}")


def _form(x: Any) -> tuple[str, list]:
    if isinstance(x, list) and x and isinstance(x[0], Symbol):
        return str(x[0]), x[1:]
    raise ParseError(f"expected a tagged form, got {x!r}")


def _arity(head: str, args: list, *ns: int) -> None:
    if len(args) not in ns:
        raise ParseError(f"({head} ...) takes {' or '.join(map(str, ns))} arguments, got {len(args)}")


_ATOMS = {"star": STAR, "bot": BOT, "cbot": CBot()}


def from_sexp(x: Any) -> Any:
    """Build the object denoted by a parsed s-expression."""
    if isinstance(x, Symbol):
        return _ATOMS.get(str(x)) or Atom(str(x))
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    head, args = _form(x)
    try:
        return _build(head, args)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise ParseError(f"in ({head} ...): {e}") from e


def _point(x: Any) -> Point:
    p = from_sexp(x)
    if not isinstance(p, Point):
        raise ParseError(f"expected a point, got {x!r}")
    return p


def _pairs(xs: Any, val) -> list[tuple]:
    if not isinstance(xs, list):
        raise ParseError(f"expected a list of pairs, got {xs!r}")
    out = []
    for e in xs:
        if not (isinstance(e, list) and len(e) == 2):
            raise ParseError(f"expected a pair, got {e!r}")
        out.append((_int(e[0]), val(e[1])))
    return out


def _typed(x: Any, cls, what: str):
    o = from_sexp(x)
    if not isinstance(o, cls):
        raise ParseError(f"expected {what}, got {x!r}")
    return o


_TYPE = (TAtom, TArrow)
_TERM = (FVar, App, Lam, Bot)
_FORMULA = (FAtom, FStar, FArrow)
_PROOF = (Ax, Intro, Elim, StarAx)
_DERIV = (TVar, TAbs, TApp)
_PRE = (CVar, CAbs, CApp, CBot)


def _build(head: str, args: list) -> Any:
    match head:
        case "mset":
            return Multiset(from_sexp(a) for a in args)
        case "iset":
            return IndexSet(_int(a) for a in args)
        case "imap":
            return IndexMap(_pairs(args, _int))
        case "pt":
            _arity(head, args, 2)
            m = _typed(args[0], Multiset, "a multiset")
            return pt(m, _point(args[1]))
        case "atom":
            _arity(head, args, 1)
            return TAtom(_sym(args[0]))
        case "arr":
            _arity(head, args, 2)
            return TArrow(_typed(args[0], _TYPE, "a type"), _typed(args[1], _TYPE, "a type"))
        case "var":
            _arity(head, args, 1)
            return var(_sym(args[0]))
        case "app":
            _arity(head, args, 2)
            return App(_typed(args[0], _TERM, "a term"), _typed(args[1], _TERM, "a term"))
        case "lam":
            _arity(head, args, 2, 3)
            ty = _typed(args[1], _TYPE, "a type") if len(args) == 3 else None
            return lam(_sym(args[0]), _typed(args[-1], _TERM, "a term"), ty)
        case "fatom":
            _arity(head, args, 2)
            return FAtom(_sym(args[0]), FrozenMap(_pairs(args[1], _point)))
        case "fstar":
            _arity(head, args, 1)
            return FStar(_typed(args[0], IndexSet, "an index set"))
        case "farr":
            _arity(head, args, 3)
            return FArrow(
                _typed(args[0], _FORMULA, "a formula"),
                _typed(args[1], IndexMap, "an index map"),
                _typed(args[2], _FORMULA, "a formula"),
            )
        case "hyp":
            _arity(head, args, 2)
            return Hypothesis(_typed(args[0], _FORMULA, "a formula"), _typed(args[1], IndexMap, "an index map"))
        case "seq":
            _arity(head, args, 2)
            h, hs = _form(args[0])
            if h != "hyps":
                raise ParseError("sequent needs (hyps ...)")
            return Sequent(
                tuple(_typed(a, Hypothesis, "a hypothesis") for a in hs),
                _typed(args[1], _FORMULA, "a formula"),
            )
        case "ax":
            _arity(head, args, 2)
            return Ax(_typed(args[0], Sequent, "a sequent"), _int(args[1]))
        case "intro":
            _arity(head, args, 2)
            return Intro(_typed(args[0], Sequent, "a sequent"), _typed(args[1], _PROOF, "a proof"))
        case "elim":
            _arity(head, args, 4)
            h, sp = _form(args[3])
            if h != "splits":
                raise ParseError("elim needs (splits ...)")
            splits = []
            for e in sp:
                if not (isinstance(e, list) and len(e) == 2):
                    raise ParseError(f"bad split {e!r}")
                splits.append(tuple(_typed(k, IndexSet, "an index set") for k in e))
            return Elim(
                _typed(args[0], Sequent, "a sequent"),
                _typed(args[1], _PROOF, "a proof"),
                _typed(args[2], _PROOF, "a proof"),
                tuple(splits),
            )
        case "starax":
            _arity(head, args, 1)
            return StarAx(_typed(args[0], Sequent, "a sequent"))
        case "judg":
            _arity(head, args, 3, 4)
            h, es = _form(args[0])
            if h != "ctx":
                raise ParseError("judgment needs (ctx ...)")
            ctx = []
            for e in es:
                if not (isinstance(e, list) and len(e) in (2, 3)):
                    raise ParseError(f"bad context entry {e!r}")
                ty = _typed(e[2], _TYPE, "a type") if len(e) == 3 else None
                ctx.append((_sym(e[0]), _typed(e[1], Multiset, "a multiset"), ty))
            ty = _typed(args[3], _TYPE, "a type") if len(args) == 4 else None
            return TypingJudgment(tuple(ctx), _typed(args[1], _TERM, "a term"), _point(args[2]), ty)
        case "tvar":
            _arity(head, args, 1)
            return TVar(_typed(args[0], TypingJudgment, "a judgment"))
        case "tabs":
            _arity(head, args, 2)
            return TAbs(_typed(args[0], TypingJudgment, "a judgment"), _typed(args[1], _DERIV, "a derivation"))
        case "tapp":
            _arity(head, args, 3)
            if not isinstance(args[2], list):
                raise ParseError("tapp needs a list of argument derivations")
            return TApp(
                _typed(args[0], TypingJudgment, "a judgment"),
                _typed(args[1], _DERIV, "a derivation"),
                tuple(_typed(a, _DERIV, "a derivation") for a in args[2]),
            )
        case "family":
            _arity(head, args, 3, 5)
            h, ns = _form(args[0])
            if h != "names":
                raise ParseError("family needs (names ...)")
            h, ds = _form(args[2])
            if h != "derivs":
                raise ParseError("family needs (derivs ...)")
            derivs = FrozenMap(_pairs(ds, lambda d: _typed(d, _DERIV, "a derivation")))
            var_types = ty = None
            if len(args) == 5:
                h, ts = _form(args[3])
                h2, t = _form(args[4])
                if (h, h2) != ("types", "type") or len(t) != 1:
                    raise ParseError("typed family needs (types ...) (type τ)")
                var_types = tuple(_typed(a, _TYPE, "a type") for a in ts)
                ty = _typed(t[0], _TYPE, "a type")
            return FamilyTyping(
                tuple(_sym(n) for n in ns), _typed(args[1], _TERM, "a term"), derivs, var_types, ty
            )
        case "cvar":
            _arity(head, args, 2)
            return CVar(_sym(args[0]), _typed(args[1], IndexSet, "an index set"))
        case "cabs":
            _arity(head, args, 4)
            return CAbs(
                _sym(args[0]),
                _typed(args[1], _FORMULA, "a formula"),
                _typed(args[2], IndexMap, "an index map"),
                _typed(args[3], _PRE, "a pre-term"),
            )
        case "capp":
            _arity(head, args, 2)
            return CApp(_typed(args[0], _PRE, "a pre-term"), _typed(args[1], _PRE, "a pre-term"))
        case "church":
            _arity(head, args, 3)
            h, es = _form(args[0])
            if h != "ctx":
                raise ParseError("church judgment needs (ctx ...)")
            ctx = []
            for e in es:
                if not (isinstance(e, list) and len(e) == 2):
                    raise ParseError(f"bad context entry {e!r}")
                ctx.append((_sym(e[0]), _typed(e[1], Hypothesis, "a hypothesis")))
            return ChurchJudgment(
                tuple(ctx), _typed(args[1], _PRE, "a pre-term"), _typed(args[2], _FORMULA, "a formula")
            )
        case "env":
            out = []
            for e in args:
                if not (isinstance(e, list) and len(e) == 2):
                    raise ParseError(f"bad environment entry {e!r}")
                out.append((_sym(e[0]), _typed(e[1], _TYPE, "a type")))
            return Env(tuple(out))
        case "points":
            _arity(head, args, 1, 2)
            ty = _typed(args[1], _TYPE, "a type") if len(args) == 2 else None
            return Points(FrozenMap(_pairs(args[0], _point)), ty)
    raise ParseError(f"unknown form ({head} ...)")


def _read_all(text: str) -> list:
    try:
        return sexpdata.loads(f"({text}\n)")
    except Exception as e:  # sexpdata raises several exception types
        raise ParseError(f"malformed s-expression: {e}") from e


def loads(text: str) -> Any:
    forms = _read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}")
    return from_sexp(forms[0])


def load_workspace(text: str) -> Workspace:
    """Parse every form of a file; names must be unique."""
    ws = Workspace()
    for k, form in enumerate(_read_all(text)):
        if isinstance(form, list) and form and form[0] == S("carrier"):
            if len(form) != 3 or not isinstance(form[2], list):
                raise ParseError("carrier declaration is (carrier α (p ...))")
            a = _sym(form[1])
            if a in ws.carriers:
                raise ParseError(f"carrier {a} declared twice")
            ws.carriers[a] = tuple(_sym(e) for e in form[2])
            continue
        if isinstance(form, list) and form and form[0] == S("def"):
            if len(form) != 3:
                raise ParseError("definition is (def name obj)")
            name, obj = _sym(form[1]), from_sexp(form[2])
        else:
            name, obj = f"_{k}", from_sexp(form)
        if name in ws.objects:
            raise ParseError(f"name {name} defined twice")
        ws.objects[name] = obj
    return ws
