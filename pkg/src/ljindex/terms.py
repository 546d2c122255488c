"""Simple types and λ-terms (typed, untyped, and with the constant ⊥).

Terms are locally nameless: bound variables are de Bruijn indices and
free variables are names.  Binder names are display hints only, so
structural equality is α-equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union


class TermError(ValueError):
    pass


class FuelExhausted(TermError):
    """β-normalisation did not reach a normal form within the fuel bound."""


# -- simple types -----------------------------------------------------------


@dataclass(frozen=True)
class TAtom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TArrow:
    arg: "SimpleType"
    res: "SimpleType"

    def __str__(self) -> str:
        a = str(self.arg)
        if isinstance(self.arg, TArrow):
            a = f"({a})"
        return f"{a}→{self.res}"


SimpleType = Union[TAtom, TArrow]


def type_depth(t: SimpleType) -> int:
    if isinstance(t, TAtom):
        return 0
    return 1 + max(type_depth(t.arg), type_depth(t.res))


# -- terms ---------------------------------------------------------------------


@dataclass(frozen=True)
class FVar:
    name: str


@dataclass(frozen=True)
class BVar:
    index: int


@dataclass(frozen=True)
class Lam:
    body: "Term"
    name: str = field(default="x", compare=False)
    ty: SimpleType | None = None


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Bot:
    pass


BOT = Bot()

Term = Union[FVar, BVar, Lam, App, Bot]


def var(name: str) -> FVar:
    return FVar(name)


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def close(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of ``name`` into the bound variable at ``depth``."""
    match t:
        case FVar(n):
            return BVar(depth) if n == name else t
        case BVar():
            return t
        case Lam(body, hint, ty):
            return Lam(close(body, name, depth + 1), hint, ty)
        case App(f, a):
            return App(close(f, name, depth), close(a, name, depth))
        case Bot():
            return t
    raise TypeError(t)


def lam(name: str, body: Term, ty: SimpleType | None = None) -> Lam:
    """``λname.body`` where ``body`` mentions ``name`` as a free variable."""
    return Lam(close(body, name), name, ty)


def open_(body: Term, value: Term, depth: int = 0) -> Term:
    """Instantiate the outermost bound variable of ``body`` with a locally closed term."""
    match body:
        case BVar(i):
            return value if i == depth else body
        case FVar() | Bot():
            return body
        case Lam(b, hint, ty):
            return Lam(open_(b, value, depth + 1), hint, ty)
        case App(f, a):
            return App(open_(f, value, depth), open_(a, value, depth))
    raise TypeError(body)


def free_vars(t: Term) -> set[str]:
    match t:
        case FVar(n):
            return {n}
        case BVar() | Bot():
            return set()
        case Lam(b):
            return free_vars(b)
        case App(f, a):
            return free_vars(f) | free_vars(a)
    raise TypeError(t)


def has_bot(t: Term) -> bool:
    match t:
        case Bot():
            return True
        case FVar() | BVar():
            return False
        case Lam(b):
            return has_bot(b)
        case App(f, a):
            return has_bot(f) or has_bot(a)
    raise TypeError(t)


def is_typed(t: Term) -> bool:
    """True when every abstraction carries a type annotation."""
    match t:
        case Lam(b, _, ty):
            return ty is not None and is_typed(b)
        case App(f, a):
            return is_typed(f) and is_typed(a)
        case _:
            return True


def size(t: Term) -> int:
    match t:
        case FVar() | BVar() | Bot():
            return 1
        case Lam(b):
            return 1 + size(b)
        case App(f, a):
            return 1 + size(f) + size(a)
    raise TypeError(t)


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding ``t[value/name]`` (value locally closed)."""
    match t:
        case FVar(n):
            return value if n == name else t
        case BVar() | Bot():
            return t
        case Lam(b, hint, ty):
            return Lam(subst(b, name, value), hint, ty)
        case App(f, a):
            return App(subst(f, name, value), subst(a, name, value))
    raise TypeError(t)


def rename(t: Term, mapping: dict[str, str]) -> Term:
    match t:
        case FVar(n):
            return FVar(mapping.get(n, n))
        case BVar() | Bot():
            return t
        case Lam(b, hint, ty):
            return Lam(rename(b, mapping), hint, ty)
        case App(f, a):
            return App(rename(f, mapping), rename(a, mapping))
    raise TypeError(t)


def fresh_name(hint: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if hint not in avoid:
        return hint
    k = 1
    while f"{hint}{k}" in avoid:
        k += 1
    return f"{hint}{k}"


# -- de Bruijn shifting (β only) ----------------------------------------------


def _shift(t: Term, d: int, cutoff: int = 0) -> Term:
    match t:
        case BVar(i):
            return BVar(i + d) if i >= cutoff else t
        case FVar() | Bot():
            return t
        case Lam(b, hint, ty):
            return Lam(_shift(b, d, cutoff + 1), hint, ty)
        case App(f, a):
            return App(_shift(f, d, cutoff), _shift(a, d, cutoff))
    raise TypeError(t)


def _subst_bvar(t: Term, j: int, s: Term) -> Term:
    match t:
        case BVar(i):
            return s if i == j else t
        case FVar() | Bot():
            return t
        case Lam(b, hint, ty):
            return Lam(_subst_bvar(b, j + 1, _shift(s, 1)), hint, ty)
        case App(f, a):
            return App(_subst_bvar(f, j, s), _subst_bvar(a, j, s))
    raise TypeError(t)


def _beta_contract(body: Term, arg: Term) -> Term:
    return _shift(_subst_bvar(body, 0, _shift(arg, 1)), -1)


def beta_step(t: Term) -> Term | None:
    """One leftmost-outermost β-step, or None when ``t`` is β-normal."""
    match t:
        case App(Lam(body), a):
            return _beta_contract(body, a)
        case App(f, a):
            f2 = beta_step(f)
            if f2 is not None:
                return App(f2, a)
            a2 = beta_step(a)
            return None if a2 is None else App(f, a2)
        case Lam(b, hint, ty):
            b2 = beta_step(b)
            return None if b2 is None else Lam(b2, hint, ty)
        case _:
            return None


def beta_normalize(t: Term, fuel: int = 1000) -> Term:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for _ in range(fuel):
        nxt = beta_step(t)
        if nxt is None:
            return t
        t = nxt
    if beta_step(t) is None:
        return t
    raise FuelExhausted(f"no β-normal form within {fuel} steps")


# -- Ω-reduction -----------------------------------------------------------------


def omega_normalize(t: Term) -> Term:
    """Normal form for ``λx.⊥ → ⊥`` and ``⊥ M → ⊥``."""
    match t:
        case Lam(b, hint, ty):
            b2 = omega_normalize(b)
            return BOT if isinstance(b2, Bot) else Lam(b2, hint, ty)
        case App(f, a):
            f2 = omega_normalize(f)
            if isinstance(f2, Bot):
                return BOT
            return App(f2, omega_normalize(a))
        case _:
            return t


def omega_equiv_bot(t: Term) -> bool:
    return isinstance(omega_normalize(t), Bot)


# -- η ---------------------------------------------------------------------------


def _occurs_bvar(t: Term, j: int) -> bool:
    match t:
        case BVar(i):
            return i == j
        case FVar() | Bot():
            return False
        case Lam(b):
            return _occurs_bvar(b, j + 1)
        case App(f, a):
            return _occurs_bvar(f, j) or _occurs_bvar(a, j)
    raise TypeError(t)


def eta_normal_form(t: Term) -> Term:
    match t:
        case Lam(b, hint, ty):
            b2 = eta_normal_form(b)
            if isinstance(b2, App) and b2.arg == BVar(0) and not _occurs_bvar(b2.fun, 0):
                return _shift(b2.fun, -1)
            return Lam(b2, hint, ty)
        case App(f, a):
            return App(eta_normal_form(f), eta_normal_form(a))
        case _:
            return t


def eta_equivalent(m: Term, n: Term) -> bool:
    if has_bot(m) or has_bot(n):
        raise TermError("η-equivalence is decided on ⊥-free terms only")
    return eta_normal_form(m) == eta_normal_form(n)


# -- approximants Q(x) and Q°(M) -------------------------------------------------


def _spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def _resolve(t: Term, depth: int):
    """Identity of a variable occurrence: ('f', name) or ('b', binder level)."""
    if isinstance(t, FVar):
        return ("f", t.name)
    if isinstance(t, BVar):
        if t.index >= depth:
            raise TermError("term is not locally closed")
        return ("b", depth - 1 - t.index)
    return None


def _in_q(t: Term, head, depth: int) -> bool:
    levels = []
    while isinstance(t, Lam):
        levels.append(("b", depth))
        depth += 1
        t = t.body
    h, args = _spine(t)
    if _resolve(h, depth) != head:
        return False
    n = 0
    while n < len(args) and not isinstance(args[n], Bot):
        n += 1
    if any(not isinstance(a, Bot) for a in args[n:]):
        return False
    if n > len(levels):
        return False
    return all(_in_q(args[i], levels[i], depth) for i in range(n))


def qproj_member(o: Term, x: str) -> bool:
    """Whether ``o`` belongs to Q(x)."""
    return _in_q(o, ("f", x), 0)


def qprojo_member(o: Term, m: Term) -> bool:
    """Whether ``o`` belongs to Q°(m).

    A ⊥ inside ``m`` is matched only by the Ω-collapse clause.
    """
    return _in_qo(o, m, 0)


def _in_qo(o: Term, m: Term, depth: int) -> bool:
    if omega_equiv_bot(o):
        return True
    match m:
        case FVar() | BVar():
            return _in_q(o, _resolve(m, depth), depth)
        case Lam(mb):
            return isinstance(o, Lam) and _in_qo(o.body, mb, depth + 1)
        case App(mf, ma):
            return isinstance(o, App) and _in_qo(o.fun, mf, depth) and _in_qo(o.arg, ma, depth)
    return False


# -- simple type inference (Church style) ------------------------------------------


def infer_type(t: Term, env: dict[str, SimpleType]) -> SimpleType:
    def go(t: Term, bound: list[SimpleType]) -> SimpleType:
        match t:
            case FVar(n):
                if n not in env:
                    raise TermError(f"unbound variable {n}")
                return env[n]
            case BVar(i):
                return bound[-1 - i]
            case Lam(b, _, ty):
                if ty is None:
                    raise TermError("abstraction without type annotation")
                return TArrow(ty, go(b, bound + [ty]))
            case App(f, a):
                tf = go(f, bound)
                ta = go(a, bound)
                if not isinstance(tf, TArrow) or tf.arg != ta:
                    raise TermError(f"ill-typed application: {tf} applied to {ta}")
                return tf.res
            case Bot():
                raise TermError("⊥ has no simple type")
        raise TypeError(t)

    return go(t, [])


# -- display ---------------------------------------------------------------------


def show(t: Term, names: list[str] | None = None) -> str:
    """Readable named rendering, choosing binder names that avoid capture."""
    used = set(free_vars(t))

    def go(t: Term, env: list[str]) -> str:
        match t:
            case FVar(n):
                return n
            case BVar(i):
                return env[-1 - i]
            case Bot():
                return "⊥"
            case Lam(b, hint, ty):
                nm = fresh_name(hint, used | set(env))
                ann = f":{ty}" if ty is not None else ""
                return f"λ{nm}{ann}.{go(b, env + [nm])}"
            case App(f, a):
                fs = go(f, env)
                if isinstance(f, Lam):
                    fs = f"({fs})"
                as_ = go(a, env)
                if isinstance(a, (App, Lam)):
                    as_ = f"({as_})"
                return f"{fs} {as_}"
        raise TypeError(t)

    return go(t, list(names or []))
