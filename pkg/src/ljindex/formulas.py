"""Indexed formulas.

Three constructors: typed atoms ``⟨α, f⟩``, the ⊥-sequence formulas
``⊥_J`` of the untyped system, and indexed arrows ``A ⇒_u B``.  Each
formula has a finite domain and a family assigning a point to every
index of the domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

from .indices import (
    EMPTY,
    Allocator,
    FrozenMap,
    IndexDataError,
    IndexMap,
    IndexSet,
    Multiset,
)
from .relmodel import STAR, Atom, Point, conforms, pt, unfold
from .terms import SimpleType, TArrow, TAtom


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class FAtom:
    """Typed atom ``⟨α, f⟩`` with ``f`` a finite map from indices to carrier elements."""

    name: str
    f: FrozenMap

    def __post_init__(self) -> None:
        if not isinstance(self.f, FrozenMap):
            object.__setattr__(self, "f", FrozenMap(self.f))
        IndexSet(self.f)  # validates the indices
        for v in self.f.values():
            if not isinstance(v, Atom):
                raise FormulaError(f"atom formula value {v!r} is not a carrier element")

    @cached_property
    def dom(self) -> IndexSet:
        return IndexSet(self.f)

    @cached_property
    def fam(self) -> FrozenMap:
        return self.f

    flavor = "typed"


@dataclass(frozen=True)
class FStar:
    """``⊥_J``: every index of ``J`` carries ``⋆``."""

    J: IndexSet

    def __post_init__(self) -> None:
        if not isinstance(self.J, IndexSet):
            object.__setattr__(self, "J", IndexSet(self.J))

    @property
    def dom(self) -> IndexSet:
        return self.J

    @cached_property
    def fam(self) -> FrozenMap:
        return FrozenMap((j, STAR) for j in self.J)

    flavor = "untyped"


@dataclass(frozen=True)
class FArrow:
    """``A ⇒_u B`` with ``u : dom(A) → dom(B)``."""

    arg: "Formula"
    map: IndexMap
    res: "Formula"

    def __post_init__(self) -> None:
        if not isinstance(self.map, IndexMap):
            object.__setattr__(self, "map", IndexMap(self.map))
        if self.map.source != self.arg.dom:
            raise FormulaError(
                f"arrow map source {self.map.source!r} differs from the argument domain {self.arg.dom!r}"
            )
        if not self.map.image() <= self.res.dom:
            raise FormulaError("arrow map does not land in the result domain")
        if self.arg.flavor != self.res.flavor:
            raise FormulaError("arrow mixes typed and untyped formulas")

    @property
    def dom(self) -> IndexSet:
        return self.res.dom

    @cached_property
    def fam(self) -> FrozenMap:
        af, bf = self.arg.fam, self.res.fam
        groups: dict[int, list[Point]] = {j: [] for j in self.res.dom}
        for k, j in self.map.graph:
            groups[j].append(af[k])
        return FrozenMap((j, pt(groups[j], bf[j])) for j in self.res.dom)

    @cached_property
    def flavor(self) -> str:
        return self.res.flavor


Formula = Union[FAtom, FStar, FArrow]


def dom(A: Formula) -> IndexSet:
    return A.dom


def fam(A: Formula) -> FrozenMap:
    return A.fam


def underlying_type(A: Formula) -> SimpleType | None:
    """The simple type of a typed formula, None for untyped formulas."""
    match A:
        case FAtom(name):
            return TAtom(name)
        case FStar():
            return None
        case FArrow(a, _, b):
            ta, tb = underlying_type(a), underlying_type(b)
            return None if ta is None else TArrow(ta, tb)
    raise TypeError(A)


def formula_size(A: Formula) -> int:
    match A:
        case FAtom(_, f):
            return 1 + len(f)
        case FStar(J):
            return 1 + len(J)
        case FArrow(a, u, b):
            return 1 + formula_size(a) + len(u) + formula_size(b)
    raise TypeError(A)


def indices_of(A: Formula) -> set[int]:
    """Every index mentioned anywhere in the formula."""
    match A:
        case FAtom(_, f):
            return set(f)
        case FStar(J):
            return set(J)
        case FArrow(a, u, b):
            return indices_of(a) | indices_of(b) | set(u.image())
    raise TypeError(A)


@dataclass(frozen=True)
class Hypothesis:
    """The sequent pseudo-formula ``⟨A⟩u``."""

    formula: Formula
    map: IndexMap = field(default_factory=IndexMap)

    def __post_init__(self) -> None:
        if not isinstance(self.map, IndexMap):
            object.__setattr__(self, "map", IndexMap(self.map))
        if self.map.source != self.formula.dom:
            raise FormulaError("hypothesis map is not total on the formula domain")


def hyp_family(h: Hypothesis, j: int) -> Multiset:
    """``[fam(A)_k | u(k) = j]``."""
    fa = h.formula.fam
    return Multiset(fa[k] for k, t in h.map.graph if t == j)


def hyp_families(h: Hypothesis, J: Iterable[int]) -> dict[int, Multiset]:
    out: dict[int, list] = {j: [] for j in J}
    fa = h.formula.fam
    for k, t in h.map.graph:
        if t not in out:
            raise FormulaError(f"hypothesis map reaches {t}, outside the conclusion domain")
        out[t].append(fa[k])
    return {j: Multiset(v) for j, v in out.items()}


# -- restriction, relocation, similarity ----------------------------------------


def restrict(A: Formula, J: Iterable[int]) -> Formula:
    J = J if isinstance(J, IndexSet) else IndexSet(J)
    match A:
        case FAtom(name, f):
            return FAtom(name, FrozenMap((j, p) for j, p in f.graph if j in J))
        case FStar(K):
            return FStar(K & J)
        case FArrow(a, u, b):
            keep = b.dom & J
            K = u.preimage(keep)
            return FArrow(restrict(a, K), u.restrict(K), restrict(b, keep))
    raise TypeError(A)


def relocate(u: Mapping[int, int], A: Formula) -> Formula:
    """``u·A`` for a bijection ``u`` whose source is ``dom(A)``."""
    u = u if isinstance(u, IndexMap) else IndexMap(u)
    if u.source != A.dom or not u.is_injective():
        raise IndexDataError("relocation needs a bijection defined exactly on the formula domain")
    return _relocate(u, A)


def _relocate(u: IndexMap, A: Formula) -> Formula:
    match A:
        case FAtom(name, f):
            return FAtom(name, FrozenMap((u[j], p) for j, p in f.graph))
        case FStar(K):
            return FStar(u.image(K))
        case FArrow(a, v, b):
            return FArrow(a, v.then(u), _relocate(u.restrict(b.dom), b))
    raise TypeError(A)


def similar(A: Formula, B: Formula) -> bool:
    if A.flavor != B.flavor:
        return False
    if A.flavor == "typed" and underlying_type(A) != underlying_type(B):
        return False
    return A.dom == B.dom and A.fam == B.fam


# -- family representation ------------------------------------------------------


def split_multisets(
    groups: Mapping[int, Multiset], allocator: Allocator
) -> tuple[IndexMap, FrozenMap]:
    """Spread each multiset ``m_j`` over fresh indices.

    Returns ``u : K → J`` and ``g : K → points`` with
    ``m_j = [g(k) | u(k) = j]``.  Elements are taken in canonical point
    order and fresh indices are assigned ascending.
    """
    ugraph, ggraph = [], []
    for j in sorted(groups):
        items = list(groups[j])
        for k, p in zip(allocator.take(len(items)), items):
            ugraph.append((k, j))
            ggraph.append((k, p))
    return IndexMap(ugraph), FrozenMap(ggraph)


def represent(
    ty: SimpleType | None,
    J: Iterable[int],
    f: Mapping[int, Point],
    allocator: Allocator,
    carriers: dict | None = None,
) -> Formula:
    """A formula with domain ``J`` and family ``f`` (of type ``ty``, or over D∞ when None)."""
    J = IndexSet(J)
    if set(f) != set(J):
        raise FormulaError("family must be total on J (and only on J)")
    if ty is None:
        return _represent_dinf(J, f, allocator)
    for j in J:
        if not conforms(f[j], ty, carriers):
            raise FormulaError(f"point {f[j]!r} at index {j} is not of type {ty}")
    return _represent_typed(ty, J, f, allocator)


def _represent_typed(ty: SimpleType, J: IndexSet, f, allocator: Allocator) -> Formula:
    if isinstance(ty, TAtom):
        return FAtom(ty.name, FrozenMap((j, f[j]) for j in J))
    u, g = split_multisets({j: f[j].mset for j in J}, allocator)
    A = _represent_typed(ty.arg, u.source, g, allocator)
    B = _represent_typed(ty.res, J, {j: f[j].res for j in J}, allocator)
    return FArrow(A, u, B)


def _represent_dinf(J: IndexSet, f, allocator: Allocator) -> Formula:
    if all(f[j] is STAR for j in J):
        return FStar(J)
    parts = {j: unfold(f[j]) for j in J}
    u, g = split_multisets({j: parts[j][0] for j in J}, allocator)
    A = _represent_dinf(u.source, g, allocator)
    B = _represent_dinf(J, {j: parts[j][1] for j in J}, allocator)
    return FArrow(A, u, B)


def arrow_depth(A: Formula) -> int:
    """Length of the arrow spine ``A₁ ⇒ A₂ ⇒ … ⇒ R``."""
    d = 0
    while isinstance(A, FArrow):
        d += 1
        A = A.res
    return d


def expand_spine(A: Formula, depth: int) -> Formula:
    """η-expand the spine of an untyped formula to at least ``depth`` arrows.

    ``⊥_J`` becomes ``⊥_∅ ⇒_∅ ⊥_J``, which has the same domain and family.
    """
    if depth <= 0:
        return A
    match A:
        case FArrow(a, u, b):
            return FArrow(a, u, expand_spine(b, depth - 1))
        case FStar():
            return FArrow(FStar(EMPTY), IndexMap(), expand_spine(A, depth - 1))
        case FAtom():
            raise FormulaError("typed formulas have a fixed spine")
    raise TypeError(A)


def show_formula(A: Formula) -> str:
    match A:
        case FAtom(name, f):
            return f"⟨{name},{dict(f.graph)}⟩"
        case FStar(J):
            return f"⊥{J!r}"
        case FArrow(a, u, b):
            return f"({show_formula(a)} ⇒{u!r} {show_formula(b)})"
    raise TypeError(A)
