"""Finite fragment of the relational Kleisli category and its points.

A morphism from X to Y is a finite set of pairs (m, b) with m a finite
multiset over X and b in Y.  Points of simple types and of the
relational reflexive object D∞ share one representation: ``STAR``,
atom elements, and pairs ``(m, a)``.  The pair ``([], STAR)`` is folded
into ``STAR`` on construction, so every D∞ point has a unique pair
decomposition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator

from .indices import Multiset, canon_key


class Point:
    """Base class for points; ordered by a canonical structural key."""

    __slots__ = ()

    def key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other: "Point") -> bool:
        return self.key() < other.key()

    def __le__(self, other: "Point") -> bool:
        return self.key() <= other.key()

    def __gt__(self, other: "Point") -> bool:
        return self.key() > other.key()

    def __ge__(self, other: "Point") -> bool:
        return self.key() >= other.key()


class _Star(Point):
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def key(self) -> tuple:
        return (0,)

    @property
    def mset(self) -> Multiset:
        return Multiset()

    @property
    def res(self) -> "Point":
        return self

    def __repr__(self) -> str:
        return "⋆"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


@dataclass(frozen=True, eq=True, repr=False)
class Atom(Point):
    """Element of an atom carriers' interpretation."""

    name: str

    def key(self) -> tuple:
        return (1, self.name)

    def __repr__(self) -> str:
        return self.name

    __lt__ = Point.__lt__
    __le__ = Point.__le__
    __gt__ = Point.__gt__
    __ge__ = Point.__ge__


@dataclass(frozen=True, eq=True, repr=False)
class Pair(Point):
    mset: Multiset
    res: Point
    _key: tuple = field(init=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_key", (2, len(self.mset), tuple(p.key() for p in self.mset), self.res.key())
        )

    def key(self) -> tuple:
        return self._key

    def __repr__(self) -> str:
        return f"({self.mset!r}, {self.res!r})"

    __lt__ = Point.__lt__
    __le__ = Point.__le__
    __gt__ = Point.__gt__
    __ge__ = Point.__ge__


def pt(m: Iterable[Point] | Multiset, a: Point) -> Point:
    """The pair ``(m, a)``; ``([], ⋆)`` is ``⋆``."""
    if not isinstance(m, Multiset):
        m = Multiset(m)
    if a is STAR and len(m) == 0:
        return STAR
    return Pair(m, a)


def unfold(a: Point) -> tuple[Multiset, Point]:
    """Pair decomposition of a D∞ point (``⋆`` unfolds to ``([], ⋆)``)."""
    if a is STAR:
        return Multiset(), STAR
    if isinstance(a, Pair):
        return a.mset, a.res
    raise TypeError(f"atom {a!r} has no pair decomposition")


def dinfr_size(a: Point) -> int:
    if a is STAR:
        return 0
    if isinstance(a, Pair):
        return dinfr_size(a.res) + sum(1 + dinfr_size(b) for b in a.mset)
    if isinstance(a, Atom):
        return 0
    raise TypeError(a)


point_size = dinfr_size


def point_weight(a: Point) -> int:
    """``dinfr_size`` plus one for every pair layer with an empty multiset.

    Points of bounded size form infinite sets, since ``([], a)`` has the
    size of ``a``; points of bounded weight are finitely many.  All
    enumeration and search bounds use the weight.
    """
    if isinstance(a, Pair):
        return point_weight(a.res) + sum(1 + point_weight(b) for b in a.mset) + (not a.mset)
    return 0


def is_dinf_point(a: Point) -> bool:
    if a is STAR:
        return True
    if isinstance(a, Pair):
        return is_dinf_point(a.res) and all(is_dinf_point(b) for b in a.mset)
    return False


def conforms(a: Point, ty, carriers: dict | None = None) -> bool:
    """Whether ``a`` is a point of the simple type ``ty``."""
    from .terms import TArrow, TAtom

    if isinstance(ty, TAtom):
        if not isinstance(a, Atom):
            return False
        return carriers is None or ty.name not in carriers or a.name in carriers[ty.name]
    if isinstance(ty, TArrow):
        return (
            isinstance(a, Pair)
            and conforms(a.res, ty.res, carriers)
            and all(conforms(b, ty.arg, carriers) for b in a.mset)
        )
    raise TypeError(ty)


# -- enumeration -------------------------------------------------------------


def _msets_of_total(pool: list[tuple[Point, int]], budget: int, start: int = 0) -> Iterator[tuple[list[Point], int]]:
    """Multisets over ``pool`` (point, cost) with total cost <= budget."""
    yield [], 0
    for idx in range(start, len(pool)):
        p, c = pool[idx]
        if c > budget:
            continue
        for rest, rc in _msets_of_total(pool, budget - c, idx):
            yield [p] + rest, c + rc


def enumerate_dinf(bound: int) -> list[Point]:
    """All D∞ points of weight <= bound, in canonical order."""
    by_weight: dict[int, list[Point]] = {0: [STAR]}
    out = {STAR}
    for n in range(1, bound + 1):
        # ([], a) with a of weight n - 1, a != ⋆
        found = {Pair(Multiset(), a) for a in by_weight.get(n - 1, []) if a is not STAR}
        # (m, a) with m non-empty: weight(a) + sum(1 + weight(b)) = n
        pool = [(b, 1 + w) for w in range(n) for b in by_weight.get(w, [])]
        for ms, cost in _msets_of_total(pool, n):
            if not ms:
                continue
            for a in by_weight.get(n - cost, []):
                found.add(pt(ms, a))
        by_weight[n] = sorted(found)
        out |= found
    return sorted(out)


def enumerate_points(ty, bound: int, carriers: dict | None = None) -> list[Point]:
    """All points of ``ty`` (or of D∞ when ``ty`` is None) of weight <= bound."""
    if ty is None:
        return enumerate_dinf(bound)
    from .terms import TArrow, TAtom

    carriers = carriers or {}

    def go(t, b: int) -> list[Point]:
        if isinstance(t, TAtom):
            return sorted(Atom(e) for e in carriers.get(t.name, ()))
        assert isinstance(t, TArrow)
        out = set()
        args = go(t.arg, b)
        for res in go(t.res, b):
            budget = b - point_size(res)
            if budget < 0:
                continue
            pool = [(x, 1 + point_size(x)) for x in args if 1 + point_size(x) <= budget]
            for ms, _ in _msets_of_total(pool, budget):
                out.add(pt(ms, res))
        return sorted(out)

    # size <= weight, so the size-bounded points contain every candidate
    return [a for a in go(ty, bound) if point_weight(a) <= bound]


# -- the category ----------------------------------------------------------------


@dataclass(frozen=True)
class FinSetObj:
    """An explicit finite object of the category."""

    carrier: frozenset
    name: str = field(default="X", compare=False)

    def __iter__(self):
        return iter(sorted(self.carrier, key=_elt_key))

    def __len__(self) -> int:
        return len(self.carrier)


def finset(elems: Iterable[Hashable], name: str = "X") -> FinSetObj:
    return FinSetObj(frozenset(elems), name)


_elt_key = canon_key


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    """Finite relation from finite multisets over the source to the target."""

    source: FinSetObj
    target: FinSetObj
    pairs: frozenset = frozenset()

    def __post_init__(self) -> None:
        for m, b in self.pairs:
            if b not in self.target.carrier:
                raise MorphismError(f"{b!r} is not in the target")
            for a in m:
                if a not in self.source.carrier:
                    raise MorphismError(f"{a!r} is not in the source")

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=lambda p: (_elt_key(p[0]), _elt_key(p[1])))

    def __len__(self) -> int:
        return len(self.pairs)


def morphism(source: FinSetObj, target: FinSetObj, pairs: Iterable[tuple]) -> Morphism:
    return Morphism(source, target, frozenset((_as_mset(m), b) for m, b in pairs))


def _as_mset(m) -> Multiset:
    if isinstance(m, Multiset):
        return m
    return Multiset(m)


def identity(X: FinSetObj) -> Morphism:
    return Morphism(X, X, frozenset((Multiset([a]), a) for a in X.carrier))


def compose(t: Morphism, s: Morphism) -> Morphism:
    """``t ∘ s`` by enumerating every way of feeding the b-occurrences of t.

    Occurrences of the same ``b`` are interchangeable, so each group of
    ``k`` equal occurrences takes a size-``k`` multiset of s-pairs.
    """
    if s.target != t.source:
        raise MorphismError("object mismatch: target(s) != source(t)")
    by_target: dict = {}
    for m, b in s.pairs:
        by_target.setdefault(b, []).append(m)
    out = set()
    for ms, c in t.pairs:
        groups = [
            itertools.combinations_with_replacement(by_target.get(b, []), k)
            for b, k in ms.counts().items()
        ]
        for combo in itertools.product(*groups):
            total: list = []
            for group in combo:
                for m in group:
                    total.extend(m.items)
            out.add((_as_mset(total), c))
    return Morphism(s.source, t.target, frozenset(out))


# Binary products: elements of X1 & X2 are tagged pairs (1, a) and (2, b).


def with_obj(*objs: FinSetObj) -> FinSetObj:
    return FinSetObj(
        frozenset((i, a) for i, X in enumerate(objs, start=1) for a in X.carrier),
        "&".join(X.name for X in objs),
    )


def projection(objs: tuple[FinSetObj, ...], j: int) -> Morphism:
    X = with_obj(*objs)
    return Morphism(X, objs[j - 1], frozenset((Multiset([(j, a)]), a) for a in objs[j - 1].carrier))


def tupling(ms: list[Morphism]) -> Morphism:
    src = ms[0].source
    if any(m.source != src for m in ms):
        raise MorphismError("tupling needs a common source")
    X = with_obj(*(m.target for m in ms))
    return Morphism(src, X, frozenset((m, (j, b)) for j, s in enumerate(ms, start=1) for m, b in s.pairs))


def arrow_obj(X: FinSetObj, Y: FinSetObj, cap: int) -> FinSetObj:
    """The part of ``X ⇒ Y = Mfin(X) × Y`` with multisets of cardinality <= cap."""
    elems = set()
    for k in range(cap + 1):
        for combo in itertools.combinations_with_replacement(sorted(X.carrier, key=_elt_key), k):
            for b in Y.carrier:
                elems.add((_as_mset(combo), b))
    return FinSetObj(frozenset(elems), f"({X.name}⇒{Y.name})")


def _split_tags(m: Multiset) -> tuple[list, list]:
    left, right = [], []
    for e in m:
        if not (isinstance(e, tuple) and len(e) == 2 and e[0] in (1, 2)):
            raise MorphismError(f"malformed tag on {e!r}")
        (left if e[0] == 1 else right).append(e[1])
    return left, right


def curry(s: Morphism, Z: FinSetObj, X: FinSetObj, cap: int | None = None) -> Morphism:
    """Transpose of ``s : Z & X -> Y`` into ``Z -> (X ⇒ Y)``."""
    out = set()
    for m, b in s.pairs:
        cs, as_ = _split_tags(m)
        out.add((_as_mset(cs), (_as_mset(as_), b)))
    if cap is None:
        cap = max((len(p[1][0]) for p in out), default=0)
    return Morphism(Z, arrow_obj(X, s.target, cap), frozenset(out))


def uncurry(c: Morphism, X: FinSetObj, Y: FinSetObj) -> Morphism:
    """Inverse regrouping of :func:`curry`."""
    out = set()
    for m, (ms, b) in c.pairs:
        tagged = [(1, z) for z in m] + [(2, a) for a in ms]
        out.add((_as_mset(tagged), b))
    return Morphism(with_obj(c.source, X), Y, frozenset(out))


def ev_fragment(X: FinSetObj, Y: FinSetObj, cap: int) -> Morphism:
    """Pairs of the evaluation morphism whose argument multiset has <= cap elements."""
    XY = arrow_obj(X, Y, cap)
    out = set()
    for k in range(cap + 1):
        for combo in itertools.combinations_with_replacement(sorted(X.carrier, key=_elt_key), k):
            m = _as_mset(combo)
            for b in Y.carrier:
                tagged = [(1, (m, b))] + [(2, a) for a in combo]
                out.add((_as_mset(tagged), b))
    return Morphism(with_obj(XY, X), Y, frozenset(out))


def random_morphism(rng, X: FinSetObj, Y: FinSetObj, max_card: int = 3, max_pairs: int = 4) -> Morphism:
    """A random finite morphism ``X -> Y`` drawn with ``rng`` (a ``random.Random``)."""
    xs, ys = list(X), list(Y)
    pairs = set()
    for _ in range(rng.randint(0, max_pairs) if ys else 0):
        k = rng.randint(0, max_card) if xs else 0
        pairs.add((_as_mset(rng.choice(xs) for _ in range(k)), rng.choice(ys)))
    return Morphism(X, Y, frozenset(pairs))


def category_laws(r: Morphism, s: Morphism, t: Morphism) -> dict[str, bool]:
    """Associativity and both identity laws on ``r : X→Y``, ``s : Y→Z``, ``t : Z→W``."""
    return {
        "associativity": compose(t, compose(s, r)) == compose(compose(t, s), r),
        "left-identity": compose(identity(r.target), r) == r,
        "right-identity": compose(r, identity(r.source)) == r,
    }
