"""Finite multisets, index sets and index maps.

Indices are natural numbers.  Every index set here is finite, so every
index map is almost injective by construction.
"""
from __future__ import annotations

import random
from collections import Counter
from typing import Generic, Iterable, Iterator, Mapping, TypeVar

E = TypeVar("E")


class IndexDataError(ValueError):
    """Raised on malformed index data (overlap, out of range, not a bijection)."""


def canon_key(e) -> tuple:
    """Total structural order used to canonicalise multisets of mixed carriers."""
    if hasattr(e, "key") and callable(e.key):
        return (0, e.key())
    if isinstance(e, Multiset):
        return (1, tuple(canon_key(x) for x in e))
    if isinstance(e, tuple):
        return (2, tuple(canon_key(x) for x in e))
    if isinstance(e, bool) or not isinstance(e, (int, str)):
        return (4, type(e).__name__, repr(e))
    return (3, 0 if isinstance(e, int) else 1, e)


class Multiset(Generic[E]):
    """Frozen finite multiset over an ordered carrier.

    Elements are kept as a sorted tuple, which is the canonical form used
    for equality, hashing, ordering and printing.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Iterable[E] = ()) -> None:
        self._items = tuple(sorted(items, key=canon_key))
        self._hash = hash(self._items)

    @classmethod
    def from_counts(cls, counts: Mapping[E, int]) -> "Multiset[E]":
        out = []
        for e, c in counts.items():
            if c < 0:
                raise ValueError(f"negative multiplicity for {e!r}")
            out.extend([e] * c)
        return cls(out)

    @property
    def items(self) -> tuple:
        return self._items

    def __iter__(self) -> Iterator[E]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def card(self) -> int:
        return len(self._items)

    def count(self, e: E) -> int:
        return self._items.count(e)

    def counts(self) -> dict:
        return dict(Counter(self._items))

    def support(self) -> list[E]:
        return sorted(set(self._items))

    def __contains__(self, e: object) -> bool:
        return e in self._items

    def __add__(self, other: "Multiset[E]") -> "Multiset[E]":
        return Multiset(self._items + other._items)

    def __sub__(self, other: "Multiset[E]") -> "Multiset[E]":
        c = Counter(self._items)
        c.subtract(Counter(other._items))
        if any(v < 0 for v in c.values()):
            raise ValueError("multiset difference is not defined: not a sub-multiset")
        return Multiset.from_counts(c)

    def issubset(self, other: "Multiset[E]") -> bool:
        c = Counter(other._items)
        c.subtract(Counter(self._items))
        return all(v >= 0 for v in c.values())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiset) and self._items == other._items

    def __lt__(self, other: "Multiset[E]") -> bool:
        return self.key() < other.key()

    def key(self) -> tuple:
        return (len(self._items), tuple(canon_key(x) for x in self._items))

    def __le__(self, other: "Multiset[E]") -> bool:
        return self == other or self < other

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "[" + ", ".join(map(repr, self._items)) + "]"


def mset(*items: E) -> Multiset[E]:
    return Multiset(items)


def mset_from_list(items: Iterable[E]) -> Multiset[E]:
    return Multiset(items)


def mset_sum(msets: Iterable[Multiset[E]]) -> Multiset[E]:
    out: list = []
    for m in msets:
        out.extend(m.items)
    return Multiset(out)


def mset_select(family: Mapping[int, E], J: Iterable[int]) -> Multiset[E]:
    """The multiset ``[family(i) | i in J]``."""
    out = []
    for i in J:
        if i not in family:
            raise IndexDataError(f"index {i} outside the family domain")
        out.append(family[i])
    return Multiset(out)


class IndexSet(frozenset):
    """Finite set of natural-number indices; ``+`` is the disjoint sum."""

    def __new__(cls, elems: Iterable[int] = ()):
        elems = list(elems)
        for e in elems:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise IndexDataError(f"not an index: {e!r}")
        return super().__new__(cls, elems)

    def __add__(self, other: "IndexSet") -> "IndexSet":
        overlap = self & other
        if overlap:
            raise IndexDataError(f"disjoint sum of overlapping index sets (common: {sorted(overlap)})")
        return IndexSet(frozenset.__or__(self, other))

    def __or__(self, other) -> "IndexSet":
        return IndexSet(frozenset.__or__(self, other))

    def __and__(self, other) -> "IndexSet":
        return IndexSet(frozenset.__and__(self, other))

    def __sub__(self, other) -> "IndexSet":
        return IndexSet(frozenset.__sub__(self, other))

    def sorted(self) -> list[int]:
        return sorted(self)

    def isdisjoint_from(self, other: Iterable[int]) -> bool:
        return self.isdisjoint(other)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, sorted(self))) + "}"


EMPTY = IndexSet()


def iset(*elems: int) -> IndexSet:
    return IndexSet(elems)


class FrozenMap(Mapping):
    """Immutable finite map with sorted canonical graph."""

    __slots__ = ("_d", "_graph", "_hash")

    def __init__(self, data: Mapping | Iterable[tuple] = ()) -> None:
        d = dict(data)
        self._d = d
        self._graph = tuple(sorted(d.items(), key=lambda kv: kv[0]))
        self._hash = hash(self._graph)

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(k for k, _ in self._graph)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FrozenMap):
            return self._graph == other._graph
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    @property
    def graph(self) -> tuple:
        return self._graph

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{k!r}↦{v!r}" for k, v in self._graph) + "}"


class IndexMap(FrozenMap):
    """Finite map between index sets (almost injective by finiteness)."""

    __slots__ = ()

    def __init__(self, data: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> None:
        super().__init__(data)
        for k, v in self._graph:
            for e in (k, v):
                if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                    raise IndexDataError(f"not an index: {e!r}")

    @property
    def source(self) -> IndexSet:
        return IndexSet(self._d)

    def image(self, J: Iterable[int] | None = None) -> IndexSet:
        if J is None:
            return IndexSet(self._d.values())
        return IndexSet(self._d[j] for j in J)

    def preimage(self, K: Iterable[int]) -> IndexSet:
        K = set(K)
        return IndexSet(j for j, k in self._graph if k in K)

    def restrict(self, J: Iterable[int]) -> "IndexMap":
        J = set(J)
        return IndexMap((j, k) for j, k in self._graph if j in J)

    def then(self, other: Mapping[int, int]) -> "IndexMap":
        """``other ∘ self``; raises if ``other`` is undefined on the image."""
        try:
            return IndexMap((j, other[k]) for j, k in self._graph)
        except KeyError as exc:
            raise IndexDataError(f"composition undefined at index {exc.args[0]}") from None

    def is_injective(self) -> bool:
        return len(set(self._d.values())) == len(self._d)

    def is_bijection_onto(self, K: Iterable[int]) -> bool:
        return self.is_injective() and set(self._d.values()) == set(K)

    def inverse(self) -> "IndexMap":
        if not self.is_injective():
            raise IndexDataError("inverse of a non-injective map")
        return IndexMap((k, j) for j, k in self._graph)

    def __add__(self, other: "IndexMap") -> "IndexMap":
        common = set(self._d) & set(other._d)
        if common:
            raise IndexDataError(f"union of maps with overlapping sources (common: {sorted(common)})")
        return IndexMap(list(self._graph) + list(other._graph))


def compose(v: Mapping[int, int], u: IndexMap) -> IndexMap:
    """``v ∘ u``."""
    return u.then(v)


def identity_map(J: Iterable[int]) -> IndexMap:
    return IndexMap((j, j) for j in J)


def preimage(u: IndexMap, k: int) -> IndexSet:
    return u.preimage([k])


def csucc(j: int, i: int) -> int:
    """Position of the j-th survivor after deleting entry i (1-based)."""
    return j if j < i else j + 1


def seq_delete(s: tuple | list, i: int) -> tuple:
    """Remove the i-th entry (1-based) of a sequence."""
    if not 1 <= i <= len(s):
        raise IndexDataError(f"position {i} out of range 1..{len(s)}")
    return tuple(s[: i - 1]) + tuple(s[i:])


class Allocator:
    """Source of fresh indices, threaded explicitly through constructions.

    Without a seed, indices are the consecutive naturals from ``start``.
    With a seed, gaps between consecutive indices are drawn from a seeded
    generator, so two seeds give different but reproducible index choices.
    """

    def __init__(self, start: int = 1000, seed: int | None = None) -> None:
        self.next = start
        self._rng = random.Random(seed) if seed is not None else None

    def take(self, n: int) -> list[int]:
        out = []
        for _ in range(n):
            if self._rng is not None:
                self.next += self._rng.randint(0, 3)
            out.append(self.next)
            self.next += 1
        return out

    def reserve(self, used: Iterable[int]) -> "Allocator":
        """Move the high-water mark above every index in ``used``."""
        for j in used:
            self.next = max(self.next, j + 1)
        return self

    def __repr__(self) -> str:
        return f"Allocator(next={self.next})"
