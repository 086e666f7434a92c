"""Finite groups given by multiplication tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Besides validation and (de)serialization this module enumerates subgroups
and exact factorizations ``G = G1 G2`` with ``G1 & G2 = {e}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np


class GroupValidationError(ValueError):
    """Raised when a table does not define a group."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    name: str = ""
    labels: tuple[str, ...] | None = None
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        inverse = np.argmin(table, axis=1)  # g * inv(g) == 0 is the only 0 in row g
        inverse.setflags(write=False)
        object.__setattr__(self, "inverse", inverse)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def to_document(self) -> dict:
        doc = {"name": self.name, "order": self.order, "table": self.table.tolist()}
        if self.labels:
            doc["labels"] = list(self.labels)
        return doc


def validate_table(table: Sequence[Sequence[int]]) -> np.ndarray:
    """Check the group axioms, raising with a witness on the first failure."""
    n = len(table)
    if n == 0:
        raise GroupValidationError("empty table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupValidationError(f"table is not square: row {i} has length {len(row)}, expected {n}")
    t = np.array(table, dtype=np.int64)
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = bad[0]
        raise GroupValidationError(f"entry ({i},{j}) = {t[i, j]} out of range 0..{n - 1}")
    for h in range(n):
        if t[0, h] != h:
            raise GroupValidationError(f"identity law fails: 0*{h} = {t[0, h]}")
        if t[h, 0] != h:
            raise GroupValidationError(f"identity law fails: {h}*0 = {t[h, 0]}")
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), full):
            raise GroupValidationError(f"row {i} not a permutation")
    for j in range(n):
        if not np.array_equal(np.sort(t[:, j]), full):
            raise GroupValidationError(f"column {j} not a permutation")
    # (ab)c == a(bc) for all triples, vectorized over b, c
    for a in range(n):
        lhs = t[t[a]]          # lhs[b, c] = (a*b)*c
        rhs = t[a][t]          # rhs[b, c] = a*(b*c)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            b, c = diff[0]
            raise GroupValidationError(f"not associative at triple ({a},{b},{c})")
    return t


def parse_group(document) -> FiniteGroup:
    """Build a validated group from a group document (dict or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GroupValidationError(f"malformed group document: {exc}") from exc
    if not isinstance(document, dict) or "table" not in document:
        raise GroupValidationError("group document must be an object with a 'table' field")
    table = validate_table(document["table"])
    if "order" in document and document["order"] != len(table):
        raise GroupValidationError(f"declared order {document['order']} != table size {len(table)}")
    labels = document.get("labels")
    if labels is not None:
        if len(labels) != len(table):
            raise GroupValidationError("labels length does not match order")
        labels = tuple(str(x) for x in labels)
    return FiniteGroup(table, name=str(document.get("name", "")), labels=labels)


def serialize_group(G: FiniteGroup) -> str:
    return json.dumps(G.to_document(), sort_keys=True)


# ---------------------------------------------------------------- subgroups


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    """A subgroup stored as a sorted tuple of parent indices.

    Local index ``i`` refers to ``elements[i]``; local index 0 is the
    identity. ``table`` is the subgroup's own multiplication in local
    indices and witnesses closure.
    """

    parent: FiniteGroup
    elements: tuple[int, ...]
    table: np.ndarray = field(init=False, repr=False)
    local: dict = field(init=False, repr=False)

    def __post_init__(self):
        elems = tuple(sorted(int(x) for x in self.elements))
        object.__setattr__(self, "elements", elems)
        if not elems or elems[0] != 0:
            raise GroupValidationError("subgroup must contain the identity")
        local = {x: i for i, x in enumerate(elems)}
        object.__setattr__(self, "local", local)
        P = self.parent.table
        try:
            t = np.array([[local[int(P[a, b])] for b in elems] for a in elems], dtype=np.int64)
        except KeyError as exc:
            raise GroupValidationError(f"subset {list(elems)} not closed under multiplication") from exc
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.local

    def __eq__(self, other):
        if not isinstance(other, SubgroupEmbedding):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup({list(self.elements)})"

    def as_group(self, name: str = "") -> FiniteGroup:
        labels = None
        if self.parent.labels:
            labels = tuple(self.parent.labels[x] for x in self.elements)
        return FiniteGroup(self.table, name=name, labels=labels)

    def is_normal(self) -> bool:
        G = self.parent
        members = set(self.elements)
        return all(G.mul(G.mul(g, h), G.inv(g)) in members for g in range(G.order) for h in self.elements)


def closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    """Subgroup generated by ``gens`` (closure under products suffices in a finite group)."""
    elems = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def subgroups(G: FiniteGroup) -> list[SubgroupEmbedding]:
    """All subgroups, sorted by order and then by element list."""
    found = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        new = []
        for H in frontier:
            for x in range(G.order):
                if x in H:
                    continue
                K = closure(G, sorted(H | {x}))
                if K not in found:
                    found.add(K)
                    new.append(K)
        frontier = new
    ordered = sorted((tuple(sorted(H)) for H in found), key=lambda e: (len(e), e))
    return [SubgroupEmbedding(G, e) for e in ordered]


def exact_factorizations(G: FiniteGroup) -> list[tuple[SubgroupEmbedding, SubgroupEmbedding]]:
    """Ordered pairs ``(G1, G2)`` with trivial intersection and ``|G1||G2| = |G|``."""
    subs = subgroups(G)
    out = []
    for H, K in product(subs, repeat=2):
        if H.order * K.order != G.order:
            continue
        if set(H.elements) & set(K.elements) == {0}:
            out.append((H, K))
    return out


def product_map_is_bijective(H: SubgroupEmbedding, K: SubgroupEmbedding) -> bool:
    G = H.parent
    images = {G.mul(h, k) for h in H.elements for k in K.elements}
    return len(images) == G.order == H.order * K.order


# ------------------------------------------------------------- constructors


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str = "") -> FiniteGroup:
    """Elements ``(a, b)`` indexed ``a * |B| + b`` so the identity stays at 0."""
    m = B.order
    n = A.order * m
    t = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        a, b = divmod(x, m)
        for y in range(n):
            c, d = divmod(y, m)
            t[x, y] = A.mul(a, c) * m + B.mul(b, d)
    labels = None
    if A.labels or B.labels:
        labels = tuple(f"({A.label(x // m)},{B.label(x % m)})" for x in range(n))
    return FiniteGroup(t, name=name or f"{A.name}x{B.name}", labels=labels)


def _perm_mul(p: tuple, q: tuple) -> tuple:
    # (p*q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def from_permutations(gens: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group generated by permutations of ``0..d-1`` in BFS order from the identity."""
    d = len(gens[0])
    ident = tuple(range(d))
    gens = [tuple(g) for g in gens]
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = _perm_mul(elems[i], g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
        i += 1
    t = np.array([[index[_perm_mul(p, q)] for q in elems] for p in elems], dtype=np.int64)
    labels = tuple(_cycle_label(p) for p in elems)
    return FiniteGroup(t, name=name, labels=labels)


def _cycle_label(p: tuple) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j + 1)
            j = p[j]
        cycles.append("(" + "".join(map(str, c)) + ")")
    return "".join(cycles) or "e"


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup([[0]], name="S1")
    cyc = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return from_permutations([cyc, swap], name=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], name=f"D{n}")


def quaternion() -> FiniteGroup:
    # left regular action of Q8 = {±1, ±i, ±j, ±k} on itself
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", x): (1, x) for x in units
    }
    for x in units:
        mult[(x, "1")] = (1, x)
    for x in units[1:]:
        mult[(x, x)] = (-1, "1")
    mult.update({("i", "j"): (1, "k"), ("j", "i"): (-1, "k"), ("j", "k"): (1, "i"),
                 ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}

    def left(a):
        return tuple(index[(a[0] * b[0] * mult[(a[1], b[1])][0], mult[(a[1], b[1])][1])] for b in elems)

    gens = [left((1, "i")), left((1, "j"))]
    return from_permutations(gens, name="Q8")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="1")


def standard_corpus() -> dict[str, FiniteGroup]:
    """The fixture groups used by the test and acceptance suites."""
    Z2 = cyclic(2)
    V = direct_product(Z2, Z2, name="Z2xZ2")
    return {
        "trivial": trivial_group(),
        "Z2": Z2,
        "Z3": cyclic(3),
        "Z4": cyclic(4),
        "Z2xZ2": V,
        "S3": symmetric(3),
        "D4": dihedral(4),
        "Q8": quaternion(),
        "Z2^3": direct_product(V, Z2, name="Z2^3"),
        "S4": symmetric(4),
    }


def find_element(G: FiniteGroup, label: str) -> int:
    if not G.labels:
        raise KeyError("group has no labels")
    return G.labels.index(label)
