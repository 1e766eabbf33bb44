"""Relational words: totally ordered positions with 3-valued label relations.

A relational word records, for every unordered pair of positions, whether the
labels at those positions are equal (digit 1), unequal (digit 0) or
unconstrained (digit 2).  Equality must be an equivalence relation, and it
must be a congruence with respect to the defined relations: two positions
with equal labels relate identically to every third position.

Internally a word is stored as a partition of positions into equality
classes (numbered by first occurrence) plus an irreflexive symmetric
"unequal" relation on class ids.  That representation makes the structural
invariants hold by construction; the matrix form is derived on demand.
Words are immutable and safe to share.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .cliques import max_weight_clique
from .errors import (
    Asymmetric,
    BadDigit,
    BadEmbedding,
    CapExceeded,
    CongruenceViolation,
    DiagonalNotEq,
    EmptyAlphabet,
    LengthMismatch,
    NonSquare,
    NotFullyDefined,
    NotTransitive,
    OutOfRange,
)

__all__ = [
    "Relation",
    "RelationalWord",
    "EqClassView",
    "EMPTY",
    "from_matrix",
    "from_string",
    "contradicts",
    "is_scattered_subword",
    "exists_scattered_subword",
    "scattered_embeddings",
    "is_subword",
    "enumerate_language",
    "count_language",
    "fully_defined_words",
]


class Relation(IntEnum):
    """One cell of the relation matrix; values are the serialization digits."""

    NEQ = 0
    EQ = 1
    UNDEF = 2


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class RelationalWord:
    """An immutable relational word.

    ``classes`` assigns each position (left to right) its equality-class id,
    ids numbered by first occurrence starting at 0.  ``neq`` holds the class
    pairs whose members carry unequal labels.  Any pair of positions in
    distinct classes not related by ``neq`` is undefined.
    """

    __slots__ = ("_classes", "_neq", "_hash")

    def __init__(self, classes: Iterable[int], neq: Iterable[tuple[int, int]] = ()):
        remap: dict[int, int] = {}
        norm = []
        for c in classes:
            if c not in remap:
                remap[c] = len(remap)
            norm.append(remap[c])
        pairs = set()
        for a, b in neq:
            # pairs over classes absent from `classes` carry no information
            if a in remap and b in remap:
                x, y = remap[a], remap[b]
                if x == y:
                    raise ValueError("a class cannot be unequal to itself")
                pairs.add((x, y) if x < y else (y, x))
        self._classes: tuple[int, ...] = tuple(norm)
        self._neq: frozenset[tuple[int, int]] = frozenset(pairs)
        self._hash = hash((self._classes, self._neq))

    # -- basic shape ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._classes)

    @property
    def class_count(self) -> int:
        return (max(self._classes) + 1) if self._classes else 0

    @property
    def neq_class_pairs(self) -> frozenset[tuple[int, int]]:
        return self._neq

    @property
    def position_classes(self) -> tuple[int, ...]:
        return self._classes

    def class_sizes(self) -> list[int]:
        sizes = [0] * self.class_count
        for c in self._classes:
            sizes[c] += 1
        return sizes

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationalWord):
            return NotImplemented
        return self._classes == other._classes and self._neq == other._neq

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.is_fully_defined and self.class_count <= len(_LETTERS):
            return f"RelationalWord({self.to_letters()!r})"
        return f"RelationalWord(n={len(self)}, classes={self._classes}, neq={sorted(self._neq)})"

    # -- cells ----------------------------------------------------------

    def cell(self, i: int, j: int) -> Relation:
        """Relation between positions ``i`` and ``j`` (1-based)."""
        n = len(self)
        if not (1 <= i <= n and 1 <= j <= n):
            raise OutOfRange(f"position pair ({i},{j}) outside 1..{n}")
        a, b = self._classes[i - 1], self._classes[j - 1]
        if a == b:
            return Relation.EQ
        if ((a, b) if a < b else (b, a)) in self._neq:
            return Relation.NEQ
        return Relation.UNDEF

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """The full symmetric digit matrix."""
        n = len(self)
        cls = self._classes
        neq = self._neq
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                a, b = cls[i], cls[j]
                if a == b:
                    row.append(1)
                elif ((a, b) if a < b else (b, a)) in neq:
                    row.append(0)
                else:
                    row.append(2)
            rows.append(tuple(row))
        return tuple(rows)

    @property
    def is_fully_defined(self) -> bool:
        m = self.class_count
        return len(self._neq) == m * (m - 1) // 2

    def to_letters(self) -> str:
        """Letter rendering of a fully defined word (equal letters = equal labels)."""
        if not self.is_fully_defined:
            raise NotFullyDefined("word is not fully defined")
        if self.class_count > len(_LETTERS):
            raise CapExceeded("more classes than available letters")
        return "".join(_LETTERS[c] for c in self._classes)

    # -- characteristics -------------------------------------------------

    def max_e(self) -> int:
        """Size of the largest equality class (0 for the empty word)."""
        sizes = self.class_sizes()
        return max(sizes) if sizes else 0

    def max_fd(self) -> int:
        """Length of the longest fully defined scattered subword.

        A position set is pairwise defined exactly when the classes it
        touches are pairwise unequal, so this is a maximum-weight clique in
        the class graph with class sizes as weights.
        """
        sizes = self.class_sizes()
        if not sizes:
            return 0
        adj = [set() for _ in sizes]
        for a, b in self._neq:
            adj[a].add(b)
            adj[b].add(a)
        return max_weight_clique(sizes, adj)

    def max_n(self) -> int:
        """Length of the longest scattered subword with all pairs unequal."""
        m = self.class_count
        if m == 0:
            return 0
        adj = [set() for _ in range(m)]
        for a, b in self._neq:
            adj[a].add(b)
            adj[b].add(a)
        return max_weight_clique([1] * m, adj)

    # -- canonical key ----------------------------------------------------

    def canonical_key(self) -> bytes:
        """Byte string injective on word equality (first-occurrence normal form)."""
        classes = ",".join(map(str, self._classes))
        neq = ";".join(f"{a}-{b}" for a, b in sorted(self._neq))
        return f"{len(self)}|{classes}|{neq}".encode("ascii")

    def classes_view(self) -> "EqClassView":
        return EqClassView(
            class_of=tuple(c + 1 for c in self._classes),
            neq=frozenset((a + 1, b + 1) for a, b in self._neq),
        )


EMPTY = RelationalWord(())


@dataclass(frozen=True)
class EqClassView:
    """Equality classes (ids 1-based, numbered by first occurrence) plus the
    irreflexive unequal relation on class ids."""

    class_of: tuple[int, ...]
    neq: frozenset[tuple[int, int]]

    def to_word(self) -> RelationalWord:
        ids = set(self.class_of)
        for a, b in self.neq:
            if a == b:
                raise ValueError("a class cannot be unequal to itself")
            if a not in ids or b not in ids:
                raise ValueError(f"unequal pair ({a},{b}) names an absent class")
        return RelationalWord(self.class_of, self.neq)


# -- construction ---------------------------------------------------------


def from_matrix(rows: Sequence[Sequence[int]]) -> RelationalWord:
    """Build a word from a square digit matrix, checking every invariant.

    Violations are reported in a fixed order (shape, digits, diagonal,
    symmetry, transitivity of equality, congruence), each naming the first
    offending cell pair in 1-based coordinates.
    """
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NonSquare(f"row {i + 1} has {len(row)} cells, expected {n}")
    for i in range(n):
        for j in range(n):
            if rows[i][j] not in (0, 1, 2):
                raise BadDigit(f"cell value {rows[i][j]!r}", (i + 1, j + 1))
    for i in range(n):
        if rows[i][i] != 1:
            raise DiagonalNotEq("diagonal cell is not 1", (i + 1, i + 1))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise Asymmetric("cell differs from its mirror", (i + 1, j + 1))

    # union equality edges, then demand every same-component pair is marked equal
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == 1:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j) and rows[i][j] != 1:
                raise NotTransitive("positions are equal by transitivity", (i + 1, j + 1))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == 1 and any(rows[i][k] != rows[j][k] for k in range(n)):
                raise CongruenceViolation(
                    "equal positions have different relation rows", (i + 1, j + 1)
                )

    classes = [find(i) for i in range(n)]
    neq = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == 0:
                neq.add((classes[i], classes[j]))
    return RelationalWord(classes, neq)


def from_string(s: str) -> RelationalWord:
    """Fully defined word from a letter string: equal letters mean equal labels."""
    seen: dict[str, int] = {}
    classes = []
    for ch in s:
        if ch not in seen:
            seen[ch] = len(seen)
        classes.append(seen[ch])
    m = len(seen)
    neq = [(a, b) for a in range(m) for b in range(a + 1, m)]
    return RelationalWord(classes, neq)


# -- comparison -------------------------------------------------------------


def contradicts(w: RelationalWord, v: RelationalWord) -> bool:
    """True iff some pair is equal in one word and unequal in the other."""
    if len(w) != len(v):
        raise LengthMismatch(f"lengths differ: {len(w)} vs {len(v)}")
    n = len(w)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a, b = w.cell(i, j), v.cell(i, j)
            if {a, b} == {Relation.EQ, Relation.NEQ}:
                return True
    return False


# -- subwords ---------------------------------------------------------------


def _check_embedding(sub: RelationalWord, sup: RelationalWord, embedding: Sequence[int]) -> None:
    if len(embedding) != len(sub):
        raise BadEmbedding(f"embedding has {len(embedding)} positions, word has {len(sub)}")
    prev = 0
    for p in embedding:
        if not (1 <= p <= len(sup)):
            raise BadEmbedding(f"position {p} outside 1..{len(sup)}")
        if p <= prev:
            raise BadEmbedding("embedding is not strictly increasing")
        prev = p


def is_scattered_subword(
    sub: RelationalWord, sup: RelationalWord, embedding: Sequence[int]
) -> bool:
    """True iff the embedded positions of ``sup`` induce exactly ``sub``.

    Cells must agree in all three values, so undefined pairs of ``sub`` must
    map to undefined pairs of ``sup``.
    """
    _check_embedding(sub, sup, embedding)
    n = len(sub)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if sub.cell(i, j) != sup.cell(embedding[i - 1], embedding[j - 1]):
                return False
    return True


def scattered_embeddings(
    sub: RelationalWord, sup: RelationalWord
) -> Iterator[tuple[int, ...]]:
    """All strictly increasing embeddings witnessing ``sub`` inside ``sup``."""
    n, m = len(sub), len(sup)

    def extend(chosen: list[int], nxt: int) -> Iterator[tuple[int, ...]]:
        if len(chosen) == n:
            yield tuple(chosen)
            return
        i = len(chosen) + 1
        for p in range(nxt, m - (n - len(chosen)) + 2):
            ok = True
            for q in range(1, i):
                if sub.cell(q, i) != sup.cell(chosen[q - 1], p):
                    ok = False
                    break
            if ok:
                chosen.append(p)
                yield from extend(chosen, p + 1)
                chosen.pop()

    yield from extend([], 1)


def exists_scattered_subword(sub: RelationalWord, sup: RelationalWord) -> bool:
    return next(scattered_embeddings(sub, sup), None) is not None


def is_subword(sub: RelationalWord, sup: RelationalWord, start: int) -> bool:
    """Contiguous variant: embed at positions ``start .. start+len(sub)-1``."""
    if not (1 <= start <= len(sup) - len(sub) + 1):
        raise OutOfRange(f"start {start} outside 1..{len(sup) - len(sub) + 1}")
    return is_scattered_subword(sub, sup, tuple(range(start, start + len(sub))))


# -- language semantics -------------------------------------------------------


def enumerate_language(
    word: RelationalWord, alphabet: Iterable[str], *, cap: int = 2_000_000
) -> set[str]:
    """All strings over ``alphabet`` consistent with the word's constraints.

    Letters are assigned per equality class; classes related by the unequal
    relation must receive distinct letters, unrelated classes are free.
    """
    letters = sorted(set(alphabet))
    if not letters:
        raise EmptyAlphabet("alphabet must be nonempty")
    if any(len(ch) != 1 for ch in letters):
        raise ValueError("alphabet entries must be single characters")
    m = word.class_count
    if len(letters) ** m > cap:
        raise CapExceeded(f"{len(letters)}^{m} assignments exceed cap {cap}")
    neq = word.neq_class_pairs
    out = set()
    for combo in itertools.product(letters, repeat=m):
        if all(combo[a] != combo[b] for a, b in neq):
            out.add("".join(combo[c] for c in word.position_classes))
    return out


@lru_cache(maxsize=None)
def _coloring_count(m: int, edges: frozenset[tuple[int, int]], k: int) -> int:
    # proper colorings of the class graph with k colors, by deletion-contraction
    if not edges:
        return k**m
    a, b = min(edges)
    deleted = edges - {(a, b)}
    relabel = {}
    for v in range(m):
        if v == b:
            relabel[v] = a if a < b else a - 1
        else:
            relabel[v] = v if v < b else v - 1
    contracted = set()
    for x, y in deleted:
        rx, ry = relabel[x], relabel[y]
        if rx != ry:
            contracted.add((rx, ry) if rx < ry else (ry, rx))
    return _coloring_count(m, deleted, k) - _coloring_count(m - 1, frozenset(contracted), k)


def count_language(
    word: RelationalWord, alphabet_size: int, *, method: str = "exact", cap: int = 24
) -> int:
    """Number of strings in the word's language over an alphabet of given size.

    ``method="exact"`` counts constraint-satisfying letter assignments (a
    proper-coloring count of the class graph, cross-checked against plain
    enumeration in the test suite).  ``method="binomial"`` instead returns
    C(alphabet_size, classes); it undercounts whenever class order matters
    and is provided for comparison only.
    """
    if alphabet_size < 0:
        raise ValueError("alphabet_size must be >= 0")
    m = word.class_count
    if method == "binomial":
        return math.comb(alphabet_size, m)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if m > cap:
        raise CapExceeded(f"{m} classes exceed counting cap {cap}")
    return _coloring_count(m, frozenset(word.neq_class_pairs), alphabet_size)


# -- exhaustive generation -----------------------------------------------------


def fully_defined_words(n: int) -> list[RelationalWord]:
    """Every fully defined word of length ``n`` (one per set partition of
    the positions), in restricted-growth order."""
    if n == 0:
        return [EMPTY]
    out = []

    def grow(prefix: list[int]) -> None:
        if len(prefix) == n:
            out.append(from_string("".join(_LETTERS[c] for c in prefix)))
            return
        top = max(prefix) if prefix else -1
        for c in range(top + 2):
            prefix.append(c)
            grow(prefix)
            prefix.pop()

    grow([])
    return out
