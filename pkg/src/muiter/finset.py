"""Finite sets, functions, and relations with canonical integer elements.

Elements of a set of size n are the indices 0..n-1.  Labels are display
metadata only and never take part in equality.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .errors import ShapeMismatch


class FiniteSet:
    """A finite set presented as {0, ..., size-1} with optional labels."""

    __slots__ = ("size", "labels")

    def __init__(self, size: int, labels: Optional[Sequence[str]] = None):
        if size < 0:
            raise ShapeMismatch(f"negative set size {size}")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != size:
                raise ShapeMismatch(
                    f"{len(labels)} labels for a set of size {size}"
                )
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "labels", labels)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteSet is immutable")

    def __eq__(self, other):
        # labels are display-only
        return isinstance(other, FiniteSet) and self.size == other.size

    def __hash__(self):
        return hash(("FiniteSet", self.size))

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.size

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    def __repr__(self):
        if self.labels is not None:
            return f"FiniteSet({self.size}, labels={list(self.labels)!r})"
        return f"FiniteSet({self.size})"

    def to_json(self):
        out = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


class FiniteFn:
    """A total function between finite sets, stored as a lookup table."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FiniteSet, cod: FiniteSet, table: Sequence[int]):
        table = tuple(table)
        if len(table) != dom.size:
            raise ShapeMismatch(
                f"table of length {len(table)} for domain of size {dom.size}"
            )
        for v in table:
            if not 0 <= v < cod.size:
                raise ShapeMismatch(
                    f"table value {v} outside codomain of size {cod.size}"
                )
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "table", table)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteFn is immutable")

    @staticmethod
    def identity(x: FiniteSet) -> "FiniteFn":
        return FiniteFn(x, x, range(x.size))

    @staticmethod
    def constant(dom: FiniteSet, cod: FiniteSet, value: int) -> "FiniteFn":
        return FiniteFn(dom, cod, [value] * dom.size)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, g: "FiniteFn") -> "FiniteFn":
        """Left-to-right composition: (f.then(g))(x) = g(f(x))."""
        if self.cod.size != g.dom.size:
            raise ShapeMismatch(
                f"cannot compose: codomain {self.cod.size} vs domain {g.dom.size}"
            )
        return FiniteFn(self.dom, g.cod, [g.table[v] for v in self.table])

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.dom.size

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijection(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> "FiniteFn":
        if not self.is_bijection():
            raise ShapeMismatch("only bijections invert")
        inv = [0] * self.cod.size
        for x, v in enumerate(self.table):
            inv[v] = x
        return FiniteFn(self.cod, self.dom, inv)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFn)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.table == other.table
        )

    def __hash__(self):
        return hash(("FiniteFn", self.dom.size, self.cod.size, self.table))

    def __repr__(self):
        return f"FiniteFn({self.dom.size}->{self.cod.size}, {list(self.table)})"

    def to_json(self):
        return {"size": self.cod.size, "table": list(self.table)}


class Relation:
    """A binary relation on one finite set, as a set of index pairs."""

    __slots__ = ("base", "pairs")

    def __init__(self, base: FiniteSet, pairs: Iterable[tuple]):
        pairs = frozenset((int(a), int(b)) for a, b in pairs)
        for a, b in pairs:
            if a not in base or b not in base:
                raise ShapeMismatch(f"pair ({a},{b}) outside base of size {base.size}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, name, value):
        raise AttributeError("Relation is immutable")

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __eq__(self, other):
        return (
            isinstance(other, Relation)
            and self.base == other.base
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash(("Relation", self.base.size, self.pairs))

    def __repr__(self):
        return f"Relation({self.base.size}, {sorted(self.pairs)})"


class _UnionFind:
    """Array-based union-find with path compression."""

    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as root so representatives are minimal
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def quotient(base: FiniteSet, rel: Relation) -> tuple:
    """Quotient base by the equivalence closure of rel.

    Returns (classes, projection) where classes are ordered by their least
    member and the projection sends each element to its class index.
    """
    if rel.base != base:
        raise ShapeMismatch("relation base does not match the set")
    uf = _UnionFind(base.size)
    for a, b in rel.pairs:
        uf.union(a, b)
    roots = {}
    proj = [0] * base.size
    for x in range(base.size):
        r = uf.find(x)
        if r not in roots:
            roots[r] = len(roots)
        proj[x] = roots[r]
    classes = FiniteSet(len(roots))
    return classes, FiniteFn(base, classes, proj)


def kernel(p: FiniteFn) -> Relation:
    """All pairs identified by p, including the diagonal."""
    buckets = {}
    for x, v in enumerate(p.table):
        buckets.setdefault(v, []).append(x)
    pairs = []
    for xs in buckets.values():
        for a in xs:
            for b in xs:
                pairs.append((a, b))
    return Relation(p.dom, pairs)


class Exponential:
    """The set of all tables exponent -> base, with mixed-radix indexing."""

    __slots__ = ("base", "exponent", "set")

    def __init__(self, base: FiniteSet, exponent: FiniteSet):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)
        if base.size == 0 and exponent.size > 0:
            size = 0
        else:
            size = base.size ** exponent.size
        object.__setattr__(self, "set", FiniteSet(size))

    def __setattr__(self, name, value):
        raise AttributeError("Exponential is immutable")

    def encode(self, table: Sequence[int]) -> int:
        if len(table) != self.exponent.size:
            raise ShapeMismatch(
                f"table of length {len(table)}, expected {self.exponent.size}"
            )
        idx = 0
        for k in reversed(range(self.exponent.size)):
            v = table[k]
            if not 0 <= v < self.base.size:
                raise ShapeMismatch(f"value {v} outside base of size {self.base.size}")
            idx = idx * self.base.size + v
        return idx

    def decode(self, idx: int) -> tuple:
        if not 0 <= idx < self.set.size:
            raise ShapeMismatch(f"index {idx} outside exponential of size {self.set.size}")
        out = []
        for _ in range(self.exponent.size):
            out.append(idx % self.base.size)
            idx //= self.base.size
        return tuple(out)


def exponential(base: FiniteSet, exponent: FiniteSet) -> Exponential:
    return Exponential(base, exponent)


class Cartesian:
    """Product of a sequence of finite sets, with mixed-radix indexing."""

    __slots__ = ("factors", "set")

    def __init__(self, factors: Sequence[FiniteSet]):
        factors = tuple(factors)
        object.__setattr__(self, "factors", factors)
        size = 1
        for f in factors:
            size *= f.size
        object.__setattr__(self, "set", FiniteSet(size))

    def __setattr__(self, name, value):
        raise AttributeError("Cartesian is immutable")

    def encode(self, values: Sequence[int]) -> int:
        if len(values) != len(self.factors):
            raise ShapeMismatch(
                f"{len(values)} components for a {len(self.factors)}-fold product"
            )
        idx = 0
        for k in reversed(range(len(self.factors))):
            v, f = values[k], self.factors[k]
            if not 0 <= v < f.size:
                raise ShapeMismatch(f"component {v} outside factor of size {f.size}")
            idx = idx * f.size + v
        return idx

    def decode(self, idx: int) -> tuple:
        if not 0 <= idx < self.set.size:
            raise ShapeMismatch(f"index {idx} outside product of size {self.set.size}")
        out = []
        for f in self.factors:
            out.append(idx % f.size)
            idx //= f.size
        return tuple(out)


def cartesian(factors: Sequence[FiniteSet]) -> Cartesian:
    return Cartesian(factors)


class TaggedSum:
    """Disjoint union of a sequence of finite sets, laid out block by block."""

    __slots__ = ("parts", "offsets", "set")

    def __init__(self, parts: Sequence[FiniteSet]):
        parts = tuple(parts)
        offsets = []
        total = 0
        for p in parts:
            offsets.append(total)
            total += p.size
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "set", FiniteSet(total))

    def __setattr__(self, name, value):
        raise AttributeError("TaggedSum is immutable")

    def encode(self, tag: int, value: int) -> int:
        if not 0 <= tag < len(self.parts):
            raise ShapeMismatch(f"tag {tag} outside {len(self.parts)} parts")
        if not 0 <= value < self.parts[tag].size:
            raise ShapeMismatch(
                f"value {value} outside part of size {self.parts[tag].size}"
            )
        return self.offsets[tag] + value

    def decode(self, idx: int) -> tuple:
        if not 0 <= idx < self.set.size:
            raise ShapeMismatch(f"index {idx} outside sum of size {self.set.size}")
        for tag in reversed(range(len(self.parts))):
            if idx >= self.offsets[tag]:
                return tag, idx - self.offsets[tag]
        raise ShapeMismatch("empty sum has no elements")


def tagged_sum(parts: Sequence[FiniteSet]) -> TaggedSum:
    return TaggedSum(parts)
