"""Operation signatures and the well-founded trees they generate.

A signature is a finite set of operation symbols, each with a finite arity
set.  Applying a signature to a set X yields the tagged sum over operations
of the tables arity(op) -> X; iterating that from the empty set enumerates
trees of bounded height.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import ShapeMismatch
from .finset import Exponential, FiniteFn, FiniteSet, TaggedSum, exponential


class Signature:
    """Operation symbols with per-symbol finite arities."""

    __slots__ = ("ops", "arities")

    def __init__(self, ops: FiniteSet, arities: Sequence[FiniteSet]):
        arities = tuple(arities)
        if len(arities) != ops.size:
            raise ShapeMismatch(
                f"{len(arities)} arities for {ops.size} operations"
            )
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "arities", arities)

    def __setattr__(self, name, value):
        raise AttributeError("Signature is immutable")

    @staticmethod
    def of(*arity_sizes: int, labels: Optional[Sequence[str]] = None) -> "Signature":
        """Shorthand: Signature.of(0, 2) is one nullary and one binary op."""
        ops = FiniteSet(len(arity_sizes), labels=labels)
        return Signature(ops, [FiniteSet(n) for n in arity_sizes])

    def arity(self, op: int) -> FiniteSet:
        return self.arities[op]

    def op_label(self, op: int) -> str:
        return self.ops.label(op)

    def __eq__(self, other):
        return (
            isinstance(other, Signature)
            and self.ops == other.ops
            and self.arities == other.arities
        )

    def __hash__(self):
        return hash(("Signature", self.ops.size, tuple(a.size for a in self.arities)))

    def __repr__(self):
        body = ", ".join(
            f"{self.op_label(op)}:{self.arities[op].size}" for op in self.ops
        )
        return f"Signature({body})"


def empty_signature() -> Signature:
    return Signature(FiniteSet(0), [])


def signature_sum(parts: Sequence[Signature]) -> Signature:
    """Disjoint union of signatures; operations become tagged pairs."""
    labels = []
    arities = []
    for tag, sig in enumerate(parts):
        for op in sig.ops:
            labels.append(f"{tag}.{sig.op_label(op)}")
            arities.append(sig.arities[op])
    return Signature(FiniteSet(len(arities), labels=labels), arities)


class WTree:
    """A finitely branching well-founded tree over some signature.

    Nodes carry the operation index; the children tuple must match the
    operation's arity.  Structural equality, with the hash cached since
    trees are shared heavily.
    """

    __slots__ = ("op", "children", "_hash")

    def __init__(self, op: int, children: Sequence["WTree"] = ()):
        children = tuple(children)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash((op, children)))

    def __setattr__(self, name, value):
        raise AttributeError("WTree is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, WTree)
            and self._hash == other._hash
            and self.op == other.op
            and self.children == other.children
        )

    def __hash__(self):
        return self._hash

    def height(self) -> int:
        """0 for leaves, else one more than the tallest child."""
        if not self.children:
            return 0
        return 1 + max(c.height() for c in self.children)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def sort_key(self):
        return (self.op, tuple(c.sort_key() for c in self.children))

    def render(self, sig: Optional[Signature] = None) -> str:
        name = sig.op_label(self.op) if sig is not None else str(self.op)
        if not self.children:
            return name
        return f"{name}({', '.join(c.render(sig) for c in self.children)})"

    def __repr__(self):
        return f"WTree({self.render()})"


def validate_tree(sig: Signature, tree: WTree) -> None:
    """Check that every node's children count matches its op arity."""
    if tree.op not in sig.ops:
        raise ShapeMismatch(f"operation {tree.op} outside signature {sig!r}")
    want = sig.arities[tree.op].size
    if len(tree.children) != want:
        raise ShapeMismatch(
            f"op {sig.op_label(tree.op)} expects {want} children, "
            f"got {len(tree.children)}"
        )
    for c in tree.children:
        validate_tree(sig, c)


class ContainerLayout:
    """Indexing for sum-over-ops-of-exponentials applications of a signature.

    Element i of the applied set decodes to (op, argument tuple); the block
    for each op has size |X| ** arity(op).
    """

    __slots__ = ("sig", "base", "_exps", "_sum", "set")

    def __init__(self, sig: Signature, base: FiniteSet):
        exps = tuple(exponential(base, a) for a in sig.arities)
        layout = TaggedSum([e.set for e in exps])
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_exps", exps)
        object.__setattr__(self, "_sum", layout)
        object.__setattr__(self, "set", layout.set)

    def __setattr__(self, name, value):
        raise AttributeError("ContainerLayout is immutable")

    def encode(self, op: int, args: Sequence[int]) -> int:
        return self._sum.encode(op, self._exps[op].encode(args))

    def decode(self, idx: int) -> tuple:
        op, inner = self._sum.decode(idx)
        return op, self._exps[op].decode(inner)


def container_layout(sig: Signature, base: FiniteSet) -> ContainerLayout:
    return ContainerLayout(sig, base)


def container_apply(sig: Signature, base: FiniteSet) -> FiniteSet:
    """The set of one-layer terms: an op plus an arity-indexed argument table."""
    return ContainerLayout(sig, base).set


def container_map(sig: Signature, f: FiniteFn) -> FiniteFn:
    """Apply f to every argument position, preserving the op tag."""
    src = ContainerLayout(sig, f.dom)
    dst = ContainerLayout(sig, f.cod)
    table = []
    for idx in range(src.set.size):
        op, args = src.decode(idx)
        table.append(dst.encode(op, tuple(f.table[a] for a in args)))
    return FiniteFn(src.set, dst.set, table)


def wtype_enumerate(sig: Signature, depth: int) -> list:
    """All trees of height < depth, in canonical order.

    Canonical order sorts by op index, then children positions left to
    right in the order of the previous layer.  The count at each depth
    equals iterating container_apply from the empty set.
    """
    if depth < 0:
        raise ShapeMismatch(f"negative depth {depth}")
    trees: list = []
    for _ in range(depth):
        prev = trees
        layer = []
        for op in sig.ops:
            layer.extend(
                WTree(op, combo)
                for combo in _tuples(prev, sig.arities[op].size)
            )
        trees = layer
    return trees


def _tuples(pool: Sequence, n: int) -> Iterable[tuple]:
    """Cartesian power in lexicographic order over pool positions."""
    if n == 0:
        yield ()
        return
    for head in pool:
        for rest in _tuples(pool, n - 1):
            yield (head,) + rest
