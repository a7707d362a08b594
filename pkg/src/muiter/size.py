"""Size indices: well-founded directed orders that drive iteration.

Two backends share one interface.  The numeric backend uses natural numbers
with max-plus-one as join.  The tree backend orders well-founded trees over
a signature extended with a fresh nullary bottom and a fresh binary join;
its comparison is the mutually recursive rule pair

    s <= t  iff  every child of s is < t
    s <  t  iff  s is <= some child of t

decided by the shared kernel.  predecessor_basis is the finiteness
interface: a finite family of indices such that anything strictly below i
is laxly below some family member, which is what lets colimits over the
unbounded down-set of i be computed over finitely many stages.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence, Tuple

from ._kernel import TreeArena
from .errors import ShapeMismatch
from .finset import FiniteSet
from .signature import Signature, WTree

# one arena for every tree comparison in the process: ids and memo results
# are shared across backends, which is sound because comparison only ever
# looks at tree structure
_ARENA = TreeArena()


class NatBackend:
    """Natural numbers: lt is <, join is max plus one."""

    name = "nat"

    def lt(self, i: int, j: int) -> bool:
        return i < j

    def leq(self, i: int, j: int) -> bool:
        return i <= j

    def bottom(self) -> int:
        return 0

    def join(self, i: int, j: int) -> int:
        return max(i, j) + 1

    def succ(self, i: int) -> int:
        return self.join(i, i)

    def predecessor_basis(self, i: int) -> tuple:
        if i == 0:
            return ()
        return (i - 1,)

    def key(self, i: int):
        return i

    def render(self, i: int) -> str:
        return str(i)

    def sample_indices(self, rng: random.Random, count: int, max_height: int) -> list:
        return [rng.randint(0, max_height) for _ in range(count)]


def nat_backend() -> NatBackend:
    return NatBackend()


class PlumpBackend:
    """Tree order over a signature extended with bottom and join ops.

    The original operations keep their indices; the two fresh ops sit at
    the end: a nullary one (the bottom index) and a binary one (the join).
    """

    name = "plump"

    __slots__ = ("base", "extended", "bottom_op", "join_op", "_arena")

    def __init__(self, base: Signature, arena: Optional[TreeArena] = None):
        labels = [base.op_label(op) for op in base.ops]
        labels += ["bot", "join"]
        ops = FiniteSet(base.ops.size + 2, labels=labels)
        arities = list(base.arities) + [FiniteSet(0), FiniteSet(2)]
        self.base = base
        self.extended = Signature(ops, arities)
        self.bottom_op = base.ops.size
        self.join_op = base.ops.size + 1
        self._arena = arena if arena is not None else _ARENA

    def lt(self, i: WTree, j: WTree) -> bool:
        return self._arena.lt(i, j)

    def leq(self, i: WTree, j: WTree) -> bool:
        return self._arena.leq(i, j)

    def bottom(self) -> WTree:
        return WTree(self.bottom_op)

    def join(self, i: WTree, j: WTree) -> WTree:
        return WTree(self.join_op, (i, j))

    def succ(self, i: WTree) -> WTree:
        return self.join(i, i)

    def predecessor_basis(self, i: WTree) -> tuple:
        return i.children

    def key(self, i: WTree):
        return i.sort_key()

    def render(self, i: WTree) -> str:
        # join(t, t) is the successor by construction; folding that pattern
        # keeps tower indices readable (and linear instead of doubling)
        if i.op == self.join_op and i.children[0] == i.children[1]:
            return f"succ({self.render(i.children[0])})"
        if i.children:
            inner = ", ".join(self.render(c) for c in i.children)
            return f"{self._op_label(i.op)}({inner})"
        return self._op_label(i.op)

    def _op_label(self, op: int) -> str:
        labels = self.extended.ops.labels
        if labels is not None and op < len(labels):
            return labels[op]
        return f"op{op}"

    def sample_indices(
        self, rng: random.Random, count: int, max_height: int
    ) -> list:
        return [
            self.sample_tree(rng, rng.randint(0, max_height))
            for _ in range(count)
        ]

    def sample_tree(self, rng: random.Random, max_height: int) -> WTree:
        """A uniform-ish random tree of height at most max_height."""
        nullary = [
            op for op in self.extended.ops if self.extended.arities[op].size == 0
        ]
        if max_height == 0:
            return WTree(rng.choice(nullary))
        op = rng.randrange(self.extended.ops.size)
        kids = tuple(
            self.sample_tree(rng, max_height - 1)
            for _ in range(self.extended.arities[op].size)
        )
        return WTree(op, kids)


def kappa_sigma(sig: Signature) -> PlumpBackend:
    """The tree-order backend attached to a signature."""
    return PlumpBackend(sig)


def plump_compare(s: WTree, t: WTree) -> Tuple[bool, bool]:
    """Decide (strict, lax) for two trees in one call."""
    return _ARENA.lt(s, t), _ARENA.leq(s, t)


def height(i) -> int:
    """Rank of an index: numeric value or tree height."""
    if isinstance(i, WTree):
        return i.height()
    return int(i)


def filtered_sample_check(
    backend, samples: Iterable[Tuple[int, Sequence]]
) -> Tuple[bool, list]:
    """Check that each sampled arity-indexed family has a strict upper bound.

    Each sample is (op, family) where op indexes an operation of the
    backend's base signature (ignored by the numeric backend) and family is
    a tuple of indices.  Returns (all_bounded, witnesses) with one witness
    bound per sample.
    """
    witnesses = []
    ok = True
    for op, family in samples:
        family = tuple(family)
        if isinstance(backend, PlumpBackend):
            want = backend.base.arities[op].size if op < backend.base.ops.size else None
            if want is not None and want != len(family):
                raise ShapeMismatch(
                    f"family of size {len(family)} for op of arity {want}"
                )
            witness = WTree(op, family) if family else backend.bottom()
        else:
            witness = max((i + 1 for i in family), default=backend.bottom())
        witnesses.append(witness)
        for member in family:
            if not backend.lt(member, witness):
                ok = False
    return ok, witnesses


def successor_tower(backend, length: int) -> list:
    """bottom, succ(bottom), succ(succ(bottom)), ... of the given length."""
    tower = []
    i = backend.bottom()
    for _ in range(length):
        tower.append(i)
        i = backend.succ(i)
    return tower
