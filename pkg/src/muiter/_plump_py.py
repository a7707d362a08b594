"""Pure-Python kernel for the recursive tree order.

Nodes live in an append-only arena and are referred to by integer id; only
the children structure matters for comparison, so operation symbols are not
stored here.  Both relations are memoized: the strict one holds when the
left tree fits below some child of the right, the lax one when every child
of the left is strictly below the right.
"""


class PlumpKernel:
    __slots__ = ("_children", "_lt", "_leq")

    def __init__(self):
        self._children = []
        self._lt = {}
        self._leq = {}

    def add_node(self, child_ids) -> int:
        kids = tuple(child_ids)
        n = len(self._children)
        for c in kids:
            if not 0 <= c < n:
                raise ValueError(f"child id {c} not yet in arena of size {n}")
        self._children.append(kids)
        return n

    def __len__(self):
        return len(self._children)

    def lt(self, a: int, b: int) -> bool:
        key = (a, b)
        hit = self._lt.get(key)
        if hit is None:
            hit = False
            for c in self._children[b]:
                if self.leq(a, c):
                    hit = True
                    break
            self._lt[key] = hit
        return hit

    def leq(self, a: int, b: int) -> bool:
        key = (a, b)
        hit = self._leq.get(key)
        if hit is None:
            hit = True
            for c in self._children[a]:
                if not self.lt(c, b):
                    hit = False
                    break
            self._leq[key] = hit
        return hit
