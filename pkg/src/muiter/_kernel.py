"""Order-kernel selection and the shared hash-consed tree arena.

The compiled extension is used when it was built; otherwise the pure-Python
twin takes over with identical behaviour.  KERNEL_IMPL records which one is
active so diagnostics and benchmarks can say so.
"""

from __future__ import annotations

from .signature import WTree

try:
    from ._plumpcore import PlumpKernel

    KERNEL_IMPL = "compiled"
except ImportError:  # extension not built
    from ._plump_py import PlumpKernel

    KERNEL_IMPL = "pure"


class TreeArena:
    """Interns trees into a kernel arena so comparisons share one memo."""

    __slots__ = ("_kernel", "_ids")

    def __init__(self, kernel_factory=PlumpKernel):
        self._kernel = kernel_factory()
        self._ids: dict = {}

    def intern(self, tree: WTree) -> int:
        got = self._ids.get(tree)
        if got is None:
            kids = [self.intern(c) for c in tree.children]
            got = self._kernel.add_node(kids)
            self._ids[tree] = got
        return got

    def lt(self, s: WTree, t: WTree) -> bool:
        return self._kernel.lt(self.intern(s), self.intern(t))

    def leq(self, s: WTree, t: WTree) -> bool:
        return self._kernel.leq(self.intern(s), self.intern(t))

    def __len__(self):
        return len(self._kernel)
