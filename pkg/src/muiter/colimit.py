"""Colimits of finite-set diagrams as explicit quotients of disjoint sums.

A Diagram indexes finite sets over an arbitrary hashable index type with a
set of ordered edges; arrows must type-check and compose whenever all three
edges of a triangle are present.  Colimits are computed by quotienting the
tagged sum of the objects by the equivalence closure of single-edge
witnesses: x in D(j) is identified with arrow(j,i)(x).
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, Optional, Sequence, Tuple

from .errors import (
    IllTypedArrow,
    IndexMismatch,
    IntegrityError,
    NonFunctorialDiagram,
    NoSuchIndex,
    ShapeMismatch,
)
from .finset import (
    FiniteFn,
    FiniteSet,
    Relation,
    cartesian,
    quotient,
    tagged_sum,
)


class Diagram:
    """Finite indexed family of sets and connecting functions.

    indices: ordered sequence of distinct hashable index values.
    edges: set of (j, i) pairs meaning j strictly precedes i.
    objects: index -> FiniteSet.
    arrows: (j, i) -> FiniteFn from objects[j] to objects[i].
    """

    __slots__ = ("indices", "edges", "objects", "arrows")

    def __init__(
        self,
        indices: Sequence[Hashable],
        edges: Iterable[Tuple[Hashable, Hashable]],
        objects: Dict[Hashable, FiniteSet],
        arrows: Dict[Tuple[Hashable, Hashable], FiniteFn],
    ):
        self.indices = tuple(indices)
        self.edges = frozenset(edges)
        self.objects = dict(objects)
        self.arrows = dict(arrows)
        self._validate()

    def _validate(self):
        seen = set()
        for i in self.indices:
            if i in seen:
                raise NonFunctorialDiagram(f"duplicate index {i!r}")
            seen.add(i)
            if i not in self.objects:
                raise NonFunctorialDiagram(f"index {i!r} has no object")
        for j, i in self.edges:
            if j not in seen or i not in seen:
                raise NoSuchIndex(f"edge ({j!r}, {i!r}) uses unknown index")
            if j == i:
                raise NonFunctorialDiagram(f"self edge at {i!r}")
            if (j, i) not in self.arrows:
                raise NonFunctorialDiagram(f"edge ({j!r}, {i!r}) has no arrow")
        for (j, i), f in self.arrows.items():
            if (j, i) not in self.edges:
                raise NonFunctorialDiagram(f"arrow ({j!r}, {i!r}) has no edge")
            if f.dom != self.objects[j] or f.cod != self.objects[i]:
                raise IllTypedArrow(
                    f"arrow ({j!r}, {i!r}) is {f.dom.size}->{f.cod.size}, "
                    f"objects are {self.objects[j].size}->{self.objects[i].size}"
                )
        # triangles that are fully present must commute
        for k, j in self.edges:
            for i in self.indices:
                if (j, i) in self.edges and (k, i) in self.edges:
                    left = self.arrows[(k, j)].then(self.arrows[(j, i)])
                    if left != self.arrows[(k, i)]:
                        raise NonFunctorialDiagram(
                            f"triangle {k!r} -> {j!r} -> {i!r} does not commute"
                        )

    def is_directed(self) -> bool:
        """Every pair of indices laxly reaches a common index."""
        reach = {
            (j, i) for j, i in self.edges
        } | {(i, i) for i in self.indices}
        for a in self.indices:
            for b in self.indices:
                if not any(
                    (a, m) in reach and (b, m) in reach for m in self.indices
                ):
                    return False
        return True

    def restrict(self, keep: Sequence[Hashable]) -> "Diagram":
        keep_set = set(keep)
        return Diagram(
            [i for i in self.indices if i in keep_set],
            [e for e in self.edges if e[0] in keep_set and e[1] in keep_set],
            {i: o for i, o in self.objects.items() if i in keep_set},
            {
                e: f
                for e, f in self.arrows.items()
                if e[0] in keep_set and e[1] in keep_set
            },
        )

    def down_set(self, i: Hashable) -> list:
        """Indices with an edge into i."""
        if i not in self.objects:
            raise NoSuchIndex(f"no index {i!r}")
        return [j for j in self.indices if (j, i) in self.edges]


class Cocone:
    """A colimit presentation: apex, one leg per index, and class lookup."""

    __slots__ = ("diagram", "apex", "legs", "_sum")

    def __init__(self, diagram: Diagram, apex: FiniteSet, legs: Dict, layout):
        self.diagram = diagram
        self.apex = apex
        self.legs = legs
        self._sum = layout

    def class_of(self, index: Hashable, element: int) -> int:
        return self.legs[index].table[element]

    def to_json(self):
        return {
            "apex": self.apex.to_json(),
            "legs": [
                {"table": list(self.legs[i].table)} for i in self.diagram.indices
            ],
        }


def subdiagram_colimit(d: Diagram) -> Cocone:
    """Colimit of a directed (or empty) diagram fragment.

    The apex is the tagged sum of the objects modulo the closure of
    x ~ arrow(x) over every edge; classes are numbered by least member of
    the sum layout, so the result is deterministic in the index order.
    """
    if not d.is_directed():
        raise NonFunctorialDiagram("index fragment is not directed")
    return _colimit_of(d)


def _colimit_of(d: Diagram) -> Cocone:
    layout = tagged_sum([d.objects[i] for i in d.indices])
    pos = {idx: tag for tag, idx in enumerate(d.indices)}
    pairs = []
    for (j, i), f in d.arrows.items():
        tj, ti = pos[j], pos[i]
        for x in range(d.objects[j].size):
            pairs.append((layout.encode(tj, x), layout.encode(ti, f.table[x])))
    classes, proj = quotient(layout.set, Relation(layout.set, pairs))
    legs = {}
    for idx in d.indices:
        t = pos[idx]
        legs[idx] = FiniteFn(
            d.objects[idx],
            classes,
            [proj.table[layout.encode(t, x)] for x in range(d.objects[idx].size)],
        )
    return Cocone(d, classes, legs, layout)


def connecting_map(d: Diagram, j: Hashable, i: Hashable) -> FiniteFn:
    """The canonical map between the colimits of the down-sets of j and i.

    Requires the edge (j, i); the down-set of j must then sit inside the
    down-set of i for the map to exist, which the diagram's transitive edge
    set guarantees.
    """
    if j not in d.objects or i not in d.objects:
        raise NoSuchIndex(f"indices {j!r}, {i!r} not both present")
    if (j, i) not in d.edges:
        raise NoSuchIndex(f"no edge ({j!r}, {i!r})")
    below_j = d.down_set(j)
    below_i = d.down_set(i)
    missing = [k for k in below_j if k not in below_i]
    if missing:
        raise NonFunctorialDiagram(
            f"down-set of {j!r} escapes down-set of {i!r} at {missing!r}"
        )
    src = subdiagram_colimit(d.restrict(below_j))
    dst = subdiagram_colimit(d.restrict(below_i))
    table = [None] * src.apex.size
    for k in below_j:
        for x in range(d.objects[k].size):
            cls = src.class_of(k, x)
            target = dst.class_of(k, x)
            if table[cls] is None:
                table[cls] = target
            elif table[cls] != target:
                raise IntegrityError(
                    f"connecting map not well defined at class {cls}"
                )
    return FiniteFn(src.apex, dst.apex, table)


def finite_cat_colimit(
    objects: Sequence[FiniteSet],
    arrows: Sequence[Tuple[int, int, FiniteFn]],
) -> Cocone:
    """Colimit over an arbitrary finite shape given by generating arrows.

    No directedness is required; the quotient identifies x with h(x) for
    every generating arrow h, which also covers all composites.
    """
    indices = list(range(len(objects)))
    for src, dst, h in arrows:
        if not 0 <= src < len(objects) or not 0 <= dst < len(objects):
            raise NoSuchIndex(f"arrow endpoints ({src}, {dst}) out of range")
        if h.dom != objects[src] or h.cod != objects[dst]:
            raise IllTypedArrow(
                f"arrow {src}->{dst} is {h.dom.size}->{h.cod.size}, "
                f"objects are {objects[src].size}->{objects[dst].size}"
            )
    layout = tagged_sum(list(objects))
    pairs = []
    for src, dst, h in arrows:
        for x in range(objects[src].size):
            pairs.append((layout.encode(src, x), layout.encode(dst, h.table[x])))
    classes, proj = quotient(layout.set, Relation(layout.set, pairs))
    legs = {}
    for idx in indices:
        legs[idx] = FiniteFn(
            objects[idx],
            classes,
            [
                proj.table[layout.encode(idx, x)]
                for x in range(objects[idx].size)
            ],
        )
    shape = Diagram(
        indices,
        [],
        {i: objects[i] for i in indices},
        {},
    )
    return Cocone(shape, classes, legs, layout)


def canonical_product_map(
    families: Sequence[Diagram],
    shape: Optional[Tuple[Sequence, Iterable]] = None,
) -> FiniteFn:
    """Canonical map from colim of a product diagram to the product of colims.

    All family diagrams must share one index structure (shape supplies it
    when the family is empty).  The map sends the class of (i, tuple) to
    the tuple of per-family classes of (i, component); callers read off
    injectivity and surjectivity from the returned function.
    """
    families = list(families)
    if families:
        indices = families[0].indices
        edges = families[0].edges
        for f in families[1:]:
            if f.indices != indices or f.edges != edges:
                raise IndexMismatch("families disagree on index structure")
    elif shape is not None:
        indices, edges = tuple(shape[0]), frozenset(shape[1])
    else:
        raise IndexMismatch("empty family needs an explicit index shape")

    products = {
        i: cartesian([f.objects[i] for f in families]) for i in indices
    }
    arrows = {}
    for j, i in edges:
        src, dst = products[j], products[i]
        table = []
        for x in range(src.set.size):
            comps = src.decode(x)
            table.append(
                dst.encode(
                    tuple(
                        f.arrows[(j, i)].table[c]
                        for f, c in zip(families, comps)
                    )
                )
            )
        arrows[(j, i)] = FiniteFn(src.set, dst.set, table)
    prod_diagram = Diagram(
        indices, edges, {i: products[i].set for i in indices}, arrows
    )
    lhs = subdiagram_colimit(prod_diagram)
    cocones = [subdiagram_colimit(f) for f in families]
    rhs = cartesian([c.apex for c in cocones])

    table = [None] * lhs.apex.size
    for i in indices:
        prod = products[i]
        for x in range(prod.set.size):
            comps = prod.decode(x)
            cls = lhs.class_of(i, x)
            target = rhs.encode(
                tuple(c.class_of(i, v) for c, v in zip(cocones, comps))
            )
            if table[cls] is None:
                table[cls] = target
            elif table[cls] != target:
                raise IntegrityError(
                    f"canonical product map not well defined at class {cls}"
                )
    if lhs.apex.size and any(v is None for v in table):
        raise IntegrityError("colimit class with no representative")
    return FiniteFn(lhs.apex, rhs.set, table)


def colimit_commutes_with_finite_limits_check(d: Diagram, k: int) -> bool:
    """Compare colim(D^k) with (colim D)^k along the canonical map."""
    if not 0 <= k <= 3:
        raise ShapeMismatch(f"power {k} outside the supported range 0..3")
    fam = [d] * k
    fn = canonical_product_map(fam, shape=(d.indices, d.edges))
    return fn.is_bijection()
