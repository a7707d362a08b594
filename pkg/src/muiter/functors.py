"""Functor expressions over finite sets: evaluation and signature inference.

Expressions form a small AST.  eval_functor computes the object part on a
tuple of argument sets, eval_functor_mor the morphism part on a tuple of
functions.  infer_signature attributes to every expression the operation
signature that bounds its branching: leaves contribute nothing, containers
contribute their own signature, and every composite contributes the tagged
sum of its children's attributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

from .colimit import Cocone, Diagram, finite_cat_colimit, subdiagram_colimit
from .errors import (
    IntegrityError,
    NonFunctorialDiagram,
    NonInvertibleGroupoidArrow,
    ShapeMismatch,
)
from .finset import (
    FiniteFn,
    FiniteSet,
    cartesian,
    exponential,
    tagged_sum,
)
from .signature import (
    Signature,
    container_map,
    container_layout,
    empty_signature,
    signature_sum,
)


class FunctorExpr:
    """Base class for functor expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Identity(FunctorExpr):
    """The first argument, unchanged."""


@dataclass(frozen=True)
class Projection(FunctorExpr):
    """The k-th argument, unchanged."""

    slot: int


@dataclass(frozen=True)
class Constant(FunctorExpr):
    """A fixed set, ignoring all arguments."""

    value: FiniteSet


@dataclass(frozen=True)
class Pairing(FunctorExpr):
    """Tuple of functors into a product of target slots."""

    parts: Tuple[FunctorExpr, ...]


@dataclass(frozen=True)
class Sum(FunctorExpr):
    """Disjoint union of the parts, laid out block by block."""

    parts: Tuple[FunctorExpr, ...]


@dataclass(frozen=True)
class Product(FunctorExpr):
    """Cartesian product of the parts, mixed-radix encoded."""

    parts: Tuple[FunctorExpr, ...]


@dataclass(frozen=True)
class Compose(FunctorExpr):
    """outer applied to the results of the inner expressions."""

    outer: FunctorExpr
    inner: Tuple[FunctorExpr, ...]

    def __post_init__(self):
        inner = self.inner
        if isinstance(inner, Pairing):
            inner = inner.parts
        elif isinstance(inner, FunctorExpr):
            inner = (inner,)
        else:
            inner = tuple(inner)
        object.__setattr__(self, "inner", inner)


@dataclass(frozen=True)
class Container(FunctorExpr):
    """X maps to the sum over ops of tables arity(op) -> X."""

    sig: Signature


@dataclass(frozen=True)
class Groupoid:
    """Finitely many objects with arity sets and invertible reindexings.

    Arrows are generators (src, dst, bijection on arities); identities are
    implicit and inverses need not be listed.
    """

    arities: Tuple[FiniteSet, ...]
    arrows: Tuple[Tuple[int, int, FiniteFn], ...] = ()

    def __post_init__(self):
        for src, dst, f in self.arrows:
            if not 0 <= src < len(self.arities) or not 0 <= dst < len(self.arities):
                raise ShapeMismatch(f"groupoid arrow ({src}, {dst}) out of range")
            if f.dom != self.arities[src] or f.cod != self.arities[dst]:
                raise ShapeMismatch("groupoid arrow does not match its arities")
            if not f.is_bijection():
                raise NonInvertibleGroupoidArrow(
                    f"arrow {src}->{dst} is not a bijection"
                )


@dataclass(frozen=True)
class SymContainer(FunctorExpr):
    """Container whose argument tables are identified along symmetries.

    X maps to the colimit over the groupoid of the exponentials X**arity.
    """

    groupoid: Groupoid


@dataclass(frozen=True)
class ColimOver(FunctorExpr):
    """Pointwise colimit of a finite family of functors.

    Arrows carry natural-transformation components as a callable from the
    argument-set tuple to the connecting function; naturality is checked
    where the morphism part needs it.
    """

    parts: Tuple[FunctorExpr, ...]
    arrows: Tuple[Tuple[int, int, Callable], ...] = ()


@dataclass(frozen=True)
class MuParam(FunctorExpr):
    """Least fixpoint of a binary expression in its second slot.

    Evaluates X to the stationary carrier of Y |-> body(X, Y); the
    morphism part is the mediating fold between the two fixpoints.
    """

    body: FunctorExpr
    budget: int = 32
    backend: str = "nat"


def swap_groupoid(n: int = 2) -> Groupoid:
    """One object of arity n with adjacent transpositions as symmetries."""
    arity = FiniteSet(n)
    arrows = []
    for k in range(n - 1):
        table = list(range(n))
        table[k], table[k + 1] = table[k + 1], table[k]
        arrows.append((0, 0, FiniteFn(arity, arity, table)))
    return Groupoid((arity,), tuple(arrows))


BUILTIN_GROUPOIDS = {
    "swap2": swap_groupoid(2),
    "swap3": swap_groupoid(3),
}


def expr_arity(e: FunctorExpr) -> int:
    """Minimum number of arguments the expression consumes."""
    if isinstance(e, Identity):
        return 1
    if isinstance(e, Projection):
        return e.slot + 1
    if isinstance(e, Constant):
        return 0
    if isinstance(e, (Pairing, Sum, Product)):
        return max((expr_arity(p) for p in e.parts), default=0)
    if isinstance(e, Compose):
        if expr_arity(e.outer) > len(e.inner):
            raise ShapeMismatch(
                f"outer expression needs {expr_arity(e.outer)} arguments, "
                f"inner supplies {len(e.inner)}"
            )
        return max((expr_arity(g) for g in e.inner), default=0)
    if isinstance(e, (Container, SymContainer)):
        return 1
    if isinstance(e, ColimOver):
        return max((expr_arity(p) for p in e.parts), default=1)
    if isinstance(e, MuParam):
        if expr_arity(e.body) > 2:
            raise ShapeMismatch("fixpoint body must be at most binary")
        return 1
    raise ShapeMismatch(f"unknown expression node {type(e).__name__}")


def _need(env: tuple, n: int, e: FunctorExpr):
    if len(env) < n:
        raise ShapeMismatch(
            f"{type(e).__name__} needs {n} arguments, got {len(env)}"
        )


def eval_functor(e: FunctorExpr, env: Tuple[FiniteSet, ...]):
    """Object part.  Returns a FiniteSet, or a tuple for Pairing."""
    env = tuple(env)
    if isinstance(e, Identity):
        _need(env, 1, e)
        return env[0]
    if isinstance(e, Projection):
        _need(env, e.slot + 1, e)
        return env[e.slot]
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Pairing):
        return tuple(eval_functor(p, env) for p in e.parts)
    if isinstance(e, Sum):
        return tagged_sum([eval_functor(p, env) for p in e.parts]).set
    if isinstance(e, Product):
        return cartesian([eval_functor(p, env) for p in e.parts]).set
    if isinstance(e, Compose):
        vals = tuple(eval_functor(g, env) for g in e.inner)
        return eval_functor(e.outer, vals)
    if isinstance(e, Container):
        _need(env, 1, e)
        return container_layout(e.sig, env[0]).set
    if isinstance(e, SymContainer):
        _need(env, 1, e)
        return _sym_cocone(e.groupoid, env[0]).apex
    if isinstance(e, ColimOver):
        return _colim_over_cocone(e, env).apex
    if isinstance(e, MuParam):
        _need(env, 1, e)
        from . import iteration

        return iteration.mu_of_parameterized(e, env[0]).carrier
    raise ShapeMismatch(f"unknown expression node {type(e).__name__}")


def eval_functor_mor(e: FunctorExpr, fns: Tuple[FiniteFn, ...]):
    """Morphism part.  Returns a FiniteFn, or a tuple for Pairing."""
    fns = tuple(fns)
    if isinstance(e, Identity):
        _need(fns, 1, e)
        return fns[0]
    if isinstance(e, Projection):
        _need(fns, e.slot + 1, e)
        return fns[e.slot]
    if isinstance(e, Constant):
        return FiniteFn.identity(e.value)
    if isinstance(e, Pairing):
        return tuple(eval_functor_mor(p, fns) for p in e.parts)
    if isinstance(e, Sum):
        mors = [eval_functor_mor(p, fns) for p in e.parts]
        dom = tagged_sum([m.dom for m in mors])
        cod = tagged_sum([m.cod for m in mors])
        table = []
        for idx in range(dom.set.size):
            tag, x = dom.decode(idx)
            table.append(cod.encode(tag, mors[tag].table[x]))
        return FiniteFn(dom.set, cod.set, table)
    if isinstance(e, Product):
        mors = [eval_functor_mor(p, fns) for p in e.parts]
        dom = cartesian([m.dom for m in mors])
        cod = cartesian([m.cod for m in mors])
        table = []
        for idx in range(dom.set.size):
            comps = dom.decode(idx)
            table.append(
                cod.encode(tuple(m.table[c] for m, c in zip(mors, comps)))
            )
        return FiniteFn(dom.set, cod.set, table)
    if isinstance(e, Compose):
        vals = tuple(eval_functor_mor(g, fns) for g in e.inner)
        return eval_functor_mor(e.outer, vals)
    if isinstance(e, Container):
        _need(fns, 1, e)
        return container_map(e.sig, fns[0])
    if isinstance(e, SymContainer):
        _need(fns, 1, e)
        return _sym_map(e.groupoid, fns[0])
    if isinstance(e, ColimOver):
        return _colim_over_map(e, fns)
    if isinstance(e, MuParam):
        _need(fns, 1, e)
        from . import iteration

        return iteration.mu_parameterized_map(e, fns[0])
    raise ShapeMismatch(f"unknown expression node {type(e).__name__}")


def _sym_cocone(g: Groupoid, base: FiniteSet) -> Cocone:
    """Colimit of the exponentials along the symmetry reindexings."""
    exps = [exponential(base, a) for a in g.arities]
    arrows = []
    for src, dst, sigma in g.arrows:
        sigma_inv = sigma.inverse()
        exp_s, exp_d = exps[src], exps[dst]
        table = []
        for enc in range(exp_s.set.size):
            t = exp_s.decode(enc)
            u = tuple(t[sigma_inv.table[j]] for j in range(g.arities[dst].size))
            table.append(exp_d.encode(u))
        arrows.append((src, dst, FiniteFn(exp_s.set, exp_d.set, table)))
    return finite_cat_colimit([e.set for e in exps], arrows)


def _sym_map(g: Groupoid, f: FiniteFn) -> FiniteFn:
    src_cocone = _sym_cocone(g, f.dom)
    dst_cocone = _sym_cocone(g, f.cod)
    src_exps = [exponential(f.dom, a) for a in g.arities]
    dst_exps = [exponential(f.cod, a) for a in g.arities]
    table = [None] * src_cocone.apex.size
    for obj in range(len(g.arities)):
        for enc in range(src_exps[obj].set.size):
            t = src_exps[obj].decode(enc)
            u = tuple(f.table[v] for v in t)
            cls = src_cocone.class_of(obj, enc)
            target = dst_cocone.class_of(obj, dst_exps[obj].encode(u))
            if table[cls] is None:
                table[cls] = target
            elif table[cls] != target:
                raise IntegrityError("symmetry action is not natural")
    return FiniteFn(src_cocone.apex, dst_cocone.apex, table)


def _colim_over_cocone(e: ColimOver, env: tuple) -> Cocone:
    objs = [eval_functor(p, env) for p in e.parts]
    arrows = []
    for src, dst, component in e.arrows:
        fn = component(env)
        if fn.dom != objs[src] or fn.cod != objs[dst]:
            raise ShapeMismatch(
                f"component {src}->{dst} is {fn.dom.size}->{fn.cod.size}, "
                f"parts evaluate to {objs[src].size}->{objs[dst].size}"
            )
        arrows.append((src, dst, fn))
    return finite_cat_colimit(objs, arrows)


def _colim_over_map(e: ColimOver, fns: tuple) -> FiniteFn:
    env_dom = tuple(f.dom for f in fns)
    env_cod = tuple(f.cod for f in fns)
    src_cocone = _colim_over_cocone(e, env_dom)
    dst_cocone = _colim_over_cocone(e, env_cod)
    part_mors = [eval_functor_mor(p, fns) for p in e.parts]
    table = [None] * src_cocone.apex.size
    for obj, mor in enumerate(part_mors):
        for x in range(mor.dom.size):
            cls = src_cocone.class_of(obj, x)
            target = dst_cocone.class_of(obj, mor.table[x])
            if table[cls] is None:
                table[cls] = target
            elif table[cls] != target:
                raise NonFunctorialDiagram(
                    "colimit components are not natural in the argument"
                )
    return FiniteFn(src_cocone.apex, dst_cocone.apex, table)


def infer_signature(e: FunctorExpr) -> Signature:
    """Attribute a bounding signature to the expression."""
    if isinstance(e, (Identity, Projection, Constant)):
        return empty_signature()
    if isinstance(e, Container):
        return e.sig
    if isinstance(e, SymContainer):
        g = e.groupoid
        return Signature(FiniteSet(len(g.arities)), list(g.arities))
    if isinstance(e, (Pairing, Sum, Product)):
        return signature_sum([infer_signature(p) for p in e.parts])
    if isinstance(e, Compose):
        children = (e.outer,) + e.inner
        return signature_sum([infer_signature(c) for c in children])
    if isinstance(e, ColimOver):
        return signature_sum([infer_signature(p) for p in e.parts])
    if isinstance(e, MuParam):
        return infer_signature(e.body)
    raise ShapeMismatch(f"unknown expression node {type(e).__name__}")


def apply_diagram(e: FunctorExpr, d: Diagram) -> Diagram:
    """Apply a unary functor expression to every object and arrow."""
    objects = {i: eval_functor(e, (d.objects[i],)) for i in d.indices}
    arrows = {
        edge: eval_functor_mor(e, (f,)) for edge, f in d.arrows.items()
    }
    return Diagram(d.indices, d.edges, objects, arrows)


def preserves_chain_colimit(e: FunctorExpr, d: Diagram) -> bool:
    """Smoke test: the canonical map colim F(D) -> F(colim D) is bijective."""
    mapped = apply_diagram(e, d)
    lhs = subdiagram_colimit(mapped)
    base = subdiagram_colimit(d)
    rhs = eval_functor(e, (base.apex,))
    table = [None] * lhs.apex.size
    for i in d.indices:
        leg_mor = eval_functor_mor(e, (base.legs[i],))
        for v in range(mapped.objects[i].size):
            cls = lhs.class_of(i, v)
            target = leg_mor.table[v]
            if table[cls] is None:
                table[cls] = target
            elif table[cls] != target:
                raise IntegrityError("canonical comparison map ill defined")
    fn = FiniteFn(lhs.apex, rhs, table)
    return fn.is_bijection()
