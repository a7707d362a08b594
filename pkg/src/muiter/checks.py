"""Randomized invariant checks behind the `check` command.

Each check draws its own samples from a seeded generator and reports
{"name", "ok", "detail"}.  These are sanity sweeps over laws the library
relies on, meant to be cheap enough to run interactively; the heavier
exhaustive arguments live in the test suite.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional

from .colimit import Diagram, subdiagram_colimit
from .errors import BudgetExceeded
from .finset import FiniteFn, FiniteSet
from .functors import FunctorExpr, eval_functor, eval_functor_mor, expr_arity, preserves_chain_colimit
from .size import filtered_sample_check, height


def _fail(name: str, detail: str) -> Dict:
    return {"name": name, "ok": False, "detail": detail}


def _pass(name: str, detail: str) -> Dict:
    return {"name": name, "ok": True, "detail": detail}


def check_order_laws(backend, rng: random.Random, samples: int, depth: int) -> Dict:
    name = "order-laws"
    indices = backend.sample_indices(rng, max(samples, 3), depth)
    for i in indices:
        if backend.lt(i, i):
            return _fail(name, f"strict order is reflexive at {backend.render(i)}")
        if not backend.leq(i, i):
            return _fail(name, f"lax order is irreflexive at {backend.render(i)}")
        if not backend.leq(backend.bottom(), i):
            return _fail(name, f"bottom above {backend.render(i)}")
        if not backend.lt(i, backend.succ(i)):
            return _fail(name, f"successor not above {backend.render(i)}")
    for _ in range(samples):
        a, b, c = (indices[rng.randrange(len(indices))] for _ in range(3))
        if backend.lt(a, b) and not backend.leq(a, b):
            return _fail(name, "strict without lax")
        if backend.lt(a, b) and backend.leq(b, c) and not backend.lt(a, c):
            return _fail(name, "lt;leq not strict")
        if backend.leq(a, b) and backend.lt(b, c) and not backend.lt(a, c):
            return _fail(name, "leq;lt not strict")
        if backend.leq(a, b) and backend.leq(b, c) and not backend.leq(a, c):
            return _fail(name, "lax order not transitive")
        if backend.lt(a, b) != (height(a) < height(b)):
            return _fail(name, "strict order disagrees with rank")
        if backend.leq(a, b) != (height(a) <= height(b)):
            return _fail(name, "lax order disagrees with rank")
    return _pass(name, f"{samples} triples over {len(indices)} indices")


def check_join_bounds(backend, rng: random.Random, samples: int, depth: int) -> Dict:
    name = "join-bounds"
    indices = backend.sample_indices(rng, max(samples, 2), depth)
    for _ in range(samples):
        a = indices[rng.randrange(len(indices))]
        b = indices[rng.randrange(len(indices))]
        j = backend.join(a, b)
        if not (backend.leq(a, j) and backend.leq(b, j)):
            return _fail(
                name,
                f"join of {backend.render(a)} and {backend.render(b)} not an upper bound",
            )
    return _pass(name, f"{samples} pairs")


def check_filtered(backend, rng: random.Random, samples: int, depth: int) -> Dict:
    name = "filtered-bounds"
    indices = backend.sample_indices(rng, max(samples, 4), depth)
    drawn = []
    for _ in range(samples):
        width = rng.randrange(0, 4)
        family = tuple(indices[rng.randrange(len(indices))] for _ in range(width))
        drawn.append((0, family))
    ok, witnesses = filtered_sample_check(backend, drawn)
    if not ok:
        return _fail(name, "some sampled family had no strict upper bound")
    for (_, family), w in zip(drawn, witnesses):
        for member in family:
            if not backend.lt(member, w):
                return _fail(name, "reported bound is not strictly above a member")
    return _pass(name, f"{samples} families bounded")


def check_basis(backend, rng: random.Random, samples: int, depth: int) -> Dict:
    name = "predecessor-basis"
    indices = backend.sample_indices(rng, max(samples, 2), depth)
    for i in indices:
        for b in backend.predecessor_basis(i):
            if not backend.lt(b, i):
                return _fail(
                    name,
                    f"basis member {backend.render(b)} not below {backend.render(i)}",
                )
    return _pass(name, f"{len(indices)} indices")


def _random_fn(rng: random.Random, dom: FiniteSet, cod: FiniteSet) -> FiniteFn:
    table = tuple(rng.randrange(cod.size) for _ in range(dom.size))
    return FiniteFn(dom, cod, table)


def check_functor_laws(
    label: str, expr: FunctorExpr, rng: random.Random, samples: int, depth: int
) -> Dict:
    name = f"functor-laws[{label}]"
    arity = expr_arity(expr)
    trials = 0
    for _ in range(samples):
        sizes_a = tuple(rng.randrange(0, depth + 1) for _ in range(arity))
        sizes_b = tuple(rng.randrange(1, depth + 1) for _ in range(arity))
        sizes_c = tuple(rng.randrange(1, depth + 1) for _ in range(arity))
        xs = tuple(FiniteSet(n) for n in sizes_a)
        ys = tuple(FiniteSet(n) for n in sizes_b)
        zs = tuple(FiniteSet(n) for n in sizes_c)
        try:
            ident = eval_functor_mor(expr, tuple(FiniteFn.identity(x) for x in xs))
            if ident.table != tuple(range(ident.dom.size)):
                return _fail(name, f"identity not preserved at sizes {sizes_a}")
            fs = tuple(_random_fn(rng, x, y) for x, y in zip(xs, ys))
            gs = tuple(_random_fn(rng, y, z) for y, z in zip(ys, zs))
            lhs = eval_functor_mor(expr, tuple(f.then(g) for f, g in zip(fs, gs)))
            rhs = eval_functor_mor(expr, fs).then(eval_functor_mor(expr, gs))
        except BudgetExceeded:
            # fixpoint subexpressions can be infinite away from the empty set;
            # those sizes simply cannot be sampled
            continue
        if lhs.table != rhs.table:
            return _fail(name, f"composition not preserved at sizes {sizes_a}")
        trials += 1
    if trials == 0:
        return _pass(name, "skipped: no finitely evaluable sample sizes")
    return _pass(name, f"{trials} random composites")


def check_chain_preservation(
    label: str, expr: FunctorExpr, rng: random.Random, depth: int
) -> Dict:
    name = f"chain-colimits[{label}]"
    if expr_arity(expr) > 1:
        return _pass(name, "skipped: not an endofunctor")
    sizes = sorted(rng.randrange(0, depth + 2) for _ in range(3))
    objects = {k: FiniteSet(n) for k, n in enumerate(sizes)}
    arrows = {}
    for k in range(2):
        dom, cod = objects[k], objects[k + 1]
        table = tuple(sorted(rng.sample(range(cod.size), dom.size)))
        arrows[(k, k + 1)] = FiniteFn(dom, cod, table)
    arrows[(0, 2)] = arrows[(0, 1)].then(arrows[(1, 2)])
    chain = Diagram((0, 1, 2), ((0, 1), (1, 2), (0, 2)), objects, arrows)
    try:
        preserved = preserves_chain_colimit(expr, chain)
    except BudgetExceeded:
        return _pass(name, "skipped: fixpoint infinite on sampled chain")
    if not preserved:
        return _fail(name, f"comparison map not a bijection on chain {sizes}")
    return _pass(name, f"chain with carriers {sizes}")


def check_cocone_laws(rng: random.Random, samples: int, depth: int) -> Dict:
    name = "cocone-laws"
    for trial in range(samples):
        n0, n1, n2 = (rng.randrange(0, depth + 2) for _ in range(3))
        objects = {0: FiniteSet(n0), 1: FiniteSet(n1), 2: FiniteSet(n2)}
        f01 = _random_fn(rng, objects[0], FiniteSet(max(n1, 1))) if n1 else None
        f12 = _random_fn(rng, objects[1], FiniteSet(max(n2, 1))) if n2 else None
        arrows = {}
        edges = []
        if f01 is not None:
            arrows[(0, 1)] = FiniteFn(objects[0], objects[1], f01.table)
            edges.append((0, 1))
        if f12 is not None:
            arrows[(1, 2)] = FiniteFn(objects[1], objects[2], f12.table)
            edges.append((1, 2))
        if f01 is not None and f12 is not None:
            arrows[(0, 2)] = arrows[(0, 1)].then(arrows[(1, 2)])
            edges.append((0, 2))
        diagram = Diagram((0, 1, 2), tuple(edges), objects, arrows)
        if not diagram.is_directed():
            continue
        cocone = subdiagram_colimit(diagram)
        for (a, b) in edges:
            lhs = diagram.arrows[(a, b)].then(cocone.legs[b])
            if lhs.table != cocone.legs[a].table:
                return _fail(name, f"leg mismatch on edge {(a, b)} in trial {trial}")
        covered = set()
        for leg in cocone.legs.values():
            covered.update(leg.table)
        if covered != set(range(cocone.apex.size)):
            return _fail(name, f"legs not jointly surjective in trial {trial}")
    return _pass(name, f"{samples} random diagrams")


def run_checks(
    backend,
    functors: Optional[Dict[str, FunctorExpr]] = None,
    samples: int = 200,
    depth: int = 3,
    seed: int = 0,
) -> List[Dict]:
    """Run every suite; returns one report dict per check."""
    functors = functors or {}
    rng = random.Random(seed)
    reports = [
        check_order_laws(backend, rng, samples, depth),
        check_join_bounds(backend, rng, samples, depth),
        check_filtered(backend, rng, max(samples // 4, 8), depth),
        check_basis(backend, rng, max(samples // 4, 8), depth),
        check_cocone_laws(rng, max(samples // 8, 8), depth),
    ]
    fn_samples = max(samples // 20, 4)
    for label in sorted(functors):
        expr = functors[label]
        reports.append(check_functor_laws(label, expr, rng, fn_samples, depth))
        reports.append(check_chain_preservation(label, expr, rng, depth))
    return reports
