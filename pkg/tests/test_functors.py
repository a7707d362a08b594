import itertools
from math import comb

import pytest

from muiter.colimit import Diagram
from muiter.errors import (
    BudgetExceeded,
    NonFunctorialDiagram,
    NonInvertibleGroupoidArrow,
    ShapeMismatch,
)
from muiter.finset import FiniteFn, FiniteSet, exponential
from muiter.functors import (
    BUILTIN_GROUPOIDS,
    ColimOver,
    Compose,
    Constant,
    Container,
    Groupoid,
    Identity,
    MuParam,
    Pairing,
    Product,
    Projection,
    Sum,
    SymContainer,
    apply_diagram,
    eval_functor,
    eval_functor_mor,
    expr_arity,
    infer_signature,
    preserves_chain_colimit,
    swap_groupoid,
)
from muiter.signature import Signature, container_apply, empty_signature

BIN = Signature.of(0, 2, labels=["leaf", "node"])

POLY = Sum((Constant(FiniteSet(1)), Product((Identity(), Identity()))))


def all_functions(a: int, b: int):
    for table in itertools.product(range(b), repeat=a):
        yield FiniteFn(FiniteSet(a), FiniteSet(b), table)


# -- object parts --------------------------------------------------------------


def test_eval_object_parts():
    x = FiniteSet(3)
    assert eval_functor(Identity(), (x,)) == x
    assert eval_functor(Projection(1), (x, FiniteSet(2))) == FiniteSet(2)
    assert eval_functor(Constant(FiniteSet(7)), (x,)) == FiniteSet(7)
    assert eval_functor(POLY, (x,)).size == 1 + 9
    assert eval_functor(Product((Identity(),) * 3), (x,)).size == 27
    assert eval_functor(Sum(()), (x,)).size == 0
    assert eval_functor(Product(()), (x,)).size == 1
    assert eval_functor(Container(BIN), (x,)).size == 1 + 9
    two_then_poly = Compose(POLY, (Product((Identity(), Identity())),))
    assert eval_functor(two_then_poly, (x,)).size == 1 + 81


def test_eval_pairing_returns_tuple():
    x = FiniteSet(2)
    got = eval_functor(Pairing((Identity(), Constant(FiniteSet(3)))), (x,))
    assert got == (FiniteSet(2), FiniteSet(3))


def test_expr_arity():
    assert expr_arity(Identity()) == 1
    assert expr_arity(Constant(FiniteSet(2))) == 0
    assert expr_arity(Projection(1)) == 2
    assert expr_arity(Sum((Identity(), Projection(1)))) == 2
    assert expr_arity(Compose(POLY, (Projection(1),))) == 2


def test_eval_needs_enough_arguments():
    with pytest.raises(ShapeMismatch):
        eval_functor(Identity(), ())
    with pytest.raises(ShapeMismatch):
        eval_functor(Projection(1), (FiniteSet(2),))


# -- morphism parts: functor laws ---------------------------------------------


BATTERY = [
    Identity(),
    Constant(FiniteSet(2)),
    POLY,
    Product((Identity(), Identity(), Identity())),
    Sum((Identity(), Constant(FiniteSet(1)), Identity())),
    Compose(POLY, (Sum((Constant(FiniteSet(1)), Identity())),)),
    Container(BIN),
    SymContainer(swap_groupoid(2)),
    SymContainer(swap_groupoid(3)),
]


@pytest.mark.parametrize("expr", BATTERY, ids=lambda e: type(e).__name__)
def test_identity_preserved(expr):
    for n in range(4):
        x = FiniteSet(n)
        got = eval_functor_mor(expr, (FiniteFn.identity(x),))
        assert got == FiniteFn.identity(eval_functor(expr, (x,)))


@pytest.mark.parametrize("expr", BATTERY, ids=lambda e: type(e).__name__)
def test_composition_preserved_exhaustive_small(expr):
    for a, b, c in itertools.product(range(3), repeat=3):
        for f in all_functions(a, b):
            for g in all_functions(b, c):
                lhs = eval_functor_mor(expr, (f.then(g),))
                rhs = eval_functor_mor(expr, (f,)).then(eval_functor_mor(expr, (g,)))
                assert lhs == rhs


def test_morphism_respects_block_layout():
    f = FiniteFn(FiniteSet(2), FiniteSet(2), (1, 0))
    got = eval_functor_mor(POLY, (f,))
    # block 0 is the constant summand, then the four pairs in mixed radix
    assert got.table[0] == 0
    assert got.table[1:] == (1 + 3, 1 + 2, 1 + 1, 1 + 0)


# -- symmetric containers against an orbit oracle --------------------------------


def orbit_classes(n: int, m: int):
    """Partition of all length-n tuples over m values into sorted-tuple orbits."""
    classes = {}
    for t in itertools.product(range(m), repeat=n):
        classes.setdefault(tuple(sorted(t)), set()).add(t)
    return classes


@pytest.mark.parametrize("n", [2, 3])
def test_sym_container_counts_multisets(n):
    expr = SymContainer(swap_groupoid(n))
    for m in range(5):
        assert eval_functor(expr, (FiniteSet(m),)).size == comb(m + n - 1, n)


@pytest.mark.parametrize("n", [2, 3])
def test_sym_container_classes_are_orbits(n):
    from muiter.functors import _sym_cocone

    g = swap_groupoid(n)
    for m in range(4):
        base = FiniteSet(m)
        cocone = _sym_cocone(g, base)
        exp = exponential(base, FiniteSet(n))
        seen = {}
        for enc in range(exp.set.size):
            t = exp.decode(enc)
            cls = cocone.class_of(0, enc)
            seen.setdefault(cls, set()).add(t)
        expected = set(frozenset(v) for v in orbit_classes(n, m).values())
        assert set(frozenset(v) for v in seen.values()) == expected


def test_sym_container_map_acts_on_multisets():
    expr = SymContainer(swap_groupoid(2))
    f = FiniteFn(FiniteSet(3), FiniteSet(2), (1, 0, 1))
    mor = eval_functor_mor(expr, (f,))
    from muiter.functors import _sym_cocone

    g = swap_groupoid(2)
    src, dst = _sym_cocone(g, f.dom), _sym_cocone(g, f.cod)
    exp_s = exponential(f.dom, FiniteSet(2))
    exp_d = exponential(f.cod, FiniteSet(2))
    for enc in range(exp_s.set.size):
        t = exp_s.decode(enc)
        u = tuple(f(v) for v in t)
        assert mor.table[src.class_of(0, enc)] == dst.class_of(0, exp_d.encode(u))


def test_groupoid_validation():
    two = FiniteSet(2)
    with pytest.raises(NonInvertibleGroupoidArrow):
        Groupoid((two,), ((0, 0, FiniteFn(two, two, (0, 0))),))
    with pytest.raises(ShapeMismatch):
        Groupoid((two,), ((0, 1, FiniteFn.identity(two)),))
    assert len(swap_groupoid(3).arrows) == 2
    assert set(BUILTIN_GROUPOIDS) == {"swap2", "swap3"}


# -- pointwise colimits -----------------------------------------------------------


def swap_component(env):
    x = env[0]
    pairs = eval_functor(Product((Identity(), Identity())), env)
    table = []
    for enc in range(pairs.size):
        a, b = enc % x.size, enc // x.size
        table.append(a * x.size + b)
    return FiniteFn(pairs, pairs, table)


def test_colim_over_matches_sym_container():
    quotiented = ColimOver(
        (Product((Identity(), Identity())),), ((0, 0, swap_component),)
    )
    sym = SymContainer(swap_groupoid(2))
    for m in range(5):
        x = FiniteSet(m)
        assert eval_functor(quotiented, (x,)).size == eval_functor(sym, (x,)).size
    for f in all_functions(3, 2):
        lhs = eval_functor_mor(quotiented, (f,))
        rhs = eval_functor_mor(sym, (f,))
        # same partition of pairs, so identical tables
        assert lhs.table == rhs.table


def test_colim_over_rejects_non_natural_components():
    def lopsided(env):
        x = env[0]
        if x.size == 2:
            return FiniteFn(x, x, (1, 0))
        return FiniteFn.identity(x)

    expr = ColimOver((Identity(),), ((0, 0, lopsided),))
    f = FiniteFn(FiniteSet(2), FiniteSet(3), (0, 1))
    with pytest.raises(NonFunctorialDiagram):
        eval_functor_mor(expr, (f,))


def test_colim_over_component_typing():
    def bad(env):
        return FiniteFn.identity(FiniteSet(99))

    expr = ColimOver((Identity(),), ((0, 0, bad),))
    with pytest.raises(ShapeMismatch):
        eval_functor(expr, (FiniteSet(2),))


# -- signature attribution ---------------------------------------------------------


def test_infer_signature():
    assert infer_signature(Identity()) == empty_signature()
    assert infer_signature(Constant(FiniteSet(5))) == empty_signature()
    assert infer_signature(Container(BIN)) == BIN
    sym = infer_signature(SymContainer(swap_groupoid(3)))
    assert sym.ops.size == 1 and sym.arity(0).size == 3
    assert infer_signature(POLY) == empty_signature()
    both = infer_signature(Sum((Container(BIN), SymContainer(swap_groupoid(2)))))
    assert both.ops.size == 3
    assert [both.arity(k).size for k in range(3)] == [0, 2, 2]
    assert infer_signature(MuParam(Container(BIN))) == BIN


def test_container_sizes_follow_signature():
    for n in range(4):
        x = FiniteSet(n)
        assert eval_functor(Container(BIN), (x,)) == container_apply(BIN, x)


# -- chains and preservation ---------------------------------------------------------


def inclusion_chain(sizes):
    objects = {k: FiniteSet(n) for k, n in enumerate(sizes)}
    arrows = {}
    for k in range(len(sizes) - 1):
        arrows[(k, k + 1)] = FiniteFn(
            objects[k], objects[k + 1], tuple(range(sizes[k]))
        )
    for j in range(len(sizes)):
        for i in range(j + 2, len(sizes)):
            arrows[(j, i)] = FiniteFn(objects[j], objects[i], tuple(range(sizes[j])))
    edges = list(arrows)
    return Diagram(tuple(range(len(sizes))), edges, objects, arrows)


@pytest.mark.parametrize("expr", BATTERY, ids=lambda e: type(e).__name__)
def test_preserves_chain_colimits(expr):
    chain = inclusion_chain([0, 1, 3])
    assert preserves_chain_colimit(expr, chain)
    collapsing = Diagram(
        (0, 1),
        [(0, 1)],
        {0: FiniteSet(2), 1: FiniteSet(1)},
        {(0, 1): FiniteFn(FiniteSet(2), FiniteSet(1), (0, 0))},
    )
    assert preserves_chain_colimit(expr, collapsing)


def test_apply_diagram_maps_objects_and_arrows():
    chain = inclusion_chain([1, 2])
    mapped = apply_diagram(POLY, chain)
    assert mapped.objects[0].size == 2
    assert mapped.objects[1].size == 5
    assert mapped.arrows[(0, 1)] == eval_functor_mor(POLY, (chain.arrows[(0, 1)],))


# -- parameterized fixpoints ----------------------------------------------------------


def test_mu_param_of_first_slot_is_identity_on_sizes():
    expr = MuParam(Projection(0))
    for n in range(4):
        assert eval_functor(expr, (FiniteSet(n),)).size == n
    f = FiniteFn(FiniteSet(3), FiniteSet(2), (0, 1, 1))
    mor = eval_functor_mor(expr, (f,))
    assert mor.dom.size == 3 and mor.cod.size == 2


def test_mu_param_functor_laws_where_finite():
    expr = MuParam(Projection(0))
    for a, b, c in itertools.product(range(3), repeat=3):
        for f in all_functions(a, b):
            for g in all_functions(b, c):
                lhs = eval_functor_mor(expr, (f.then(g),))
                rhs = eval_functor_mor(expr, (f,)).then(eval_functor_mor(expr, (g,)))
                assert lhs == rhs


def test_mu_param_lists_over_empty_is_nil_only():
    lists = MuParam(Sum((Constant(FiniteSet(1)), Product((Projection(0), Projection(1))))))
    assert eval_functor(lists, (FiniteSet(0),)).size == 1


def test_mu_param_infinite_fixpoint_exceeds_budget():
    lists = MuParam(
        Sum((Constant(FiniteSet(1)), Product((Projection(0), Projection(1))))),
        budget=6,
    )
    with pytest.raises(BudgetExceeded):
        eval_functor(lists, (FiniteSet(1),))


def test_compose_normalizes_inner():
    single = Compose(POLY, Identity())
    assert single.inner == (Identity(),)
    paired = Compose(POLY, Pairing((Identity(), Identity())))
    assert paired.inner == (Identity(), Identity())
