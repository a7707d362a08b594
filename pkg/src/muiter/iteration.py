"""Inflationary iteration of finite-set functors up to their fixpoints.

Stages are indexed by a size backend.  The stage at index i is the colimit
of F applied to all strictly earlier stages; because a stage's own value
never appears on the right-hand side, the recursion needs no case split on
the form of the index.  The infinite down-set below i is represented by the
backend's finite predecessor basis: every strictly smaller index embeds
laxly into some basis member, so the colimit over the basis (with
connecting maps synthesized from the lax order) agrees with the full one.

Once the step from a stage to its successor becomes a bijection in both the
fresh-layer leg and the connecting map, the chain is stationary and the
stage carries the initial algebra; the structure map is the fresh-layer leg
followed by the inverted connecting map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Optional, Sequence

from .colimit import Cocone, Diagram, subdiagram_colimit
from .errors import (
    BudgetExceeded,
    IntegrityError,
    NoAlgebra,
    ShapeMismatch,
)
from .finset import FiniteFn, FiniteSet, tagged_sum
from .functors import (
    Compose,
    Constant,
    FunctorExpr,
    Identity,
    MuParam,
    Sum,
    eval_functor,
    eval_functor_mor,
    expr_arity,
    infer_signature,
)
from .size import kappa_sigma, nat_backend

DEFAULT_BUDGET = 8
DEFAULT_MAX_CARRIER = 500_000


@dataclass(frozen=True)
class AlgebraSpec:
    """A carrier with a structure map F(carrier) -> carrier."""

    carrier: FiniteSet
    structure: FiniteFn

    def __post_init__(self):
        if self.structure.cod != self.carrier:
            raise NoAlgebra(
                f"structure map lands in a set of size "
                f"{self.structure.cod.size}, carrier has {self.carrier.size}"
            )


@dataclass
class StageRecord:
    """One computed stage: its index, carrier, basis, and colimit data."""

    index: Hashable
    basis: tuple
    cocone: Cocone

    @property
    def carrier(self) -> FiniteSet:
        return self.cocone.apex


class IterationState:
    """Memoized stages of one functor over one size backend.

    stage(i) computes the colimit at index i by well-founded recursion over
    the predecessor basis.  connect(j, i) is the canonical map between
    stages for laxly ordered indices; leg(j, i) is the canonical injection
    of the fresh layer F(stage j) into stage i for strictly ordered ones.
    """

    def __init__(
        self,
        functor: FunctorExpr,
        backend,
        budget: int = DEFAULT_BUDGET,
        max_carrier: int = DEFAULT_MAX_CARRIER,
    ):
        if expr_arity(functor) > 1:
            raise ShapeMismatch("iteration needs an endofunctor of one argument")
        self.functor = functor
        self.backend = backend
        self.budget = budget
        self.max_carrier = max_carrier
        self.stages: Dict = {}
        self._connects: Dict = {}
        self._legs: Dict = {}

    # -- profile ---------------------------------------------------------

    def profile(self) -> list:
        """Stage sizes in computation order, for reports and errors."""
        return [
            {"index": self.backend.render(rec.index), "size": rec.carrier.size}
            for rec in self.stages.values()
        ]

    # -- stage computation ----------------------------------------------

    def stage(self, i) -> StageRecord:
        key = self.backend.key(i)
        rec = self.stages.get(key)
        if rec is not None:
            return rec
        if len(self.stages) >= self.budget:
            raise BudgetExceeded(
                f"stage budget {self.budget} exhausted", self.profile()
            )
        basis = self._dedup(self.backend.predecessor_basis(i))
        for j in basis:
            self.stage(j)
        if len(self.stages) >= self.budget:
            raise BudgetExceeded(
                f"stage budget {self.budget} exhausted", self.profile()
            )
        objects = {}
        for j in basis:
            obj = self._apply_object(self.stages[self.backend.key(j)].carrier)
            objects[j] = obj
        edges = []
        arrows = {}
        for a in basis:
            for b in basis:
                if a == b:
                    continue
                if self.backend.leq(a, b):
                    edges.append((a, b))
                    arrows[(a, b)] = self._apply_mor(self.connect(a, b))
        diagram = Diagram(basis, edges, objects, arrows)
        cocone = subdiagram_colimit(diagram)
        rec = StageRecord(index=i, basis=basis, cocone=cocone)
        self.stages[key] = rec
        return rec

    def _dedup(self, family) -> tuple:
        seen = set()
        out = []
        for j in family:
            k = self.backend.key(j)
            if k not in seen:
                seen.add(k)
                out.append(j)
        return tuple(out)

    def _apply_object(self, x: FiniteSet) -> FiniteSet:
        out = eval_functor(self.functor, (x,))
        if not isinstance(out, FiniteSet):
            raise ShapeMismatch("iteration needs a set-valued functor")
        if out.size > self.max_carrier:
            raise BudgetExceeded(
                f"carrier of size {out.size} exceeds the cap "
                f"{self.max_carrier}",
                self.profile(),
            )
        return out

    def _apply_mor(self, f: FiniteFn) -> FiniteFn:
        return eval_functor_mor(self.functor, (f,))

    # -- canonical maps between stages -----------------------------------

    def connect(self, j, i) -> FiniteFn:
        """Stage map for laxly ordered indices j and i."""
        kj, ki = self.backend.key(j), self.backend.key(i)
        if kj == ki:
            return FiniteFn.identity(self.stage(j).carrier)
        memo_key = (kj, ki)
        got = self._connects.get(memo_key)
        if got is not None:
            return got
        src = self.stage(j)
        dst = self.stage(i)
        table: list = [None] * src.carrier.size
        for m in src.basis:
            fresh = self.leg(m, i)
            into_j = src.cocone.legs[m]
            for v in range(into_j.dom.size):
                cls = into_j.table[v]
                target = fresh.table[v]
                if table[cls] is None:
                    table[cls] = target
                elif table[cls] != target:
                    raise IntegrityError(
                        f"stage map {self.backend.render(j)} -> "
                        f"{self.backend.render(i)} ill defined at class {cls}"
                    )
        if any(v is None for v in table):
            raise IntegrityError("stage has a class with no layer representative")
        out = FiniteFn(src.carrier, dst.carrier, table)
        self._connects[memo_key] = out
        return out

    def leg(self, j, i) -> FiniteFn:
        """Fresh-layer injection F(stage j) -> stage i for j strictly below i."""
        kj, ki = self.backend.key(j), self.backend.key(i)
        memo_key = (kj, ki)
        got = self._legs.get(memo_key)
        if got is not None:
            return got
        dst = self.stage(i)
        direct = dst.cocone.legs.get(j)
        if direct is not None:
            self._legs[memo_key] = direct
            return direct
        for b in dst.basis:
            if self.backend.leq(j, b):
                out = self._apply_mor(self.connect(j, b)).then(
                    dst.cocone.legs[b]
                )
                self._legs[memo_key] = out
                return out
        raise IntegrityError(
            f"predecessor basis of {self.backend.render(i)} has no bound "
            f"for {self.backend.render(j)}"
        )


def inflationary_iterate(
    functor: FunctorExpr,
    backend,
    targets: Sequence,
    budget: int = DEFAULT_BUDGET,
    max_carrier: int = DEFAULT_MAX_CARRIER,
) -> IterationState:
    """Compute the stages at the target indices (and their recursive bases)."""
    state = IterationState(functor, backend, budget, max_carrier)
    for t in targets:
        state.stage(t)
    return state


@dataclass
class MuResult:
    """A stationary stage presented as an algebra, with its provenance."""

    algebra: AlgebraSpec
    stationary_at: int
    witness_index: Hashable
    state: IterationState

    @property
    def carrier(self) -> FiniteSet:
        return self.algebra.carrier

    @property
    def structure(self) -> FiniteFn:
        return self.algebra.structure


def mu_initial_algebra(
    functor: FunctorExpr,
    backend,
    budget: int = DEFAULT_BUDGET,
    max_carrier: int = DEFAULT_MAX_CARRIER,
) -> MuResult:
    """Iterate along the successor tower until the chain goes stationary.

    Stationarity needs both comparisons at once: the fresh layer
    F(stage i) -> stage succ(i) and the connecting map
    stage i -> stage succ(i) must be bijections.  The structure map is then
    the fresh-layer leg composed with the inverted connecting map.
    """
    state = IterationState(functor, backend, budget, max_carrier)
    i = backend.bottom()
    state.stage(i)
    steps = 0
    while True:
        nxt = backend.succ(i)
        state.stage(nxt)
        steps += 1
        fresh = state.leg(i, nxt)
        conn = state.connect(i, nxt)
        if fresh.is_bijection() and conn.is_bijection():
            iota = fresh.then(conn.inverse())
            return MuResult(
                algebra=AlgebraSpec(state.stage(i).carrier, iota),
                stationary_at=steps,
                witness_index=i,
                state=state,
            )
        i = nxt


def catamorphism(state: IterationState, alg: AlgebraSpec, i) -> FiniteFn:
    """The unique stage-indexed fold into the algebra.

    Built by the same well-founded recursion as the stages: a class coming
    from the layer F(stage j) folds by first folding at j inside F, then
    applying the structure map.
    """
    fa = eval_functor(state.functor, (alg.carrier,))
    if alg.structure.dom != fa:
        raise NoAlgebra(
            f"structure map domain has size {alg.structure.dom.size}, "
            f"functor applied to the carrier has {fa.size}"
        )
    done: Dict = {}

    def fold(idx) -> FiniteFn:
        key = state.backend.key(idx)
        got = done.get(key)
        if got is not None:
            return got
        rec = state.stage(idx)
        table: list = [None] * rec.carrier.size
        for j in rec.basis:
            inner = eval_functor_mor(state.functor, (fold(j),))
            into = rec.cocone.legs[j]
            for v in range(into.dom.size):
                cls = into.table[v]
                val = alg.structure.table[inner.table[v]]
                if table[cls] is None:
                    table[cls] = val
                elif table[cls] != val:
                    raise IntegrityError(
                        f"fold at {state.backend.render(idx)} ill defined "
                        f"at class {cls}"
                    )
        if any(v is None for v in table):
            raise IntegrityError("stage has a class with no layer representative")
        out = FiniteFn(rec.carrier, alg.carrier, table)
        done[key] = out
        return out

    return fold(i)


def fold_equation_holds(
    state: IterationState, alg: AlgebraSpec, h: FiniteFn, j, i
) -> bool:
    """Check h . leg(j,i) == structure . F(h . connect(j,i)) at one j."""
    lhs = state.leg(j, i).then(h)
    inner = state.connect(j, i).then(h)
    rhs = eval_functor_mor(state.functor, (inner,)).then(alg.structure)
    return lhs == rhs


@dataclass
class FreeResult:
    """Free algebra on a set of generators."""

    mu: MuResult
    generators: FiniteSet
    unit: FiniteFn
    structure: FiniteFn


def free_algebra(
    functor: FunctorExpr,
    generators: FiniteSet,
    backend,
    budget: int = DEFAULT_BUDGET,
    max_carrier: int = DEFAULT_MAX_CARRIER,
) -> FreeResult:
    """Initial algebra of F(-) + generators.

    The unit embeds a generator as the right summand under the structure
    map; the left summand is the F-algebra structure on the free carrier.
    """
    expr = Sum((functor, Constant(generators)))
    mu = mu_initial_algebra(expr, backend, budget, max_carrier)
    f_mu = eval_functor(functor, (mu.carrier,))
    layout = tagged_sum([f_mu, generators])
    unit = FiniteFn(
        generators,
        mu.carrier,
        [mu.structure.table[layout.encode(1, x)] for x in generators],
    )
    structure = FiniteFn(
        f_mu,
        mu.carrier,
        [mu.structure.table[layout.encode(0, v)] for v in range(f_mu.size)],
    )
    return FreeResult(mu=mu, generators=generators, unit=unit, structure=structure)


def _mu_backend(node: MuParam):
    if node.backend == "nat":
        return nat_backend()
    if node.backend == "plump":
        return kappa_sigma(infer_signature(node.body))
    raise ShapeMismatch(f"unknown backend tag {node.backend!r}")


def partial_application(body: FunctorExpr, value: FiniteSet) -> FunctorExpr:
    """Fix the first slot of a binary expression to a constant set."""
    return Compose(body, (Constant(value), Identity()))


def mu_parameterized(
    body: FunctorExpr,
    value: FiniteSet,
    backend,
    budget: int = DEFAULT_BUDGET,
    max_carrier: int = DEFAULT_MAX_CARRIER,
) -> MuResult:
    """Object part of the parameterized fixpoint: mu of body(value, -)."""
    return mu_initial_algebra(
        partial_application(body, value), backend, budget, max_carrier
    )


def mu_of_parameterized(node: MuParam, value: FiniteSet) -> MuResult:
    return mu_parameterized(node.body, value, _mu_backend(node), node.budget)


def mu_parameterized_map(node: MuParam, f: FiniteFn) -> FiniteFn:
    """Morphism part: the mediating fold between the two fixpoints."""
    mu_x = mu_of_parameterized(node, f.dom)
    mu_y = mu_of_parameterized(node, f.cod)
    step = eval_functor_mor(node.body, (f, FiniteFn.identity(mu_y.carrier)))
    alg = AlgebraSpec(mu_y.carrier, step.then(mu_y.structure))
    return catamorphism(mu_x.state, alg, mu_x.witness_index)


@dataclass
class NuResult:
    """A stationary stage of the dual chain."""

    carrier: FiniteSet
    comparison: FiniteFn
    stationary_at: int
    profile: list


def deflationary_nu(
    functor: FunctorExpr,
    budget: int = DEFAULT_BUDGET,
    max_carrier: int = DEFAULT_MAX_CARRIER,
) -> NuResult:
    """Dual chain on numeric stages: start at a point, repeatedly apply F.

    Stage n+1 maps onto stage n by the image of the previous comparison
    (the base case is the unique map to the point); the chain is stationary
    when that comparison becomes a bijection.
    """
    if expr_arity(functor) > 1:
        raise ShapeMismatch("dual iteration needs an endofunctor of one argument")
    stages = [FiniteSet(1)]
    comparison: Optional[FiniteFn] = None
    profile = [{"index": "0", "size": 1}]
    while True:
        if len(stages) >= budget:
            raise BudgetExceeded(f"stage budget {budget} exhausted", profile)
        nxt = eval_functor(functor, (stages[-1],))
        if not isinstance(nxt, FiniteSet):
            raise ShapeMismatch("dual iteration needs a set-valued functor")
        if nxt.size > max_carrier:
            raise BudgetExceeded(
                f"carrier of size {nxt.size} exceeds the cap {max_carrier}",
                profile,
            )
        if comparison is None:
            comparison = FiniteFn.constant(nxt, stages[-1], 0)
        else:
            comparison = eval_functor_mor(functor, (comparison,))
        stages.append(nxt)
        profile.append({"index": str(len(stages) - 1), "size": nxt.size})
        if comparison.is_bijection():
            return NuResult(
                carrier=stages[-2],
                comparison=comparison,
                stationary_at=len(stages) - 1,
                profile=profile,
            )
