"""The Rieger–Nishimura ladder and exact arithmetic in its upset algebra.

Nodes are ``("L", k)`` and ``("R", k)`` for depths ``k >= 1``; depth 1 is the
top row.  The order is generated by the covers

    L(k+1) < L(k),  L(k+1) < R(k),  R(k+1) < R(k),  R(k+2) < L(k).

Every node of depth ``>= k+2`` lies below both nodes of depth ``k``, so an upset
containing nodes of unbounded depth is everything.  Upsets are therefore
either ``Top`` or finite, and :class:`RNElement` stores the finite ones
exactly.  With the generic valuation ``x = {R1}`` these are the one-variable
formulas up to provable equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .logic.formula import (AND, BOT, BOTTOM, OR, TOP, TRUE, VAR, And, Formula, Iff, Imp, Not,
                            Or, Var, substitute)
from .logic.kripke import search_countermodel
from .logic.prover import Countermodel, Prover, decide, default_prover
from .poset import FinPoset, all_upset_masks

Node = tuple  # ("L" | "R", depth)


def node_depth(n: Node) -> int:
    return n[1]


def parents(n: Node) -> tuple:
    """The nodes covering ``n``."""
    col, k = n
    if col == "L":
        return (("L", k - 1), ("R", k - 1)) if k > 1 else ()
    out = []
    if k > 1:
        out.append(("R", k - 1))
    if k > 2:
        out.append(("L", k - 2))
    return tuple(out)


@lru_cache(maxsize=None)
def up_cone(n: Node) -> frozenset:
    out = {n}
    for m in parents(n):
        out |= up_cone(m)
    return frozenset(out)


def nodes_to_depth(d: int) -> list:
    return [(c, k) for k in range(1, d + 1) for c in ("L", "R")]


@lru_cache(maxsize=None)
def ladder_trunc(d: int) -> FinPoset:
    """The nodes of depth at most ``d`` with the induced order."""
    if d < 1:
        raise ValueError("depth must be >= 1")
    nodes = nodes_to_depth(d)
    pairs = [(n, m) for n in nodes for m in parents(n)]
    return FinPoset.from_relation(nodes, pairs)


class RNElement:
    """An upset of the ladder: ``Top`` or a finite upward-closed node set."""

    __slots__ = ("top", "nodes", "_hash")

    def __init__(self, nodes: Iterable[Node] = (), top: bool = False, check: bool = True):
        self.top = bool(top)
        self.nodes = frozenset() if top else frozenset((str(c), int(k)) for c, k in nodes)
        if check and not self.top:
            for n in self.nodes:
                if n[0] not in ("L", "R") or n[1] < 1:
                    raise ValueError(f"{n!r} is not a ladder node")
                for m in parents(n):
                    if m not in self.nodes:
                        raise ValueError(f"node set is not upward closed: {m!r} above {n!r}")
        self._hash = hash((self.top, self.nodes))

    def __eq__(self, other):
        return isinstance(other, RNElement) and self.top == other.top and self.nodes == other.nodes

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.top:
            return "RNElement(Top)"
        return f"RNElement({self.sorted_nodes()!r})"

    def sorted_nodes(self) -> list:
        return sorted(self.nodes, key=lambda n: (n[1], n[0]))

    @property
    def max_depth(self) -> int:
        return max((n[1] for n in self.nodes), default=0)

    def __contains__(self, n):
        return self.top or tuple(n) in self.nodes

    def __le__(self, other: "RNElement") -> bool:
        return other.top or (not self.top and self.nodes <= other.nodes)

    def restrict(self, d: int) -> frozenset:
        """The trace on nodes of depth at most ``d``."""
        if self.top:
            return frozenset(nodes_to_depth(d))
        return frozenset(n for n in self.nodes if n[1] <= d)

    def meet(self, other):
        return rn_meet(self, other)

    def join(self, other):
        return rn_join(self, other)

    def implies(self, other):
        return rn_implies(self, other)

    __and__ = meet
    __or__ = join
    __rshift__ = implies

    def __invert__(self):
        return rn_neg(self)


TOP_RN = RNElement(top=True)
EMPTY_RN = RNElement()
GENERIC_X = RNElement([("R", 1)])


def rn_meet(a: RNElement, b: RNElement) -> RNElement:
    if a.top:
        return b
    if b.top:
        return a
    return RNElement(a.nodes & b.nodes, check=False)


def rn_join(a: RNElement, b: RNElement) -> RNElement:
    if a.top or b.top:
        return TOP_RN
    return RNElement(a.nodes | b.nodes, check=False)


def rn_implies(a: RNElement, b: RNElement) -> RNElement:
    """Residual ``{n : ↑n ∩ a ⊆ b}``, computed in closed form.

    Only nodes of depth at most ``maxdepth(a ∖ b) + 1`` can avoid ``a ∖ b``;
    anything deeper sees every node of that depth.
    """
    if a.top:
        return b
    if b.top:
        return TOP_RN
    diff = a.nodes - b.nodes
    if not diff:
        return TOP_RN
    bound = max(n[1] for n in diff) + 1
    keep = [n for n in nodes_to_depth(bound) if not (up_cone(n) & diff)]
    return RNElement(keep, check=False)


def rn_neg(a: RNElement) -> RNElement:
    return rn_implies(a, EMPTY_RN)


def rn_ops(a: RNElement, b: RNElement) -> dict:
    return {"meet": rn_meet(a, b), "join": rn_join(a, b),
            "implies": rn_implies(a, b), "neg": rn_neg(a)}


def eval_one_var(f: Formula, x: RNElement = GENERIC_X, _cache=None) -> RNElement:
    """Value of a formula in ``x`` under the generic valuation."""
    cache = {} if _cache is None else _cache

    def ev(g):
        r = cache.get(g)
        if r is not None:
            return r
        k = g.kind
        if k == VAR:
            if g.name != "x":
                raise ValueError(f"only the variable x may occur, found {g.name!r}")
            r = x
        elif k == BOT:
            r = EMPTY_RN
        elif k == TOP:
            r = TOP_RN
        elif k == AND:
            r = rn_meet(ev(g.left), ev(g.right))
        elif k == OR:
            r = rn_join(ev(g.left), ev(g.right))
        else:
            r = rn_implies(ev(g.left), ev(g.right))
        cache[g] = r
        return r

    return ev(f)


def finite_upsets(d: int) -> list[RNElement]:
    """All upsets of the ladder whose nodes have depth at most ``d``."""
    T = ladder_trunc(d)
    return [RNElement(T.labels(m), check=False) for m in all_upset_masks(T)]


# -- uniform topological operators --------------------------------------------


@dataclass(frozen=True)
class UtopVerdict:
    formula: Formula
    ok: bool
    failed: int | None = None  # 1: top, 2: conjunction, 3: idempotence
    countermodel: object = None


_CONDITION_NAMES = {1: "preserves top", 2: "preserves conjunction", 3: "idempotent"}


def utop_conditions(f: Formula) -> list[Formula]:
    x, y = Var("x"), Var("y")
    return [
        substitute(f, {"x": TRUE}),
        Iff(substitute(f, {"x": And(x, y)}), And(f, substitute(f, {"x": y}))),
        Iff(substitute(f, {"x": f}), f),
    ]


def is_uniform_topological(f: Formula, prover: Prover | None = None,
                           quick_refute=None, countermodel_models: int = 50_000) -> UtopVerdict:
    """Check the three operator equations with the prover; report the first failure.

    A failing condition gets a countermodel when a bounded search over small
    rooted frames finds one; the verdict itself comes from the prover.
    """
    prover = prover or default_prover()
    for i, cond in enumerate(utop_conditions(f), start=1):
        d = decide(cond, prover, quick_refute=quick_refute, countermodel=False)
        if not d.provable:
            cm = d.countermodel
            if cm is None and countermodel_models:
                found = search_countermodel(cond, 6, max_models=countermodel_models)
                cm = Countermodel(*found) if found else None
            return UtopVerdict(f, False, i, cm)
    return UtopVerdict(f, True)


def condition_name(i: int) -> str:
    return _CONDITION_NAMES[i]


def class_representatives(depth_bound: int, max_size: int = 400) -> dict:
    """A smallest formula for every upset of depth ``<= depth_bound``, plus Top.

    Values are generated in order of formula size, combining smaller values
    with the connectives; values deeper than ``depth_bound + 2`` are dropped.
    Returns ``{RNElement: Formula}`` restricted to the targets and raises if
    some target is not reached by ``max_size``.
    """
    cap = depth_bound + 2
    targets = set(finite_upsets(depth_bound)) | {TOP_RN}
    reps = {GENERIC_X: Var("x"), EMPTY_RN: BOTTOM, TOP_RN: TRUE}
    by_size = {1: list(reps)}
    for s in range(2, max_size + 1):
        if targets <= reps.keys():
            break
        found = []

        def keep(val, make):
            if val not in reps and (val.top or val.max_depth <= cap):
                reps[val] = make()
                found.append(val)

        for a in by_size.get(s - 1, ()):
            keep(rn_neg(a), lambda a=a: Not(reps[a]))
        for i in range(1, s - 1):
            for a in by_size.get(i, ()):
                for b in by_size.get(s - 1 - i, ()):
                    keep(rn_meet(a, b), lambda a=a, b=b: And(reps[a], reps[b]))
                    keep(rn_join(a, b), lambda a=a, b=b: Or(reps[a], reps[b]))
                    keep(rn_implies(a, b), lambda a=a, b=b: Imp(reps[a], reps[b]))
        by_size[s] = found
    missing = targets - reps.keys()
    if missing:
        raise AssertionError(f"{len(missing)} upsets were not reached")
    return {t: reps[t] for t in sorted(targets, key=_rn_key)}


def _rn_key(a: RNElement):
    return (a.top, len(a.nodes), a.sorted_nodes())


@dataclass
class UtopSearchResult:
    depth_bound: int
    classes_tested: int
    passing: list  # of (RNElement, Formula)
    failures: dict  # condition index -> count


def utop_search(depth_bound: int = 4, prover: Prover | None = None) -> UtopSearchResult:
    """Test one representative per class of depth ``<= depth_bound`` (plus Top)."""
    if depth_bound < 3:
        raise ValueError("depth_bound must be >= 3")
    reps = class_representatives(depth_bound)
    passing, failures = [], {}
    for val, f in reps.items():
        v = is_uniform_topological(f, prover)
        if v.ok:
            passing.append((val, f))
        else:
            failures[v.failed] = failures.get(v.failed, 0) + 1
    return UtopSearchResult(depth_bound, len(reps), passing, failures)


def raw_sweep(max_size: int = 8, prover: Prover | None = None):
    """Test every one-variable formula tree up to ``max_size`` directly.

    Small Kripke models are tried first as refuters; only formulas that
    survive them reach the prover.  Returns ``(formulas_tested, passing)`` with
    passing formulas grouped by their ladder value.
    """
    from . import catalog
    from .logic.formula import formula_pool
    from .logic.kripke import all_models

    models = [M for P in catalog.rooted_posets_up_to(3) for M in all_models(P, ("x", "y"))]
    pool = formula_pool(max_size)
    passing: dict = {}
    for f in pool:
        if is_uniform_topological(f, prover, quick_refute=models, countermodel_models=0).ok:
            passing.setdefault(eval_one_var(f), []).append(f)
    return len(pool), passing


NAMED_OPERATORS = {
    "x": GENERIC_X,
    "~~x": rn_neg(rn_neg(GENERIC_X)),
    "true": TOP_RN,
}
