"""Decision procedure for intuitionistic propositional logic.

Provability uses Dyckhoff's contraction-free sequent calculus: invertible
rules are applied eagerly, after which the goal disjunction and the
left rule for nested implications ``(C -> D) -> B`` are tried in turn.  Every
premise is smaller in the multiset ordering, so search terminates without
loop checks.  Results are memoised per sequent.  A sequent that fails under
some classical truth assignment is rejected at once, since every
intuitionistically provable sequent is classically valid.

An unprovable formula gets a finite countermodel built from prime, deductively
closed subsets of its subformulas, using the prover to decide membership.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ResourceError
from ..poset import FinPoset
from .formula import AND, BOT, IMP, OR, TOP, VAR, BOTTOM, Formula, Iff, Imp, subformulas, variables
from .kripke import KripkeModel, force, search_countermodel

DEFAULT_STEP_BUDGET = 2_000_000
_TT_VARS = 6  # truth tables cover this many variables (64 assignments)
_TT_FULL = (1 << (1 << _TT_VARS)) - 1


def _var_table(i: int) -> int:
    return sum(1 << a for a in range(1 << _TT_VARS) if (a >> i) & 1)


_VAR_TABLES = [_var_table(i) for i in range(_TT_VARS)]


class Prover:
    """A G4ip prover with a sequent cache shared across calls."""

    def __init__(self, step_budget: int = DEFAULT_STEP_BUDGET, cache_limit: int = 1_000_000):
        self.step_budget = step_budget
        self.cache_limit = cache_limit
        self.cache: dict = {}
        self._steps = 0
        self._var_index: dict = {}
        self._tables: dict = {}

    def provable(self, goal: Formula, hyps=()) -> bool:
        self._steps = 0
        if len(self.cache) > self.cache_limit:
            self.cache.clear()
        return self._prove(frozenset(hyps), goal)

    def _tick(self):
        self._steps += 1
        if self._steps > self.step_budget:
            raise ResourceError(f"proof search exceeded {self.step_budget} steps")

    def _table(self, f: Formula):
        """Classical truth table of ``f`` as a bitmask, or None if too many variables."""
        t = self._tables.get(f)
        if t is not None or f in self._tables:
            return t
        k = f.kind
        if k == VAR:
            i = self._var_index.setdefault(f.name, len(self._var_index))
            t = _VAR_TABLES[i] if i < _TT_VARS else None
        elif k == BOT:
            t = 0
        elif k == TOP:
            t = _TT_FULL
        else:
            a, b = self._table(f.left), self._table(f.right)
            if a is None or b is None:
                t = None
            elif k == AND:
                t = a & b
            elif k == OR:
                t = a | b
            else:
                t = (_TT_FULL & ~a) | b
        self._tables[f] = t
        return t

    def classically_refuted(self, gamma, goal: Formula) -> bool:
        acc = self._table(goal)
        if acc is None:
            return False
        acc = _TT_FULL & ~acc
        for g in gamma:
            t = self._table(g)
            if t is None:
                return False
            acc &= t
            if not acc:
                return False
        return acc != 0

    def _prove(self, gamma: frozenset, goal: Formula) -> bool:
        key = (gamma, goal)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        self._tick()
        result = self._search(gamma, goal)
        self.cache[key] = result
        return result

    def _search(self, gamma: frozenset, goal: Formula) -> bool:
        gk = goal.kind
        if gk == TOP or goal in gamma or BOTTOM in gamma:
            return True
        if self.classically_refuted(gamma, goal):
            return False
        # invertible right rules
        if gk == AND:
            return self._prove(gamma, goal.left) and self._prove(gamma, goal.right)
        if gk == IMP:
            return self._prove(gamma | {goal.left}, goal.right)
        # invertible left rules
        for f in gamma:
            k = f.kind
            if k == TOP:
                return self._prove(gamma - {f}, goal)
            if k == AND:
                return self._prove((gamma - {f}) | {f.left, f.right}, goal)
            if k == OR:
                rest = gamma - {f}
                return self._prove(rest | {f.left}, goal) and self._prove(rest | {f.right}, goal)
            if k == IMP:
                a, b = f.left, f.right
                ak = a.kind
                if ak == TOP:
                    return self._prove((gamma - {f}) | {b}, goal)
                if ak == BOT:
                    return self._prove(gamma - {f}, goal)
                if ak == VAR and a in gamma:
                    return self._prove((gamma - {f}) | {b}, goal)
                if ak == AND:
                    return self._prove((gamma - {f}) | {Imp(a.left, Imp(a.right, b))}, goal)
                if ak == OR:
                    return self._prove((gamma - {f}) | {Imp(a.left, b), Imp(a.right, b)}, goal)
        # non-invertible steps: goal is an atom, ⊥ or a disjunction
        if gk == OR:
            if self._prove(gamma, goal.left) or self._prove(gamma, goal.right):
                return True
        for f in gamma:
            if f.kind == IMP and f.left.kind == IMP:
                c, d, b = f.left.left, f.left.right, f.right
                rest = gamma - {f}
                if self._prove(rest | {Imp(d, b), c}, d) and self._prove(rest | {b}, goal):
                    return True
        return False


_default = Prover()


def default_prover() -> Prover:
    return _default


def provable(f: Formula, hyps=(), prover: Prover | None = None) -> bool:
    return (prover or _default).provable(f, hyps)


# -- countermodels ------------------------------------------------------------


def _prime_extension(prover: Prover, base: frozenset, avoid: Formula, closure: list) -> frozenset:
    """A prime set ``w ⊇ base`` of formulas from ``closure``, closed under
    derivability within ``closure``, that does not derive ``avoid``."""
    w = set(base)
    while True:
        ws = frozenset(w)
        closed = {g for g in closure if g in w or prover.provable(g, ws)}
        if len(closed) != len(w):
            w = closed
            continue
        split = next((g for g in closure if g.kind == OR and g in w
                      and g.left not in w and g.right not in w), None)
        if split is None:
            return frozenset(w)
        if not prover.provable(avoid, ws | {split.left}):
            w.add(split.left)
        else:
            w.add(split.right)


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    point: object

    def refutes(self, f: Formula) -> bool:
        return not force(self.model, self.point, f)


def canonical_countermodel(f: Formula, prover: Prover | None = None) -> Countermodel:
    """A finite model refuting ``f`` at its root; ``f`` must be unprovable."""
    prover = prover or _default
    if prover.provable(f):
        raise ValueError("formula is provable; it has no countermodel")
    closure = sorted(subformulas(f) | {BOTTOM}, key=lambda g: (str(g), g.kind))
    implications = [g for g in closure if g.kind == IMP]
    root = _prime_extension(prover, frozenset(), f, closure)
    worlds = [root]
    seen = {root: 0}
    i = 0
    while i < len(worlds):
        w = worlds[i]
        i += 1
        for g in implications:
            if g not in w:
                child = _prime_extension(prover, w | {g.left}, g.right, closure)
                if child not in seen:
                    seen[child] = len(worlds)
                    worlds.append(child)
    up = []
    for w in worlds:
        up.append(sum(1 << k for k, w2 in enumerate(worlds) if w <= w2))
    frame = FinPoset(list(range(len(worlds))), up)
    val = {}
    for name in sorted(variables(f)):
        from .formula import Var

        v = Var(name)
        val[name] = sum(1 << k for k, w in enumerate(worlds) if v in w)
    cm = Countermodel(KripkeModel(frame, val), 0)
    if not cm.refutes(f):
        raise AssertionError(f"canonical model does not refute {f}")
    return cm


@dataclass(frozen=True)
class Decision:
    provable: bool
    countermodel: Countermodel | None = None
    method: str = "sequent"

    def __bool__(self):
        return self.provable


def decide(f: Formula, prover: Prover | None = None, quick_refute=None,
           fallback_size: int = 6, countermodel: bool = True) -> Decision:
    """Provable, or a countermodel.

    ``quick_refute`` is an optional list of Kripke models tried before proof
    search; a refutation there is already a certificate of unprovability.  If
    proof search runs out of budget, a bounded semantic search is tried before
    giving up with ResourceError.

    For unprovable formulas the countermodel is the first one found on rooted
    frames of at most ``fallback_size`` points, or else the canonical model
    over the subformulas.  ``countermodel=False`` skips its construction.
    """
    prover = prover or _default
    if quick_refute:
        from .kripke import truth_mask

        for M in quick_refute:
            mask = truth_mask(M, f)
            if mask != M.frame.full_mask:
                missing = M.frame.full_mask & ~mask
                i = (missing & -missing).bit_length() - 1
                return Decision(False, Countermodel(M, M.frame.elements[i]), "model")
    try:
        ok = prover.provable(f)
    except ResourceError:
        found = search_countermodel(f, fallback_size)
        if found is None:
            raise
        return Decision(False, Countermodel(*found), "search")
    if ok:
        return Decision(True)
    if not countermodel:
        return Decision(False)
    found = search_countermodel(f, fallback_size)
    if found is not None:
        return Decision(False, Countermodel(*found))
    return Decision(False, canonical_countermodel(f, prover), "sequent+canonical")


def equiv(f: Formula, g: Formula, prover: Prover | None = None) -> bool:
    prover = prover or _default
    return prover.provable(Imp(f, g)) and prover.provable(Imp(g, f))


def iff(f: Formula, g: Formula) -> Formula:
    return Iff(f, g)
