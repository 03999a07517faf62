"""Quantifiers along the projection ``Ω × P -> P`` and Artin glueing.

An upset of ``Ω × P`` is stored as a monotone family ``p ↦ fiber(p)`` of ladder
upsets, each either ``Top`` or finite, so everything here is exact.  The
exhaustive checks run over every monotone family whose fibers have depth at
most ``d`` (plus ``Top``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import catalog
from .duality import FinLattice, LatticeHom
from .errors import (BaseMismatchError, NotDistributiveError, NotMeetPreservingError,
                     NotMonotoneError, NotRootedError, SizeError)
from .ladder import EMPTY_RN, TOP_RN, RNElement, finite_upsets, rn_implies, rn_join, rn_meet
from .poset import FinPoset, Upset, all_upset_masks, is_rooted, tensor

DEFAULT_MAX_FAMILIES = 20_000
DEFAULT_GRID = ("one", "sigma", "chain3", "vee")


class ProductUpset:
    """An upset of ``Ω × P`` given by its fibers over ``P``."""

    __slots__ = ("base", "fibers", "_hash")

    def __init__(self, base: FinPoset, fibers, check: bool = True):
        self.base = base
        if isinstance(fibers, Mapping):
            fibers = [fibers[p] for p in base.elements]
        self.fibers = tuple(fibers)
        if len(self.fibers) != len(base):
            raise ValueError("need exactly one fiber per element of the base")
        if check:
            for i in range(len(base)):
                for j in _bits(base.up[i]):
                    if not self.fibers[i] <= self.fibers[j]:
                        p, q = base.elements[i], base.elements[j]
                        raise NotMonotoneError(f"fiber over {p!r} is not contained in the fiber over {q!r}")
        self._hash = hash((base, self.fibers))

    def fiber(self, p) -> RNElement:
        return self.fibers[self.base.index(p)]

    @property
    def assignment(self) -> dict:
        return dict(zip(self.base.elements, self.fibers))

    def __eq__(self, other):
        return (isinstance(other, ProductUpset) and self.base == other.base
                and self.fibers == other.fibers)

    def __hash__(self):
        return self._hash

    def __le__(self, other: "ProductUpset") -> bool:
        _same_base(self, other)
        return all(a <= b for a, b in zip(self.fibers, other.fibers))

    def __repr__(self):
        return f"ProductUpset({self.assignment!r})"

    @property
    def is_top(self) -> bool:
        return all(f.top for f in self.fibers)

    def __and__(self, other):
        return prod_meet(self, other)

    def __or__(self, other):
        return prod_join(self, other)

    def __rshift__(self, other):
        return prod_implies(self, other)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _same_base(S: ProductUpset, T: ProductUpset):
    if S.base != T.base:
        raise BaseMismatchError("product upsets live over different posets")


def top(P: FinPoset) -> ProductUpset:
    return ProductUpset(P, [TOP_RN] * len(P), check=False)


def bottom(P: FinPoset) -> ProductUpset:
    return ProductUpset(P, [EMPTY_RN] * len(P), check=False)


def pi_inverse(T: Upset) -> ProductUpset:
    P = T.poset
    return ProductUpset(P, [TOP_RN if (T.mask >> i) & 1 else EMPTY_RN for i in range(len(P))],
                        check=False)


def exists_pi(S: ProductUpset) -> Upset:
    return Upset(S.base, sum(1 << i for i, f in enumerate(S.fibers) if f.top or f.nodes))


def forall_pi(S: ProductUpset) -> Upset:
    return Upset(S.base, sum(1 << i for i, f in enumerate(S.fibers) if f.top))


def prod_meet(S: ProductUpset, T: ProductUpset) -> ProductUpset:
    _same_base(S, T)
    return ProductUpset(S.base, [rn_meet(a, b) for a, b in zip(S.fibers, T.fibers)], check=False)


def prod_join(S: ProductUpset, T: ProductUpset) -> ProductUpset:
    _same_base(S, T)
    return ProductUpset(S.base, [rn_join(a, b) for a, b in zip(S.fibers, T.fibers)], check=False)


def prod_implies(S: ProductUpset, T: ProductUpset) -> ProductUpset:
    """Fiber over ``p`` is the meet over ``p' >= p`` of the fiberwise implications."""
    _same_base(S, T)
    P = S.base
    local = [rn_implies(a, b) for a, b in zip(S.fibers, T.fibers)]
    out = []
    for i in range(len(P)):
        acc = TOP_RN
        for j in _bits(P.up[i]):
            acc = rn_meet(acc, local[j])
        out.append(acc)
    return ProductUpset(P, out, check=False)


def prod_ops(S: ProductUpset, T: ProductUpset) -> dict:
    return {"meet": prod_meet(S, T), "join": prod_join(S, T), "implies": prod_implies(S, T)}


# -- enumeration --------------------------------------------------------------


def fiber_values(depth: int) -> list[RNElement]:
    """Finite ladder upsets of depth at most ``depth``, then ``Top``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return (finite_upsets(depth) if depth else [EMPTY_RN]) + [TOP_RN]


def product_upsets(P: FinPoset, depth: int, max_families: int = DEFAULT_MAX_FAMILIES) -> list:
    """Every monotone family over ``P`` with fibers among ``fiber_values(depth)``."""
    values = fiber_values(depth)
    n = len(P)
    # lower elements first, so each new element only looks at assigned ones
    order = sorted(range(n), key=lambda i: -bin(P.up[i]).count("1"))
    below = {i: [j for j in range(n) if j != i and (P.up[j] >> i) & 1] for i in range(n)}
    out = []
    current = [None] * n

    def rec(k):
        if k == n:
            if len(out) >= max_families:
                raise SizeError(f"more than {max_families} product upsets over P at depth {depth}")
            out.append(ProductUpset(P, list(current), check=False))
            return
        i = order[k]
        for v in values:
            if all(current[j] <= v for j in below[i]):
                current[i] = v
                rec(k + 1)
        current[i] = None

    rec(0)
    return out


def grid_posets(names=DEFAULT_GRID) -> list:
    return [(name, catalog.preset(name)) for name in names]


# -- verdicts -----------------------------------------------------------------


@dataclass
class QuantVerdict:
    check: str
    ok: bool
    cases: int
    poset: FinPoset | None = None
    depth: int | None = None
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def frobenius_check(P: FinPoset, depth: int = 2,
                    max_families: int = DEFAULT_MAX_FAMILIES) -> QuantVerdict:
    """Compare ``∃(π⁻¹φ → ψ)`` with ``φ → ∃ψ`` for every upset ``φ`` and family ``ψ``.

    The whole grid is scanned; ``counterexample`` is the first failing cell
    and ``details["failures"]`` counts them all.
    """
    families = product_upsets(P, depth, max_families)
    cases = failures = 0
    first = None
    for mask in all_upset_masks(P):
        phi = Upset(P, mask)
        lifted = pi_inverse(phi)
        for psi in families:
            cases += 1
            lhs = exists_pi(prod_implies(lifted, psi))
            rhs = _implies(P, mask, exists_pi(psi).mask)
            if lhs.mask != rhs:
                failures += 1
                if first is None:
                    first = {"phi": phi, "psi": psi, "lhs": lhs, "rhs": Upset(P, rhs)}
    return QuantVerdict("frobenius", failures == 0, cases, P, depth, first,
                        {"failures": failures})


def _implies(P: FinPoset, a: int, b: int) -> int:
    from . import _kernels as K

    return K.upset_implies(P.up, a, b)


def galois_check(P: FinPoset, depth: int = 2,
                 max_families: int = DEFAULT_MAX_FAMILIES) -> QuantVerdict:
    """Both adjunctions and the two retractions, exhaustively."""
    families = product_upsets(P, depth, max_families)
    cases = 0
    uppers = [Upset(P, m) for m in all_upset_masks(P)]
    for T in uppers:
        lifted = pi_inverse(T)
        cases += 1
        if exists_pi(lifted) != T or forall_pi(lifted) != T:
            return QuantVerdict("galois", False, cases, P, depth, {"law": "retraction", "T": T})
        for S in families:
            cases += 1
            if (S <= lifted) != (exists_pi(S) <= T):
                return QuantVerdict("galois", False, cases, P, depth,
                                    {"law": "exists", "S": S, "T": T})
            if (lifted <= S) != (T <= forall_pi(S)):
                return QuantVerdict("galois", False, cases, P, depth,
                                    {"law": "forall", "S": S, "T": T})
    return QuantVerdict("galois", True, cases, P, depth)


def residuation_check(P: FinPoset, depth: int = 1,
                      max_families: int = 200) -> QuantVerdict:
    """``V <= (S -> T)`` iff ``V ∧ S <= T`` over all triples of families."""
    families = product_upsets(P, depth, max_families)
    cases = 0
    for S in families:
        for T in families:
            imp = prod_implies(S, T)
            for V in families:
                cases += 1
                if (V <= imp) != (prod_meet(V, S) <= T):
                    return QuantVerdict("residuation", False, cases, P, depth,
                                        {"S": S, "T": T, "V": V})
    return QuantVerdict("residuation", True, cases, P, depth)


def join_preservation_check(P: FinPoset, depth: int = 2,
                            max_families: int = DEFAULT_MAX_FAMILIES) -> QuantVerdict:
    """``∀`` preserves ``⊥`` and binary joins on every pair of families."""
    families = product_upsets(P, depth, max_families)
    cases = 1
    if forall_pi(bottom(P)).mask != 0:
        return QuantVerdict("joins", False, cases, P, depth, {"law": "bottom"})
    for k, S in enumerate(families):
        fS = forall_pi(S).mask
        for T in families[k:]:
            cases += 1
            lhs = forall_pi(prod_join(S, T)).mask
            if lhs != fS | forall_pi(T).mask:
                return QuantVerdict("joins", False, cases, P, depth, {
                    "S": S, "T": T, "lhs": Upset(P, lhs),
                    "rhs": Upset(P, fS | forall_pi(T).mask)})
    return QuantVerdict("joins", True, cases, P, depth)


def control_fiber_check(Q: FinPoset | None = None, P: FinPoset | None = None) -> QuantVerdict:
    """Search for a failure of join preservation along ``Q ⊗ P -> P``.

    ``ok`` is True when a counterexample is found, which is the expected
    outcome for ``Q`` the two-element antichain.
    """
    Q = Q if Q is not None else catalog.antichain(2)
    P = P if P is not None else catalog.one()
    QP, _, proj = tensor(Q, P)
    # π⁻¹(↑p) as masks of Q ⊗ P
    cones = [proj.preimage_mask(P.up[i]) for i in range(len(P))]

    def forall(mask):
        return sum(1 << i for i, c in enumerate(cones) if c & ~mask == 0)

    masks = all_upset_masks(QP)
    cases = 0
    for k, s in enumerate(masks):
        for t in masks[k:]:
            cases += 1
            lhs, rhs = forall(s | t), forall(s) | forall(t)
            if lhs != rhs:
                return QuantVerdict("joins-control", True, cases, P, None, {
                    "fiber": Q, "S": Upset(QP, s), "T": Upset(QP, t),
                    "lhs": Upset(P, lhs), "rhs": Upset(P, rhs)})
    return QuantVerdict("joins-control", False, cases, P, None, {"fiber": Q})


def locality_check(P: FinPoset, depth: int = 2, allow_unrooted: bool = False,
                   max_families: int = DEFAULT_MAX_FAMILIES) -> QuantVerdict:
    """Whether ``a ∨ b = ⊤`` forces ``a = ⊤`` or ``b = ⊤``.

    Checked for ladder fibers, for ``U(P)`` and for all pairs of product
    upsets.  Non-rooted posets are rejected unless ``allow_unrooted``, in
    which case the check simply reports the failure.
    """
    if not allow_unrooted and not is_rooted(P):
        raise NotRootedError("locality is only guaranteed over a rooted poset")
    values = fiber_values(depth)
    cases = 0
    for i, a in enumerate(values):
        for b in values[i:]:
            cases += 1
            if rn_join(a, b).top and not (a.top or b.top):
                return QuantVerdict("local", False, cases, P, depth,
                                    {"level": "fiber", "a": a, "b": b})
    full = P.full_mask
    masks = all_upset_masks(P)
    if len(masks) < 2:
        return QuantVerdict("local", False, cases, P, depth, {"level": "algebra", "trivial": True})
    for i, a in enumerate(masks):
        for b in masks[i:]:
            cases += 1
            if a | b == full and a != full and b != full:
                return QuantVerdict("local", False, cases, P, depth,
                                    {"level": "algebra", "a": Upset(P, a), "b": Upset(P, b)})
    families = product_upsets(P, depth, max_families)
    for i, S in enumerate(families):
        for T in families[i:]:
            cases += 1
            if prod_join(S, T).is_top and not (S.is_top or T.is_top):
                return QuantVerdict("local", False, cases, P, depth,
                                    {"level": "product", "S": S, "T": T})
    return QuantVerdict("local", True, cases, P, depth)


# -- Artin glueing ------------------------------------------------------------


def is_local(L: FinLattice) -> bool:
    """Nontrivial, and ``a ∨ b = ⊤`` only when one of them is ``⊤``."""
    if len(L) < 2:
        return False
    n, t = len(L), L.top
    return all(L.join_table[a][b] != t or a == t or b == t for a in range(n) for b in range(n))


def meet_failure(f: LatticeHom):
    """First failure of ``f`` to preserve ``⊤`` or binary meets, or None."""
    A, B, h = f.domain, f.codomain, f.table
    if h[A.top] != B.top:
        return ("top",)
    n = len(A)
    for a in range(n):
        for b in range(a + 1, n):
            if h[A.meet_table[a][b]] != B.meet_table[h[a]][h[b]]:
                return ("meet", A.elements[a], A.elements[b])
    return None


@dataclass
class GluedAlgebra:
    """Pairs ``(b, a)`` with ``a <= f(b)``, ordered componentwise."""

    f: LatticeHom
    lattice: FinLattice
    r: LatticeHom  # (b, a) ↦ b
    t: LatticeHom  # (b, a) ↦ a, only meet-preserving in general
    axioms_ok: bool
    implication_ok: bool

    def implies(self, x, y):
        """The twisted implication ``(b → b', (a → a') ∧ f(b → b'))``."""
        (b, a), (b2, a2) = x, y
        B, A = self.f.domain, self.f.codomain
        bb = B.implies(b, b2)
        return bb, A.meet(A.implies(a, a2), self.f(bb))

    @property
    def is_local(self) -> bool:
        return is_local(self.lattice)


def glue(f: LatticeHom) -> GluedAlgebra:
    """Glue along a ``⊤``- and meet-preserving map ``f: B -> A`` of finite Heyting algebras."""
    B, A = f.domain, f.codomain
    if not (A.is_heyting and B.is_heyting):
        raise NotDistributiveError("both algebras must be Heyting")
    bad = meet_failure(f)
    if bad is not None:
        raise NotMeetPreservingError(f"f does not preserve {bad[0]}: {bad[1:]!r}")
    pairs = [(b, a) for b in B.elements for a in A.elements if A.leq(a, f(b))]
    L = FinLattice(FinPoset.from_leq(pairs, lambda x, y: B.leq(x[0], y[0]) and A.leq(x[1], y[1])))
    G = GluedAlgebra(f, L, None, None, False, False)
    # meets and joins are pointwise; the implication is the twisted formula
    axioms = L.distributive
    if axioms:
        for x in pairs:
            for y in pairs:
                if L.meet(x, y) != (B.meet(x[0], y[0]), A.meet(x[1], y[1])):
                    axioms = False
                elif L.join(x, y) != (B.join(x[0], y[0]), A.join(x[1], y[1])):
                    axioms = False
                if not axioms:
                    break
            if not axioms:
                break
    implication = axioms and all(L.implies(x, y) == G.implies(x, y) for x in pairs for y in pairs)
    G.r = LatticeHom(L, B, tuple(B.index(x[0]) for x in L.elements))
    G.t = LatticeHom(L, A, tuple(A.index(x[1]) for x in L.elements))
    G.axioms_ok = axioms and heyting_axioms_failure(L) is None
    G.implication_ok = implication
    return G


def heyting_axioms_failure(L: FinLattice):
    """Brute-force check of the lattice and residuation laws; first failure or None."""
    if L.implies_table is None:
        return ("distributive",)
    n = len(L)
    M, J, I = L.meet_table, L.join_table, L.implies_table
    up = L.order.up

    def leq(a, b):
        return (up[a] >> b) & 1

    for a in range(n):
        if M[a][L.top] != a or J[a][L.bottom] != a:
            return ("bounds", L.elements[a])
        for b in range(n):
            if M[a][b] != M[b][a] or J[a][b] != J[b][a] or M[a][J[a][b]] != a:
                return ("lattice", L.elements[a], L.elements[b])
            for c in range(n):
                if bool(leq(M[c][a], b)) != bool(leq(c, I[a][b])):
                    return ("residuation", L.elements[a], L.elements[b], L.elements[c])
    return None


def upset_lattice(P: FinPoset) -> FinLattice:
    from .duality import to_lattice
    from .poset import UpsetAlgebra

    return to_lattice(UpsetAlgebra(P))


def forall_along(proj) -> LatticeHom:
    """``∀`` along an open map ``π: R -> P`` as a map ``U(R) -> U(P)``."""
    R, P = proj.domain, proj.codomain
    UR, UP = upset_lattice(R), upset_lattice(P)
    cones = [proj.preimage_mask(P.up[i]) for i in range(len(P))]
    table = []
    for S in UR.elements:
        mask = R.mask_of(S)
        table.append(UP.index(P.labels(sum(1 << i for i, c in enumerate(cones) if c & ~mask == 0))))
    return LatticeHom(UR, UP, tuple(table))


def locality_shadow() -> GluedAlgebra:
    """Glue ``U(Σ ⊗ Σ)`` onto ``U(Σ)`` along ``∀`` for the first projection."""
    S = catalog.sigma()
    SS, p1, _ = tensor(S, S)
    return glue(forall_along(p1))
