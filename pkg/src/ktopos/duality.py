"""Finite duality between distributive lattices and posets.

``spec`` sends a finite distributive lattice to its poset of lattice homs into
the two-element lattice; ``to_lattice`` sends the upset algebra of a poset back
to an explicit lattice.  Homs ``D -> 2`` are realized through join-irreducible
elements: for each join-irreducible ``j`` the map ``d ↦ [j <= d]`` is a hom, and
every hom arises this way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from . import catalog
from .errors import NotALatticeError, NotDistributiveError, NotOpenError
from .poset import FinPoset, MonotoneMap, UpsetAlgebra, _bits, is_open, popcount


class FinLattice:
    """A finite bounded lattice with explicit meet and join tables.

    Distributivity is decided by brute force over triples; a distributive
    lattice also carries its Heyting implication table.
    """

    def __init__(self, order: FinPoset):
        self.order = order
        self.elements = order.elements
        n = len(order)
        if n == 0:
            raise NotALatticeError("a lattice needs at least one element")
        up, down = order.up, order.down
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                lower = down[a] & down[b]
                glb = [c for c in _bits(lower) if down[c] == lower]
                upper = up[a] & up[b]
                lub = [c for c in _bits(upper) if up[c] == upper]
                if not glb or not lub:
                    x, y = self.elements[a], self.elements[b]
                    what = "meet" if not glb else "join"
                    raise NotALatticeError(f"{x!r} and {y!r} have no {what}")
                meet[a][b] = meet[b][a] = glb[0]
                join[a][b] = join[b][a] = lub[0]
        self.meet_table = tuple(map(tuple, meet))
        self.join_table = tuple(map(tuple, join))
        self.bottom = next(i for i in range(n) if up[i] == order.full_mask)
        self.top = next(i for i in range(n) if down[i] == order.full_mask)
        self.distributive = all(
            meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]]
            for a in range(n) for b in range(n) for c in range(n))
        self.implies_table = None
        if self.distributive:
            imp = [[0] * n for _ in range(n)]
            for a in range(n):
                for b in range(n):
                    # the largest c with c ∧ a <= b; exists in a finite distributive lattice
                    cands = [c for c in range(n) if (up[meet[c][a]] >> b) & 1]
                    best = cands[0]
                    for c in cands[1:]:
                        best = join[best][c]
                    imp[a][b] = best
            self.implies_table = tuple(map(tuple, imp))

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], pairs: Iterable = ()) -> "FinLattice":
        return cls(FinPoset.from_relation(elements, pairs))

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, FinLattice) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"FinLattice({list(self.elements)!r})"

    def index(self, label) -> int:
        return self.order.index(label)

    @property
    def is_heyting(self) -> bool:
        return self.implies_table is not None

    def leq(self, a, b) -> bool:
        return self.order.leq(a, b)

    def meet(self, a, b):
        return self.elements[self.meet_table[self.index(a)][self.index(b)]]

    def join(self, a, b):
        return self.elements[self.join_table[self.index(a)][self.index(b)]]

    def implies(self, a, b):
        if self.implies_table is None:
            raise NotDistributiveError("implication needs a distributive lattice")
        return self.elements[self.implies_table[self.index(a)][self.index(b)]]

    def join_irreducibles(self) -> list[int]:
        """Indices of elements that are not ⊥ and not the join of elements strictly below."""
        out = []
        for j in range(len(self)):
            if j == self.bottom:
                continue
            below = self.order.down[j] & ~(1 << j)
            acc = self.bottom
            for c in _bits(below):
                acc = self.join_table[acc][c]
            if acc != j:
                out.append(j)
        return out


def is_distributive(L: FinLattice) -> bool:
    return L.distributive


def two() -> FinLattice:
    return FinLattice.from_relation([0, 1], [(0, 1)])


def lattice_chain(n: int) -> FinLattice:
    return FinLattice(catalog.chain(n))


def boolean_lattice(k: int) -> FinLattice:
    """The lattice of subsets of ``range(k)``, labelled by frozensets."""
    subsets = [frozenset(i for i in range(k) if (m >> i) & 1) for m in range(1 << k)]
    return FinLattice(FinPoset.from_leq(subsets, lambda a, b: a <= b))


@dataclass(frozen=True)
class LatticeHom:
    domain: FinLattice
    codomain: FinLattice
    table: tuple  # domain index -> codomain index

    @classmethod
    def from_assignment(cls, A: FinLattice, B: FinLattice, assignment: dict) -> "LatticeHom":
        return cls(A, B, tuple(B.index(assignment[a]) for a in A.elements))

    def __call__(self, a):
        return self.codomain.elements[self.table[self.domain.index(a)]]

    @property
    def assignment(self) -> dict:
        return {a: self.codomain.elements[t] for a, t in zip(self.domain.elements, self.table)}

    def lattice_failure(self):
        """First failure of ⊥, ⊤, ∧ or ∨ preservation, or None."""
        A, B, h = self.domain, self.codomain, self.table
        if h[A.bottom] != B.bottom:
            return ("bottom",)
        if h[A.top] != B.top:
            return ("top",)
        n = len(A)
        for a in range(n):
            for b in range(a + 1, n):
                if h[A.meet_table[a][b]] != B.meet_table[h[a]][h[b]]:
                    return ("meet", A.elements[a], A.elements[b])
                if h[A.join_table[a][b]] != B.join_table[h[a]][h[b]]:
                    return ("join", A.elements[a], A.elements[b])
        return None

    def implication_failure(self):
        A, B, h = self.domain, self.codomain, self.table
        if A.implies_table is None or B.implies_table is None:
            raise NotDistributiveError("implication needs Heyting algebras")
        n = len(A)
        for a in range(n):
            for b in range(n):
                if h[A.implies_table[a][b]] != B.implies_table[h[a]][h[b]]:
                    return ("implies", A.elements[a], A.elements[b])
        return None

    def is_lattice_hom(self) -> bool:
        return self.lattice_failure() is None

    def is_heyting_hom(self) -> bool:
        return self.lattice_failure() is None and self.implication_failure() is None

    def then(self, g: "LatticeHom") -> "LatticeHom":
        """The composite ``g ∘ self``."""
        return LatticeHom(self.domain, g.codomain, tuple(g.table[t] for t in self.table))


# -- the two functors -------------------------------------------------------


def to_lattice(A: UpsetAlgebra) -> FinLattice:
    """The upset algebra as an explicit lattice; elements are frozensets of labels."""
    P = A.poset
    masks = list(A.masks)
    labels = [P.labels(m) for m in masks]
    up = []
    for m in masks:
        up.append(sum(1 << k for k, m2 in enumerate(masks) if m & ~m2 == 0))
    L = FinLattice(FinPoset(labels, up))
    # the residual table must agree with the upset implication
    pos = {m: k for k, m in enumerate(masks)}
    for a, ma in enumerate(masks):
        for b, mb in enumerate(masks):
            if L.implies_table[a][b] != pos[A.implies_mask(ma, mb)]:
                raise AssertionError("lattice residual disagrees with upset implication")
    return L


def _require_distributive(D: FinLattice):
    if not D.distributive:
        raise NotDistributiveError(f"{D!r} is not distributive")


def spec(D: FinLattice) -> FinPoset:
    """The poset of lattice homs ``D -> 2``, ordered pointwise.

    Each hom is labelled by the join-irreducible ``j`` whose principal filter it
    is; ``h_j <= h_k`` pointwise exactly when ``k <= j`` in ``D``.
    """
    _require_distributive(D)
    jis = D.join_irreducibles()
    labels = [D.elements[j] for j in jis]
    up = []
    for j in jis:
        up.append(sum(1 << t for t, k in enumerate(jis) if (D.order.up[k] >> j) & 1))
    return FinPoset(labels, up)


def spec_hom(D: FinLattice, j) -> LatticeHom:
    """The hom ``d ↦ [j <= d]`` named by the spectrum point ``j``."""
    T = two()
    ji = D.index(j)
    return LatticeHom(D, T, tuple(int((D.order.up[ji] >> d) & 1) for d in range(len(D))))


def counit(D: FinLattice) -> LatticeHom:
    """The comparison ``D -> U(spec D)``, ``d ↦ {j : j <= d}``; an iso for distributive ``D``."""
    S = spec(D)
    U = to_lattice(UpsetAlgebra(S))
    table = []
    for d in range(len(D)):
        members = frozenset(D.elements[j] for j in D.join_irreducibles()
                            if (D.order.up[j] >> d) & 1)
        table.append(U.index(members))
    return LatticeHom(D, U, tuple(table))


def counit_is_iso(D: FinLattice) -> bool:
    h = counit(D)
    return len(set(h.table)) == len(D) == len(h.codomain) and h.is_lattice_hom()


@dataclass
class RoundtripReport:
    ok: bool
    mapping: dict | None
    detail: str = ""


def roundtrip_poset(P: FinPoset) -> RoundtripReport:
    """The order isomorphism ``P -> spec(U P)``, ``p ↦ ↑p``, checked explicitly."""
    D = to_lattice(UpsetAlgebra(P))
    S = spec(D)
    mapping = {p: P.labels(P.up[P.index(p)]) for p in P.elements}
    if set(mapping.values()) != set(S.elements) or len(S) != len(P):
        return RoundtripReport(False, None, "principal upsets are not the spectrum points")
    for p in P.elements:
        for q in P.elements:
            if P.leq(p, q) != S.leq(mapping[p], mapping[q]):
                return RoundtripReport(False, None, f"order differs at {p!r}, {q!r}")
    return RoundtripReport(True, mapping)


# -- maps -------------------------------------------------------------------


def dual_monotone_map(f: MonotoneMap) -> LatticeHom:
    """``S ↦ f⁻¹S`` from ``U(codomain)`` to ``U(domain)``; a lattice hom for any monotone ``f``."""
    P, Q = f.domain, f.codomain
    UQ = to_lattice(UpsetAlgebra(Q))
    UP = to_lattice(UpsetAlgebra(P))
    table = []
    for S in UQ.elements:
        pre = f.preimage_mask(Q.mask_of(S))
        table.append(UP.index(P.labels(pre)))
    return LatticeHom(UQ, UP, tuple(table))


def dual_open_map(f: MonotoneMap) -> LatticeHom:
    """The Heyting hom dual to an open map; raises NotOpenError otherwise."""
    chk = is_open(f)
    if not chk:
        raise NotOpenError(f"map is not open: witness {chk.witness!r}", chk.witness)
    h = dual_monotone_map(f)
    bad = h.implication_failure()
    if bad is not None:
        raise AssertionError(f"dual of an open map fails {bad!r}")
    return h


def enumerate_homs(A: FinLattice, B: FinLattice, heyting: bool = False) -> list[LatticeHom]:
    """All lattice (or Heyting) homs ``A -> B``; ``A`` must be distributive.

    A hom out of a finite distributive lattice is fixed by its values on
    join-irreducibles.  Those are assigned bottom-up; each new value must be
    monotone over and meet-compatible with the ones already chosen.
    """
    _require_distributive(A)
    if heyting:
        _require_distributive(B)
    jis = sorted(A.join_irreducibles(), key=lambda j: popcount(A.order.down[j]))
    below = {d: [j for j in jis if (A.order.up[j] >> d) & 1] for d in range(len(A))}
    out = []
    value = {}

    def join_of(idx):
        acc = B.bottom
        for j in idx:
            acc = B.join_table[acc][value[j]]
        return acc

    def ok(j, b):
        for k, bk in value.items():
            if (A.order.up[k] >> j) & 1 and not (B.order.up[bk] >> b) & 1:
                return False
            if B.meet_table[b][bk] != join_of(below[A.meet_table[j][k]]):
                return False
        return True

    def rec(t):
        if t == len(jis):
            table = tuple(join_of(below[d]) for d in range(len(A)))
            h = LatticeHom(A, B, table)
            if h.is_lattice_hom() and (not heyting or h.implication_failure() is None):
                out.append(h)
            return
        j = jis[t]
        for b in range(len(B)):
            if ok(j, b):
                value[j] = b
                rec(t + 1)
                del value[j]

    rec(0)
    return out
