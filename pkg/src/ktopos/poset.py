"""Finite posets, upsets, monotone and open maps.

A :class:`FinPoset` stores its order as the full reflexive-transitive relation,
encoded as one bitmask per element (``up[i]`` has bit ``j`` set iff
``elements[i] <= elements[j]``).  Labels are arbitrary hashable values; JSON
lists are frozen into tuples on load.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from . import _kernels as K
from .errors import (
    CodomainMismatchError,
    CycleError,
    DuplicateLabelError,
    NotMonotoneError,
    NotOpenError,
    NotUpsetError,
    SizeError,
    UnknownElementError,
)

DEFAULT_UPSET_BOUND = 12


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinPoset:
    """An immutable finite partial order."""

    __slots__ = ("elements", "up", "down", "_index", "_hash")

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int]):
        # trusted constructor: ``up`` must already be a closed partial order
        self.elements = tuple(elements)
        self.up = tuple(up)
        index = {}
        for i, e in enumerate(self.elements):
            if e in index:
                raise DuplicateLabelError(f"duplicate label {e!r}")
            index[e] = i
        self._index = index
        down = [0] * len(self.up)
        for i, u in enumerate(self.up):
            for j in _bits(u):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._hash = hash((self.elements, self.up))

    # -- construction ------------------------------------------------------

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable],
                      pairs: Iterable[tuple[Hashable, Hashable]] = ()) -> "FinPoset":
        """Reflexive-transitive closure of ``pairs``; rejects cycles."""
        elements = list(elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise DuplicateLabelError(f"duplicate label {e!r}")
            index[e] = i
        n = len(elements)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            try:
                up[index[a]] |= 1 << index[b]
            except KeyError as exc:
                raise UnknownElementError(exc.args[0]) from None
        # Warshall on bitmasks
        for k in range(n):
            bk = 1 << k
            uk = up[k]
            for i in range(n):
                if up[i] & bk:
                    up[i] |= uk
        for i in range(n):
            for j in _bits(up[i]):
                if j != i and (up[j] >> i) & 1:
                    raise CycleError(
                        f"{elements[i]!r} <= {elements[j]!r} <= {elements[i]!r}")
        return cls(elements, up)

    @classmethod
    def from_leq(cls, elements: Sequence[Hashable], leq) -> "FinPoset":
        """Build from a predicate that is already a partial order."""
        elements = list(elements)
        up = []
        for a in elements:
            m = 0
            for j, b in enumerate(elements):
                if leq(a, b):
                    m |= 1 << j
            up.append(m)
        return cls.from_relation(elements, [
            (elements[i], elements[j]) for i, m in enumerate(up) for j in _bits(m)])

    # -- queries -----------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        return (isinstance(other, FinPoset) and self.elements == other.elements
                and self.up == other.up)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinPoset({list(self.elements)!r}, covers={self.covers()!r})"

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElementError(f"{label!r} is not an element of the poset") from None

    def leq(self, a, b) -> bool:
        return bool((self.up[self.index(a)] >> self.index(b)) & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    def mask_of(self, labels: Iterable) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def relation(self) -> list[tuple]:
        return [(self.elements[i], self.elements[j])
                for i, u in enumerate(self.up) for j in _bits(u)]

    def covers(self) -> list[tuple]:
        out = []
        for i, u in enumerate(self.up):
            strict = u & ~(1 << i)
            for j in _bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((self.elements[i], self.elements[j]))
        return out

    def is_upset_mask(self, mask: int) -> bool:
        return all(self.up[i] & mask == self.up[i] for i in _bits(mask))

    def upset(self, members: Iterable) -> "Upset":
        return Upset.of(self, members)

    def relabel(self, mapping: Mapping) -> "FinPoset":
        return FinPoset([mapping[e] for e in self.elements], self.up)

    def sub(self, mask: int) -> "FinPoset":
        """Induced subposet on the elements of ``mask``."""
        idx = list(_bits(mask))
        pos = {i: k for k, i in enumerate(idx)}
        up = []
        for i in idx:
            m = 0
            for j in _bits(self.up[i] & mask):
                m |= 1 << pos[j]
            up.append(m)
        return FinPoset([self.elements[i] for i in idx], up)


def validate_poset(elements: Iterable[Hashable],
                   pairs: Iterable[tuple[Hashable, Hashable]] = ()) -> FinPoset:
    return FinPoset.from_relation(elements, pairs)


# -- upsets -----------------------------------------------------------------


@dataclass(frozen=True)
class Upset:
    """An upward-closed subset of ``poset``, stored as a bitmask."""

    poset: FinPoset
    mask: int

    def __post_init__(self):
        if not self.poset.is_upset_mask(self.mask):
            raise NotUpsetError(f"{sorted(map(repr, self.members))} is not upward closed")

    @classmethod
    def of(cls, poset: FinPoset, members: Iterable) -> "Upset":
        return cls(poset, poset.mask_of(members))

    @property
    def members(self) -> frozenset:
        return self.poset.labels(self.mask)

    def sorted_members(self) -> list:
        return [self.poset.elements[i] for i in _bits(self.mask)]

    def __contains__(self, label):
        return bool((self.mask >> self.poset.index(label)) & 1)

    def __len__(self):
        return popcount(self.mask)

    def __le__(self, other: "Upset") -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"Upset({self.sorted_members()!r})"


def up_cone(P: FinPoset, p) -> Upset:
    return Upset(P, P.up[P.index(p)])


def max_elements(P: FinPoset) -> set:
    return {e for i, e in enumerate(P.elements) if P.up[i] == 1 << i}


def min_elements(P: FinPoset) -> set:
    return {e for i, e in enumerate(P.elements) if P.down[i] == 1 << i}


def is_rooted(P: FinPoset) -> bool:
    return len(P) > 0 and any(u == P.full_mask for u in P.up)


def root(P: FinPoset):
    for i, u in enumerate(P.up):
        if u == P.full_mask:
            return P.elements[i]
    return None


class UpsetAlgebra:
    """The finite Heyting algebra of all upsets of a poset."""

    def __init__(self, poset: FinPoset, bound: int = DEFAULT_UPSET_BOUND):
        if len(poset) > bound:
            raise SizeError(f"|P| = {len(poset)} exceeds the upset enumeration bound {bound}")
        self.poset = poset
        masks = sorted(K.enumerate_upsets(list(poset.up)), key=lambda m: (popcount(m), m))
        self.masks = tuple(masks)
        self.elements = tuple(Upset(poset, m) for m in masks)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def bottom(self) -> Upset:
        return Upset(self.poset, 0)

    @property
    def top(self) -> Upset:
        return Upset(self.poset, self.poset.full_mask)

    def _check(self, *xs):
        for x in xs:
            if x.poset != self.poset:
                raise CodomainMismatchError("upset belongs to a different poset")

    def meet(self, a: Upset, b: Upset) -> Upset:
        self._check(a, b)
        return Upset(self.poset, a.mask & b.mask)

    def join(self, a: Upset, b: Upset) -> Upset:
        self._check(a, b)
        return Upset(self.poset, a.mask | b.mask)

    def implies(self, a: Upset, b: Upset) -> Upset:
        self._check(a, b)
        return Upset(self.poset, K.upset_implies(self.poset.up, a.mask, b.mask))

    def neg(self, a: Upset) -> Upset:
        return self.implies(a, self.bottom)

    def leq(self, a: Upset, b: Upset) -> bool:
        return a <= b

    # mask-level shortcuts used by the exhaustive checks
    def implies_mask(self, a: int, b: int) -> int:
        return K.upset_implies(self.poset.up, a, b)


def upset_algebra(P: FinPoset, bound: int = DEFAULT_UPSET_BOUND) -> UpsetAlgebra:
    return UpsetAlgebra(P, bound)


def all_upset_masks(P: FinPoset) -> list[int]:
    return sorted(K.enumerate_upsets(list(P.up)), key=lambda m: (popcount(m), m))


# -- maps -------------------------------------------------------------------


class OpenCheck(NamedTuple):
    ok: bool
    witness: tuple | None  # (p, q) with f(p) <= q and no lift, when not ok

    def __bool__(self):
        return self.ok


class MonotoneMap:
    """A monotone map between finite posets."""

    __slots__ = ("domain", "codomain", "table", "_hash")

    def __init__(self, domain: FinPoset, codomain: FinPoset, assignment, *, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        if isinstance(assignment, Mapping):
            try:
                table = tuple(codomain.index(assignment[e]) for e in domain.elements)
            except KeyError as exc:
                raise UnknownElementError(f"assignment misses {exc.args[0]!r}") from None
        else:
            table = tuple(assignment)
            if len(table) != len(domain):
                raise ValueError("index table length differs from domain size")
        self.table = table
        self._hash = hash((domain, codomain, table))
        if check:
            self._check_monotone()

    def _check_monotone(self):
        dom, cod, t = self.domain, self.codomain, self.table
        for i, u in enumerate(dom.up):
            img = K.image_mask(t, u)
            if img & ~cod.up[t[i]]:
                j = next(j for j in _bits(u) if not (cod.up[t[i]] >> t[j]) & 1)
                raise NotMonotoneError(
                    f"{dom.elements[i]!r} <= {dom.elements[j]!r} but images are not ordered")

    @property
    def assignment(self) -> dict:
        return {e: self.codomain.elements[k] for e, k in zip(self.domain.elements, self.table)}

    def __call__(self, x):
        return self.codomain.elements[self.table[self.domain.index(x)]]

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.table == other.table)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({self.assignment!r})"

    def image_mask(self, mask: int) -> int:
        return K.image_mask(self.table, mask)

    def preimage_mask(self, mask: int) -> int:
        return K.preimage_mask(self.table, mask)

    def inverse_image(self, S: Upset) -> Upset:
        if S.poset != self.codomain:
            raise CodomainMismatchError("upset does not live on the codomain")
        return Upset(self.domain, self.preimage_mask(S.mask))

    def image(self) -> frozenset:
        return self.codomain.labels(self.image_mask(self.domain.full_mask))

    def is_surjective(self) -> bool:
        return self.image_mask(self.domain.full_mask) == self.codomain.full_mask

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """The composite ``g ∘ self``; open when both factors are."""
        if g.domain != self.codomain:
            raise CodomainMismatchError("maps are not composable")
        table = tuple(g.table[k] for k in self.table)
        cls = OpenMap if isinstance(self, OpenMap) and isinstance(g, OpenMap) else MonotoneMap
        return cls(self.domain, g.codomain, table, check=False)


class OpenMap(MonotoneMap):
    """A monotone map satisfying the lifting condition (a p-morphism)."""

    __slots__ = ()

    def __init__(self, domain, codomain, assignment, *, check: bool = True):
        super().__init__(domain, codomain, assignment, check=check)
        if check:
            w = K.open_witness(domain.up, self.table, codomain.up)
            if w is not None:
                p, q = domain.elements[w[0]], codomain.elements[w[1]]
                raise NotOpenError(f"f({p!r}) <= {q!r} has no lift above {p!r}", (p, q))

    @classmethod
    def of(cls, f: MonotoneMap) -> "OpenMap":
        return cls(f.domain, f.codomain, f.table)


def compose(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``g ∘ f``."""
    return f.then(g)


def is_open(f: MonotoneMap) -> OpenCheck:
    w = K.open_witness(f.domain.up, f.table, f.codomain.up)
    if w is None:
        return OpenCheck(True, None)
    return OpenCheck(False, (f.domain.elements[w[0]], f.codomain.elements[w[1]]))


def identity(P: FinPoset) -> OpenMap:
    return OpenMap(P, P, tuple(range(len(P))), check=False)


def point(P: FinPoset, p, one: FinPoset | None = None) -> MonotoneMap:
    """The map ``1 -> P`` selecting ``p``; open iff ``p`` is maximal."""
    from .catalog import one as _one

    one = one or _one()
    f = MonotoneMap(one, P, (P.index(p),))
    return OpenMap.of(f) if is_open(f) else f


def terminal_map(P: FinPoset) -> OpenMap:
    from .catalog import one

    T = one()
    return OpenMap(P, T, (0,) * len(P), check=False)


def monotone_maps(P: FinPoset, Q: FinPoset) -> list[MonotoneMap]:
    return [MonotoneMap(P, Q, t, check=False) for t in K.monotone_maps(P.up, Q.up)]


def open_maps(P: FinPoset, Q: FinPoset) -> list[OpenMap]:
    return [OpenMap(P, Q, t, check=False) for t in K.monotone_maps(P.up, Q.up, True)]


def inclusion(sub: FinPoset, P: FinPoset) -> MonotoneMap:
    f = MonotoneMap(sub, P, {e: e for e in sub.elements})
    return OpenMap.of(f) if is_open(f) else f


def up_cone_embedding(P: FinPoset, p) -> OpenMap:
    """The open embedding ``↑p ↪ P``."""
    sub = P.sub(P.up[P.index(p)])
    return OpenMap(sub, P, [P.index(e) for e in sub.elements], check=False)


# -- products and pullbacks -------------------------------------------------


def tensor(P: FinPoset, Q: FinPoset, bound: int = 64):
    """Componentwise product with its two projections (both open)."""
    n = len(P) * len(Q)
    if n > bound:
        raise SizeError(f"|P ⊗ Q| = {n} exceeds bound {bound}")
    elements = [(p, q) for p in P.elements for q in Q.elements]
    up = []
    m = len(Q)
    for i in range(len(P)):
        for j in range(len(Q)):
            mask = 0
            for i2 in _bits(P.up[i]):
                for j2 in _bits(Q.up[j]):
                    mask |= 1 << (i2 * m + j2)
            up.append(mask)
    PQ = FinPoset(elements, up)
    p1 = OpenMap(PQ, P, [k // m for k in range(n)], check=False)
    p2 = OpenMap(PQ, Q, [k % m for k in range(n)], check=False)
    return PQ, p1, p2


def monoidal_pullback(f: MonotoneMap, g: MonotoneMap):
    """Pullback of ``f: P -> Q`` (open) and ``g: R -> Q`` in posets.

    Returns ``(R ⊗_Q P, h, u)`` with ``h`` the open projection to ``R`` and
    ``u`` the projection to ``P``.
    """
    if f.codomain != g.codomain:
        raise CodomainMismatchError("f and g have different codomains")
    if not isinstance(f, OpenMap):
        chk = is_open(f)
        if not chk:
            raise NotOpenError("f must be open", chk.witness)
    P, R = f.domain, g.domain
    pairs = [(r, p) for r in range(len(R)) for p in range(len(P)) if g.table[r] == f.table[p]]
    pos = {rp: k for k, rp in enumerate(pairs)}
    up = []
    for r, p in pairs:
        mask = 0
        for r2 in _bits(R.up[r]):
            for p2 in _bits(P.up[p]):
                k = pos.get((r2, p2))
                if k is not None:
                    mask |= 1 << k
        up.append(mask)
    C = FinPoset([(R.elements[r], P.elements[p]) for r, p in pairs], up)
    h = OpenMap(C, R, [r for r, _ in pairs])
    u_table = [p for _, p in pairs]
    u = MonotoneMap(C, P, u_table, check=False)
    if is_open(u):
        u = OpenMap(C, P, u_table, check=False)
    return C, h, u


def is_heyting_morphism_preimage(f: MonotoneMap) -> bool:
    """Whether ``S ↦ f⁻¹S`` preserves ⊤, ⊥, ∧, ∨ and → on all upsets."""
    P, Q = f.codomain, f.domain
    UP = all_upset_masks(P)
    if f.preimage_mask(0) != 0 or f.preimage_mask(P.full_mask) != Q.full_mask:
        return False
    for a in UP:
        fa = f.preimage_mask(a)
        if not Q.is_upset_mask(fa):
            return False
        for b in UP:
            fb = f.preimage_mask(b)
            if f.preimage_mask(a & b) != fa & fb or f.preimage_mask(a | b) != fa | fb:
                return False
            if f.preimage_mask(K.upset_implies(P.up, a, b)) != K.upset_implies(Q.up, fa, fb):
                return False
    return True
