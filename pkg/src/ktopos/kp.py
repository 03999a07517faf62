"""The category of finite posets and open maps: colimits, images, covers."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import catalog
from .errors import (CodomainMismatchError, NotMonotoneError, NotOpenError,
                     ParallelPairError, SizeError)
from .poset import (
    FinPoset,
    MonotoneMap,
    OpenMap,
    _bits,
    identity,
    is_open,
    monoidal_pullback,
    open_maps,
    up_cone_embedding,
)

MAX_COCONE_BOUND = 5


def _require_open(f: MonotoneMap, name: str = "map") -> OpenMap:
    if isinstance(f, OpenMap):
        return f
    chk = is_open(f)
    if not chk:
        raise NotOpenError(f"{name} is not open: witness {chk.witness!r}", chk.witness)
    return OpenMap.of(f)


# -- coproducts -------------------------------------------------------------


def coproduct(posets: list[FinPoset]):
    """Disjoint union, labels ``(i, x)``; returns ``(P, injections)``."""
    elements, up, offsets = [], [], []
    off = 0
    for i, P in enumerate(posets):
        offsets.append(off)
        elements.extend((i, x) for x in P.elements)
        up.extend(u << off for u in P.up)
        off += len(P)
    S = FinPoset(elements, up)
    injections = [OpenMap(P, S, [offsets[i] + k for k in range(len(P))], check=False)
                  for i, P in enumerate(posets)]
    return S, injections


# -- coequalizers -----------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class Quotient:
    source: FinPoset
    classes: tuple  # tuple of index tuples into source.elements
    poset: FinPoset
    projection: OpenMap
    class_of: tuple = field(repr=False)  # source index -> class index

    def class_labels(self, k: int) -> tuple:
        return tuple(self.source.elements[i] for i in self.classes[k])

    def check_universal(self, f: MonotoneMap, g: MonotoneMap, bound: int = 4):
        """Bounded universal-property check; returns ``(ok, cocones_checked, witness)``."""
        return _check_coequalizer_universal(self, f, g, bound)


def stabilizing_chain(source: FinPoset, class_of, p: int, q: int) -> list[int]:
    """Ascending chain ``p <= q0 <= p1 <= q1 <= ...`` alternating between the
    classes of ``q`` and ``p``, for classes that are mutually below each other.

    Each step keeps the current element when it already lies in the wanted
    class, so the chain stops at the first repeat; an element reached twice in
    a row lies in both classes.  Raises AssertionError if a step has no witness.
    """
    targets = (class_of[q], class_of[p])
    chain = [p]
    for step in range(2 * len(source) + 2):
        x = chain[-1]
        want = targets[step % 2]
        if class_of[x] == want:
            y = x
        else:
            cands = [y for y in _bits(source.up[x]) if class_of[y] == want]
            if not cands:
                raise AssertionError("class order inequality has no witness")
            y = min(cands)
        if y == x and step > 0:
            return chain
        chain.append(y)
    raise AssertionError("ascending chain failed to stabilise")


def coequalizer(f: MonotoneMap, g: MonotoneMap, verify_bound: int = 0) -> Quotient:
    """Coequalizer of a parallel pair of open maps ``R -> P``.

    The equivalence is generated by ``f(r) ~ g(r)``; classes are ordered by
    ``[p] <= [q]`` iff some ``p' >= p`` is equivalent to ``q``.  The resulting
    relation is re-validated as a partial order, and the projection as open.
    With ``verify_bound > 0`` the universal property is checked against every
    open cocone into posets of at most that size.
    """
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ParallelPairError("f and g must share domain and codomain")
    f = _require_open(f, "f")
    g = _require_open(g, "g")
    P = f.codomain
    n = len(P)
    uf = _UnionFind(n)
    for a, b in zip(f.table, g.table):
        uf.union(a, b)
    roots = sorted({uf.find(i) for i in range(n)})
    cid = {r: k for k, r in enumerate(roots)}
    class_of = tuple(cid[uf.find(i)] for i in range(n))
    classes = tuple(tuple(i for i in range(n) if class_of[i] == k) for k in range(len(roots)))
    class_mask = [sum(1 << i for i in c) for c in classes]
    m = len(classes)
    up = []
    for k in range(m):
        # [p] <= [q] iff exists p' >= p with p' in class q (independent of p)
        rep = classes[k][0]
        mask = 0
        for k2 in range(m):
            if P.up[rep] & class_mask[k2]:
                mask |= 1 << k2
        # well-definedness: every representative sees the same classes
        for i in classes[k][1:]:
            other = sum(1 << k2 for k2 in range(m) if P.up[i] & class_mask[k2])
            if other != mask:
                raise AssertionError("class order depends on the representative")
        up.append(mask)
    # transitivity and antisymmetry are re-checked rather than assumed
    for k in range(m):
        for k2 in _bits(up[k]):
            if up[k2] & ~up[k]:
                raise AssertionError("class order is not transitive")
            if k2 != k and (up[k2] >> k) & 1:
                chain = stabilizing_chain(P, class_of, classes[k][0], classes[k2][0])
                raise AssertionError(f"class order is not antisymmetric (chain {chain})")
    labels = [tuple(P.elements[i] for i in c) for c in classes]
    Qt = FinPoset(labels, up)
    proj = OpenMap(P, Qt, list(class_of))  # raises if the projection were not open
    quotient = Quotient(P, classes, Qt, proj, class_of)
    if verify_bound:
        ok, _, witness = quotient.check_universal(f, g, verify_bound)
        if not ok:
            raise AssertionError(f"universal property fails: {witness!r}")
    return quotient


def _check_coequalizer_universal(q: Quotient, f, g, bound):
    if bound > MAX_COCONE_BOUND:
        raise SizeError(f"cocone bound {bound} exceeds limit {MAX_COCONE_BOUND}")
    P = q.source
    checked = 0
    for T in catalog.posets_up_to(bound):
        for k in open_maps(P, T):
            if any(k.table[a] != k.table[b] for a, b in zip(f.table, g.table)):
                continue
            checked += 1
            # the factorisation through a surjection is forced; test it exists
            table = [None] * len(q.classes)
            consistent = True
            for i, c in enumerate(q.class_of):
                if table[c] is None:
                    table[c] = k.table[i]
                elif table[c] != k.table[i]:
                    consistent = False
            if not consistent:
                return False, checked, ("not constant on classes", k)
            u = MonotoneMap(q.poset, T, table, check=False)
            try:
                u._check_monotone()
            except NotMonotoneError:
                return False, checked, ("factor not monotone", k)
            if not is_open(u):
                return False, checked, ("factor not open", k)
    return True, checked, None


# -- images -----------------------------------------------------------------


def image_factorize(f: MonotoneMap):
    """``f = e ∘ s`` with ``s`` surjective open and ``e`` an open embedding."""
    f = _require_open(f)
    Y = f.codomain
    img = f.image_mask(f.domain.full_mask)
    Z = Y.sub(img)
    pos = {Y.index(z): k for k, z in enumerate(Z.elements)}
    s = OpenMap(f.domain, Z, [pos[t] for t in f.table])
    e = OpenMap(Z, Y, [Y.index(z) for z in Z.elements])
    return s, e


# -- covers -----------------------------------------------------------------


@dataclass(frozen=True)
class CoverFamily:
    target: FinPoset
    maps: tuple

    def __post_init__(self):
        maps = tuple(_require_open(f) for f in self.maps)
        object.__setattr__(self, "maps", maps)
        for f in maps:
            if f.codomain != self.target:
                raise CodomainMismatchError("family member does not land in the target")

    @classmethod
    def rooted(cls, P: FinPoset) -> "CoverFamily":
        """The up-cone family ``{↑p ↪ P}``."""
        return cls(P, tuple(up_cone_embedding(P, p) for p in P.elements))


def is_cover(F: CoverFamily) -> bool:
    covered = 0
    for f in F.maps:
        covered |= f.image_mask(f.domain.full_mask)
    return covered == F.target.full_mask


@dataclass
class EffectiveEpiVerdict:
    effective: bool
    is_cover: bool
    bound: int
    targets_checked: int
    cocones_checked: int
    witness: object = None

    @property
    def agrees(self) -> bool:
        return self.effective == self.is_cover


def compatible_cocones(F: CoverFamily, T: FinPoset):
    """Families of open maps ``g_i: Q_i -> T`` agreeing on all pairwise pullbacks."""
    maps = F.maps
    candidates = [open_maps(f.domain, T) for f in maps]
    pulls = {}
    for i, fi in enumerate(maps):
        for j in range(i + 1):
            C, h, u = monoidal_pullback(fi, maps[j])
            # h: C -> Q_j, u: C -> Q_i
            pulls[(i, j)] = (h.table, u.table)
    chosen = []

    def compatible(i, gi):
        for j in range(i + 1):
            gj = gi if j == i else chosen[j]
            hj, ui = pulls[(i, j)]
            for a, b in zip(hj, ui):
                if gj.table[a] != gi.table[b]:
                    return False
        return True

    def rec(i):
        if i == len(maps):
            yield list(chosen)
            return
        for gi in candidates[i]:
            if compatible(i, gi):
                chosen.append(gi)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def check_effective_epi(F: CoverFamily, bound: int = 4) -> EffectiveEpiVerdict:
    """Test the colimit property of ``F`` against cocones into posets of size <= bound.

    Each compatible cocone must factor through exactly one open map out of the
    target.  Targets are enumerated up to isomorphism.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if bound > MAX_COCONE_BOUND:
        raise SizeError(f"bound {bound} exceeds limit {MAX_COCONE_BOUND}")
    P = F.target
    cover = is_cover(F)
    targets = catalog.posets_up_to(bound)
    checked = 0
    for T in targets:
        outs = open_maps(P, T)
        # index the restrictions of each candidate factor
        by_restriction = {}
        for g in outs:
            key = tuple(tuple(g.table[k] for k in f.table) for f in F.maps)
            by_restriction.setdefault(key, []).append(g)
        for cocone in compatible_cocones(F, T):
            checked += 1
            key = tuple(c.table for c in cocone)
            factors = by_restriction.get(key, [])
            if len(factors) != 1:
                kind = "no factorisation" if not factors else f"{len(factors)} factorisations"
                return EffectiveEpiVerdict(False, cover, bound, len(targets), checked,
                                           {"target": T, "cocone": cocone, "problem": kind})
    return EffectiveEpiVerdict(True, cover, bound, len(targets), checked)


# -- the non-exactness example ---------------------------------------------


def notexact_pair():
    """The parallel pair ``f, g: Σ -> Σ²`` identifying ``(0,1)`` with ``(1,0)``."""
    S = catalog.sigma()
    S2 = catalog.sigma_squared()
    f = OpenMap(S, S2, {0: (0, 1), 1: (1, 1)})
    g = OpenMap(S, S2, {0: (1, 0), 1: (1, 1)})
    return f, g


@dataclass
class NotExactReport:
    quotient: Quotient
    is_three_chain: bool
    projection_open: bool
    joint_image: frozenset
    missing: frozenset
    swap_equalized: bool
    swap_factors: bool
    universal_ok: bool

    @property
    def ok(self) -> bool:
        return (self.is_three_chain and self.projection_open and self.swap_equalized
                and not self.swap_factors and self.universal_ok
                and self.missing == frozenset({(0, 0)}))


def notexact_witness(bound: int = 4) -> NotExactReport:
    f, g = notexact_pair()
    S2 = f.codomain
    q = coequalizer(f, g)
    h = q.projection
    chain3 = catalog.chain(3)
    is_chain = catalog.isomorphism(q.poset, chain3) is not None
    universal_ok = q.check_universal(f, g, bound)[0]
    joint = f.image() | g.image()
    missing = frozenset(S2.elements) - joint
    u = identity(S2)
    v = OpenMap(S2, S2, {(0, 0): (0, 0), (0, 1): (1, 0), (1, 0): (0, 1), (1, 1): (1, 1)})
    equalized = u.then(h) == v.then(h)
    # u, v factor through Σ ⇉ Σ² only if their images avoid the bottom element
    factors = bool(u.image() <= joint and v.image() <= joint)
    return NotExactReport(q, is_chain, bool(is_open(h)), joint, missing, equalized,
                          factors, universal_ok)


def random_open_map(rng, max_size: int = 4):
    """A uniformly chosen open map between two random posets of size <= max_size."""
    while True:
        P = rng.choice(catalog.posets_up_to(max_size, include_empty=False))
        Q = rng.choice(catalog.posets_up_to(max_size, include_empty=False))
        maps = open_maps(P, Q)
        if maps:
            return rng.choice(maps)


__all__ = [
    "CoverFamily", "EffectiveEpiVerdict", "NotExactReport", "Quotient",
    "check_effective_epi", "coequalizer", "compatible_cocones", "coproduct",
    "image_factorize", "is_cover", "notexact_pair", "notexact_witness",
    "stabilizing_chain", "all_open_maps", "random_open_map"
]
