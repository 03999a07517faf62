"""Model sets of finitely presented Heyting algebras over finite frames.

A presentation ``⟨x, y | r1, r2⟩`` has, over a frame ``P``, the set of
valuations in upsets of ``P`` forcing every relation everywhere.  These sets
are functorial in open maps by inverse image.  The module also checks the
sheaf condition for jointly surjective covers, compares free distributive
lattices with poset nerves, and searches for the zigzags that identify any
two truth values in the colimit over rooted frames.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from . import catalog
from .duality import FinLattice, spec
from .errors import NotCoverError, NotOpenError, NotRootedError, SearchExhaustedError, SizeError
from .kp import CoverFamily, is_cover
from .logic.formula import BOTTOM, TRUE, And, Formula, Iff, Or, Var, variables
from .logic.kripke import KripkeModel, truth_mask
from .logic.parser import parse
from .poset import (FinPoset, MonotoneMap, OpenMap, all_upset_masks, is_open, is_rooted,
                    max_elements, monoidal_pullback, monotone_maps, open_maps)

DEFAULT_MODEL_BOUND = 2_000_000


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(parse(r) if isinstance(r, str) else r for r in self.relations)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator")
        for r in rels:
            extra = variables(r) - set(gens)
            if extra:
                raise ValueError(f"relation {r} uses undeclared variables {sorted(extra)}")

    @classmethod
    def of(cls, generators: Iterable[str], relations: Iterable = ()) -> "Presentation":
        return cls(tuple(generators), tuple(relations))

    def __str__(self):
        return f"⟨{', '.join(self.generators)} | {', '.join(map(str, self.relations))}⟩"


@dataclass(frozen=True)
class NerveStage:
    presentation: Presentation
    frame: FinPoset
    models: tuple  # of KripkeModel

    def __len__(self):
        return len(self.models)


def _satisfies(M: KripkeModel, rel: Formula) -> bool:
    return truth_mask(M, rel) == M.frame.full_mask


def models(A: Presentation, P: FinPoset, bound: int = DEFAULT_MODEL_BOUND) -> NerveStage:
    """All valuations of the generators in upsets of ``P`` validating every relation.

    Generators are assigned in order; each relation is checked as soon as its
    last generator has a value.
    """
    ups = all_upset_masks(P)
    gens = A.generators
    if len(ups) ** len(gens) > bound:
        raise SizeError(f"{len(ups)}^{len(gens)} valuations exceed bound {bound}")
    pos = {g: i for i, g in enumerate(gens)}
    due = [[] for _ in gens]
    closed = []
    for r in A.relations:
        vs = variables(r)
        if vs:
            due[max(pos[v] for v in vs)].append(r)
        else:
            closed.append(r)
    empty = KripkeModel(P, {})
    if any(not _satisfies(empty, r) for r in closed):
        return NerveStage(A, P, ())
    out = []
    val = {}

    def rec(i):
        if i == len(gens):
            out.append(KripkeModel(P, dict(val)))
            return
        for m in ups:
            val[gens[i]] = m
            if due[i]:
                M = KripkeModel(P, val)
                if not all(_satisfies(M, r) for r in due[i]):
                    continue
            rec(i + 1)
        del val[gens[i]]

    rec(0)
    return NerveStage(A, P, tuple(out))


def restrict_model(M: KripkeModel, f: MonotoneMap) -> KripkeModel:
    """Pull a model on ``f.codomain`` back to ``f.domain`` by inverse image."""
    return KripkeModel(f.domain, {k: f.preimage_mask(v) for k, v in M.valuation.items()})


def restrict(A: Presentation, f: MonotoneMap):
    """The restriction ``models(A, P) -> models(A, Q)`` along an open ``f: Q -> P``."""
    chk = is_open(f)
    if not chk:
        raise NotOpenError(f"map is not open: witness {chk.witness!r}", chk.witness)

    def apply(M: KripkeModel) -> KripkeModel:
        if M.frame != f.codomain:
            raise ValueError("model lives on a different frame")
        out = restrict_model(M, f)
        for r in A.relations:
            if not _satisfies(out, r):
                raise AssertionError(f"restriction breaks relation {r}")
        return out

    return apply


def poset_nerve(L: FinPoset, P: FinPoset) -> list[MonotoneMap]:
    """All monotone maps ``P -> L``."""
    return monotone_maps(P, L)


def omega(P: FinPoset) -> NerveStage:
    """Models of the free algebra on one generator: the truth values at stage ``P``."""
    return models(Presentation(("x",)), P)


# -- free distributive lattices ----------------------------------------------


def table_presentation(D: FinLattice) -> Presentation:
    """Generators ``d0, d1, ...`` for the elements of ``D`` with its full
    meet/join table and bounds as relations."""
    n = len(D)
    g = [Var(f"d{i}") for i in range(n)]
    rels = [Iff(g[D.bottom], BOTTOM), Iff(g[D.top], TRUE)]
    for a in range(n):
        for b in range(a + 1, n):
            rels.append(Iff(g[D.meet_table[a][b]], And(g[a], g[b])))
            rels.append(Iff(g[D.join_table[a][b]], Or(g[a], g[b])))
    return Presentation(tuple(f"d{i}" for i in range(n)), tuple(rels))


@dataclass
class FreeNerveVerdict:
    ok: bool
    models: int
    maps: int
    witness: object = None


def free_nerve_check(D: FinLattice, P: FinPoset) -> FreeNerveVerdict:
    """Compare models of ``D``'s table presentation on ``P`` with monotone maps ``P -> spec D``.

    A model ``v`` is sent to ``p ↦ (d ↦ [p ∈ v(d)])``, a hom ``D -> 2`` and hence
    a point of the spectrum; the check confirms this is a bijection.
    """
    A = table_presentation(D)
    stage = models(A, P)
    S = spec(D)
    maps = poset_nerve(S, P)
    targets = {m.table for m in maps}
    images = set()
    for M in stage.models:
        table = []
        for i in range(len(P)):
            filt = [d for d in range(len(D)) if (M.valuation[f"d{d}"] >> i) & 1]
            # the prime filter is generated by its least element
            least = [d for d in filt if all((D.order.up[d] >> e) & 1 for e in filt)]
            if len(least) != 1 or D.elements[least[0]] not in S:
                return FreeNerveVerdict(False, len(stage), len(maps), ("not a spectrum point", M))
            table.append(S.index(D.elements[least[0]]))
        table = tuple(table)
        if table not in targets:
            return FreeNerveVerdict(False, len(stage), len(maps), ("not monotone", M))
        images.add(table)
    ok = len(images) == len(stage) == len(maps)
    return FreeNerveVerdict(ok, len(stage), len(maps), None if ok else "not a bijection")


# -- sheaf condition --------------------------------------------------------


@dataclass
class SheafVerdict:
    ok: bool
    models: int
    families: int
    witness: object = None


def compatible_families(A: Presentation, F: CoverFamily):
    """Tuples of models over the cover members agreeing on all pairwise pullbacks."""
    maps = F.maps
    stages = [models(A, f.domain).models for f in maps]
    pulls = {}
    for i, fi in enumerate(maps):
        for j in range(i + 1):
            C, h, u = monoidal_pullback(fi, maps[j])  # h: C -> Q_j, u: C -> Q_i
            pulls[(i, j)] = (h, u)
    chosen = []

    def compatible(i, Mi):
        for j in range(i + 1):
            h, u = pulls[(i, j)]
            Mj = Mi if j == i else chosen[j]
            if restrict_model(Mi, u) != restrict_model(Mj, h):
                return False
        return True

    def rec(i):
        if i == len(maps):
            yield tuple(chosen)
            return
        for Mi in stages[i]:
            if compatible(i, Mi):
                chosen.append(Mi)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def sheaf_check(A: Presentation, P: FinPoset, F: CoverFamily) -> SheafVerdict:
    """Each compatible family over the cover glues to exactly one model on ``P``."""
    if F.target != P:
        raise ValueError("cover has a different target")
    if not is_cover(F):
        raise NotCoverError("family is not jointly surjective")
    glued = {}
    stage = models(A, P).models
    for M in stage:
        fam = tuple(restrict_model(M, f) for f in F.maps)
        if fam in glued:
            return SheafVerdict(False, len(stage), -1, ("two models restrict alike", glued[fam], M))
        glued[fam] = M
    count = 0
    for fam in compatible_families(A, F):
        count += 1
        if fam not in glued:
            return SheafVerdict(False, len(stage), count, ("family does not glue", fam))
    return SheafVerdict(count == len(glued), len(stage), count)


# -- cohesion at a stage -----------------------------------------------------


def cohesion_stage(kind: str, data, P: FinPoset | None = None):
    """Γ: models at the one-point frame; Δ: the set itself; ∇: functions on maximal points."""
    kind = {"gamma": "Γ", "delta": "Δ", "nabla": "∇"}.get(kind, kind)
    if kind == "Γ":
        return list(models(data, catalog.one()).models)
    if kind == "Δ":
        return sorted(set(data), key=repr)
    if kind == "∇":
        if P is None:
            raise ValueError("∇ needs a frame")
        tops = sorted(max_elements(P), key=repr)
        values = sorted(set(data), key=repr)
        out = [{}]
        for t in tops:
            out = [dict(f, **{repr(t): v}) if not isinstance(t, str) else {**f, t: v}
                   for f in out for v in values]
        return out
    raise ValueError(f"unknown cohesion functor {kind!r}")


# -- connecting truth values -------------------------------------------------


@dataclass
class ZigzagStep:
    """``map`` goes from ``lower`` to ``upper`` frame; the lower value is the
    inverse image of the upper one.  ``forward`` says whether the path walks
    from the upper node to the lower one."""

    map: OpenMap
    upper: tuple  # (frame, upset mask)
    lower: tuple
    forward: bool


@dataclass
class Zigzag:
    start: tuple
    end: tuple
    steps: list = field(default_factory=list)
    stage_bound: int = 0
    frames_searched: int = 0

    def __len__(self):
        return len(self.steps)


def _canonical_frames(bound: int) -> list[FinPoset]:
    return catalog.rooted_posets_up_to(bound)


@lru_cache(maxsize=4)
def _zigzag_graph(bound: int) -> dict:
    """Adjacency ``node -> [(neighbour, map, node is the upper end)]``."""
    frames = _canonical_frames(bound)
    adj: dict = {}
    for ti, T in enumerate(frames):
        for ri, R in enumerate(frames):
            for f in open_maps(R, T):
                for U in all_upset_masks(T):
                    hi, lo = (ti, U), (ri, f.preimage_mask(U))
                    if hi == lo:
                        continue
                    adj.setdefault(hi, []).append((lo, f, True))
                    adj.setdefault(lo, []).append((hi, f, False))
    return adj


def _to_canonical(P: FinPoset, mask: int, frames):
    for k, T in enumerate(frames):
        iso = catalog.isomorphism(P, T)
        if iso is not None:
            return k, T.mask_of(iso[x] for x in P.labels(mask)), iso
    raise AssertionError("frame not found among canonical frames")


def pi_connect(P: FinPoset, a: int, Q: FinPoset, b: int, stage_bound: int = 4) -> Zigzag:
    """A zigzag of inverse-image steps joining upset ``a`` of ``P`` to ``b`` of ``Q``.

    Nodes are (frame, upset) over rooted frames of at most ``stage_bound``
    points up to isomorphism; an open map ``f: R -> T`` links ``(T, U)`` with
    ``(R, f⁻¹U)``.  Breadth-first search returns a shortest zigzag.
    """
    for X in (P, Q):
        if not is_rooted(X):
            raise NotRootedError("frames must be rooted")
    if stage_bound < max(len(P), len(Q)):
        raise ValueError("stage_bound must be at least the frame sizes")
    if not P.is_upset_mask(a) or not Q.is_upset_mask(b):
        raise ValueError("values must be upsets")
    frames = _canonical_frames(stage_bound)
    s = _to_canonical(P, a, frames)[:2]
    t = _to_canonical(Q, b, frames)[:2]
    result = Zigzag((P, a), (Q, b), [], stage_bound, len(frames))
    if s == t:
        return result
    adj = _zigzag_graph(stage_bound)
    prev = {s: None}
    queue = deque([s])
    while queue:
        node = queue.popleft()
        if node == t:
            break
        for nxt, f, down in adj.get(node, ()):
            if nxt not in prev:
                prev[nxt] = (node, f, down)
                queue.append(nxt)
    if t not in prev:
        raise SearchExhaustedError(f"no zigzag within rooted frames of size <= {stage_bound}")
    path = []
    node = t
    while prev[node] is not None:
        before, f, down = prev[node]
        upper, lower = (before, node) if down else (node, before)
        path.append(ZigzagStep(f, (frames[upper[0]], upper[1]), (frames[lower[0]], lower[1]), down))
        node = before
    path.reverse()
    result.steps = path
    return result


def check_zigzag(z: Zigzag) -> bool:
    """Each step is an inverse image along its map and consecutive steps share nodes."""
    for st in z.steps:
        T, U = st.upper
        R, V = st.lower
        if st.map.codomain != T or st.map.domain != R or st.map.preimage_mask(U) != V:
            return False
    nodes = []
    for st in z.steps:
        a, b = (st.upper, st.lower) if st.forward else (st.lower, st.upper)
        if nodes and nodes[-1] != a:
            return False
        nodes.append(b) if nodes else nodes.extend([a, b])
    return True


# presentations used by the exhaustive sheaf-condition suite
SHEAF_PRESENTATIONS = (
    Presentation(("x",)),
    Presentation(("x",), ("x | ~x",)),
    Presentation(("x",), ("~~x -> x",)),
    Presentation(("x", "y"), ("x -> y",)),
    Presentation(("x", "y"), ("x | y", "~(x & y)")),
)
