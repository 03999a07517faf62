"""Named small posets and enumeration of finite posets up to isomorphism."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .poset import FinPoset, all_upset_masks, popcount


def one() -> FinPoset:
    return FinPoset(["*"], [1])


def empty() -> FinPoset:
    return FinPoset([], [])


def sigma() -> FinPoset:
    """The Sierpiński poset ``0 < 1``."""
    return FinPoset.from_relation([0, 1], [(0, 1)])


def chain(n: int) -> FinPoset:
    return FinPoset.from_relation(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinPoset:
    return FinPoset.from_relation(list(range(n)), [])


def vee() -> FinPoset:
    """Rooted tree with a root below two incomparable leaves."""
    return FinPoset.from_relation(["r", "a", "b"], [("r", "a"), ("r", "b")])


def sigma_squared() -> FinPoset:
    from .poset import tensor

    return tensor(sigma(), sigma())[0]


PRESETS = {
    "empty": empty,
    "one": one,
    "sigma": sigma,
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "chain4": lambda: chain(4),
    "antichain2": lambda: antichain(2),
    "antichain3": lambda: antichain(3),
    "vee": vee,
    "tree3": vee,
    "sigma2": sigma_squared,
}


def preset(name: str) -> FinPoset:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown poset preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


# -- isomorphism ------------------------------------------------------------


def _signature(P: FinPoset, i: int):
    return (popcount(P.up[i]), popcount(P.down[i]))


def isomorphism(P: FinPoset, Q: FinPoset) -> dict | None:
    """An order isomorphism ``P -> Q`` as a label dict, or None (brute force)."""
    n = len(P)
    if n != len(Q):
        return None
    sp = [_signature(P, i) for i in range(n)]
    sq = [_signature(Q, i) for i in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    cands = [[j for j in range(n) if sq[j] == sp[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(cands[i]))
    assign = {}
    used = set()

    def ok(i, j):
        for i2, j2 in assign.items():
            if ((P.up[i] >> i2) & 1) != ((Q.up[j] >> j2) & 1):
                return False
            if ((P.up[i2] >> i) & 1) != ((Q.up[j2] >> j) & 1):
                return False
        return True

    def rec(k):
        if k == n:
            return True
        i = order[k]
        for j in cands[i]:
            if j not in used and ok(i, j):
                assign[i] = j
                used.add(j)
                if rec(k + 1):
                    return True
                del assign[i]
                used.discard(j)
        return False

    if not rec(0):
        return None
    return {P.elements[i]: Q.elements[j] for i, j in assign.items()}


def canonical_form(P: FinPoset) -> tuple:
    """Lexicographically least relation matrix over signature-respecting relabelings."""
    n = len(P)
    sig = sorted(range(n), key=lambda i: _signature(P, i))
    groups = []
    for i in sig:
        if groups and _signature(P, groups[-1][0]) == _signature(P, i):
            groups[-1].append(i)
        else:
            groups.append([i])
    best = None

    def orders(gs):
        if not gs:
            yield []
            return
        for perm in permutations(gs[0]):
            for rest in orders(gs[1:]):
                yield list(perm) + rest

    for order in orders(groups):
        pos = {old: new for new, old in enumerate(order)}
        rows = [0] * n
        for old in range(n):
            m = 0
            u = P.up[old]
            j = 0
            while u:
                if u & 1:
                    m |= 1 << pos[j]
                u >>= 1
                j += 1
            rows[pos[old]] = m
        key = tuple(rows)
        if best is None or key < best:
            best = key
    return best if best is not None else ()


@lru_cache(maxsize=None)
def _posets_of_size(n: int) -> tuple:
    if n == 0:
        return ((),)
    seen = {}
    for rows in _posets_of_size(n - 1):
        P = FinPoset(list(range(n - 1)), rows)
        # add a new maximal element above a down-closed set D
        full = P.full_mask
        for up_mask in all_upset_masks(P):
            downset = full & ~up_mask  # complement of an upset is a downset
            new_rows = [r | (1 << (n - 1)) if (downset >> i) & 1 else r
                        for i, r in enumerate(rows)]
            new_rows.append(1 << (n - 1))
            Q = FinPoset(list(range(n)), new_rows)
            key = canonical_form(Q)
            seen.setdefault(key, key)
    return tuple(sorted(seen))


def posets_of_size(n: int) -> list[FinPoset]:
    """All posets on ``n`` elements up to isomorphism, labelled ``0..n-1``."""
    return [FinPoset(list(range(n)), rows) for rows in _posets_of_size(n)]


def posets_up_to(n: int, *, include_empty: bool = True) -> list[FinPoset]:
    out = []
    for k in range(0 if include_empty else 1, n + 1):
        out.extend(posets_of_size(k))
    return out


def rooted_posets_up_to(n: int) -> list[FinPoset]:
    from .poset import is_rooted

    return [P for P in posets_up_to(n, include_empty=False) if is_rooted(P)]
