"""Kripke models on finite posets and intuitionistic forcing."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .. import _kernels as K
from ..errors import NotUpsetError, UnboundVariableError
from ..poset import FinPoset, Upset, all_upset_masks
from .formula import AND, BOT, IMP, OR, TOP, VAR, Formula, variables


@dataclass(frozen=True)
class KripkeModel:
    frame: FinPoset
    valuation: Mapping[str, int]  # variable -> upset bitmask

    def __post_init__(self):
        val = {}
        for name, v in dict(self.valuation).items():
            mask = v.mask if isinstance(v, Upset) else int(v)
            if not self.frame.is_upset_mask(mask):
                raise NotUpsetError(f"value of {name!r} is not an upset")
            val[name] = mask
        object.__setattr__(self, "valuation", val)

    def __hash__(self):
        return hash((self.frame, tuple(sorted(self.valuation.items()))))

    @classmethod
    def of(cls, frame: FinPoset, valuation: Mapping[str, object]) -> "KripkeModel":
        """Build from label sets (or Upsets) rather than masks."""
        val = {}
        for name, v in valuation.items():
            val[name] = v.mask if isinstance(v, Upset) else frame.mask_of(v)
        return cls(frame, val)

    def value(self, name: str) -> Upset:
        return Upset(self.frame, self.valuation[name])


def truth_mask(M: KripkeModel, f: Formula, _cache=None) -> int:
    """Bitmask of the points forcing ``f``; always an upset."""
    cache = {} if _cache is None else _cache
    up = M.frame.up
    full = M.frame.full_mask

    def ev(g):
        r = cache.get(g)
        if r is not None:
            return r
        k = g.kind
        if k == VAR:
            try:
                r = M.valuation[g.name]
            except KeyError:
                raise UnboundVariableError(f"variable {g.name!r} has no value") from None
        elif k == BOT:
            r = 0
        elif k == TOP:
            r = full
        elif k == AND:
            r = ev(g.left) & ev(g.right)
        elif k == OR:
            r = ev(g.left) | ev(g.right)
        else:
            r = K.upset_implies(up, ev(g.left), ev(g.right))
        cache[g] = r
        return r

    return ev(f)


def truth_set(M: KripkeModel, f: Formula) -> Upset:
    return Upset(M.frame, truth_mask(M, f))


def force(M: KripkeModel, p, f: Formula) -> bool:
    return bool((truth_mask(M, f) >> M.frame.index(p)) & 1)


def valid_in(M: KripkeModel, f: Formula) -> bool:
    return truth_mask(M, f) == M.frame.full_mask


def all_models(frame: FinPoset, names) -> list[KripkeModel]:
    """Every valuation of ``names`` in upsets of ``frame``."""
    names = sorted(names)
    ups = all_upset_masks(frame)
    return [KripkeModel(frame, dict(zip(names, vals))) for vals in product(ups, repeat=len(names))]


def search_countermodel(f: Formula, max_size: int = 4, frames=None, max_models: int = 200_000):
    """Brute-force search for ``(model, point)`` refuting ``f``, smallest frames first.

    Only rooted frames are searched; a refutation anywhere restricts to one on
    the up-cone of the refuting point.  Returns None when nothing is found
    within ``max_size`` points and ``max_models`` models; a bounded search, so
    None does not certify provability.
    """
    from .. import catalog

    names = variables(f)
    if frames is None:
        frames = catalog.rooted_posets_up_to(max_size)
    seen = 0
    for P in frames:
        for M in all_models(P, names):
            seen += 1
            if seen > max_models:
                return None
            mask = truth_mask(M, f)
            if mask != P.full_mask:
                missing = P.full_mask & ~mask
                i = (missing & -missing).bit_length() - 1
                return M, P.elements[i]
    return None
