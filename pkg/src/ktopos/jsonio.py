"""JSON encodings for the objects that cross the command line.

Element labels are JSON values; lists are read back as tuples so that they
stay hashable.  Where a label must be an object key (map assignments, fibers),
a string label is used as is and anything else as its ``json.dumps`` text.

    poset         {"elements": [...], "leq": [[a, b], ...]}   (any generating pairs)
    map           {"domain": poset, "codomain": poset, "assignment": {key: label}}
    upset         {"poset": poset, "members": [...]}
    lattice       same as poset; must be a lattice
    lattice hom   {"domain": lattice, "codomain": lattice, "assignment": {key: label}}
    presentation  {"generators": [...], "relations": ["formula", ...]}
    ladder value  {"top": true} or {"nodes": [["L", 2], ...]}
    product upset {"base": poset, "fibers": {key: ladder value}}
    Kripke model  {"frame": poset, "valuation": {"x": [labels], ...}}
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .duality import FinLattice, LatticeHom
from .errors import UnknownElementError
from .ladder import RNElement
from .logic.formula import Formula
from .logic.kripke import KripkeModel
from .logic.parser import to_text
from .nerve import Presentation
from .poset import FinPoset, MonotoneMap, OpenMap, Upset, is_open
from .quantifiers import ProductUpset


def label_to_json(x):
    if isinstance(x, (tuple, list)):
        return [label_to_json(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((label_to_json(v) for v in x), key=_sort_key)
    return x


def label_from_json(v):
    if isinstance(v, list):
        return tuple(label_from_json(x) for x in v)
    return v


def _sort_key(v):
    return json.dumps(v, sort_keys=True)


def key_of(label) -> str:
    return label if isinstance(label, str) else json.dumps(label_to_json(label))


def _element_for_key(P: FinPoset, key: str):
    for e in P.elements:
        if key_of(e) == key:
            return e
    raise UnknownElementError(f"{key!r} is not an element")


def _keyed(P: FinPoset, mapping: dict) -> dict:
    out = {_element_for_key(P, k): v for k, v in mapping.items()}
    if len(out) != len(P):
        missing = [key_of(e) for e in P.elements if e not in out]
        raise UnknownElementError(f"no value given for {missing}")
    return out


# -- posets and maps ----------------------------------------------------------


def poset_to_json(P: FinPoset) -> dict:
    return {"elements": [label_to_json(e) for e in P.elements],
            "leq": [[label_to_json(a), label_to_json(b)] for a, b in P.covers()]}


def poset_from_json(d: dict) -> FinPoset:
    elements = [label_from_json(e) for e in d["elements"]]
    pairs = [(label_from_json(a), label_from_json(b)) for a, b in d.get("leq", [])]
    return FinPoset.from_relation(elements, pairs)


def map_to_json(f: MonotoneMap) -> dict:
    return {"domain": poset_to_json(f.domain), "codomain": poset_to_json(f.codomain),
            "assignment": {key_of(a): label_to_json(b) for a, b in f.assignment.items()},
            "open": bool(is_open(f))}


def map_from_json(d: dict, open_required: bool = False) -> MonotoneMap:
    P, Q = poset_from_json(d["domain"]), poset_from_json(d["codomain"])
    assignment = {a: label_from_json(b) for a, b in _keyed(P, d["assignment"]).items()}
    cls = OpenMap if open_required else MonotoneMap
    return cls(P, Q, assignment)


def upset_to_json(U: Upset) -> dict:
    return {"poset": poset_to_json(U.poset), "members": [label_to_json(e) for e in U.sorted_members()]}


def upset_from_json(d: dict, P: FinPoset | None = None) -> Upset:
    P = P if P is not None else poset_from_json(d["poset"])
    return Upset.of(P, [label_from_json(e) for e in d["members"]])


# -- lattices -----------------------------------------------------------------


def lattice_to_json(L: FinLattice) -> dict:
    return poset_to_json(L.order)


def lattice_from_json(d: dict) -> FinLattice:
    return FinLattice(poset_from_json(d))


def hom_to_json(h: LatticeHom) -> dict:
    return {"domain": lattice_to_json(h.domain), "codomain": lattice_to_json(h.codomain),
            "assignment": {key_of(a): label_to_json(b) for a, b in h.assignment.items()}}


def hom_from_json(d: dict) -> LatticeHom:
    A, B = lattice_from_json(d["domain"]), lattice_from_json(d["codomain"])
    assignment = {a: label_from_json(b) for a, b in _keyed(A.order, d["assignment"]).items()}
    return LatticeHom.from_assignment(A, B, assignment)


# -- logic --------------------------------------------------------------------


def presentation_to_json(A: Presentation) -> dict:
    return {"generators": list(A.generators), "relations": [to_text(r) for r in A.relations]}


def presentation_from_json(d: dict) -> Presentation:
    return Presentation(tuple(d["generators"]), tuple(d.get("relations", ())))


def model_to_json(M: KripkeModel) -> dict:
    return {"frame": poset_to_json(M.frame),
            "valuation": {name: [label_to_json(M.frame.elements[i]) for i in _bits(mask)]
                          for name, mask in sorted(M.valuation.items())}}


def model_from_json(d: dict) -> KripkeModel:
    P = poset_from_json(d["frame"])
    return KripkeModel.of(P, {name: [label_from_json(e) for e in members]
                              for name, members in d["valuation"].items()})


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


# -- ladder and quantifiers ---------------------------------------------------


def rn_to_json(a: RNElement) -> dict:
    if a.top:
        return {"top": True}
    return {"nodes": [[c, k] for c, k in a.sorted_nodes()]}


def rn_from_json(d: dict) -> RNElement:
    if d.get("top"):
        return RNElement(top=True)
    return RNElement([(c, int(k)) for c, k in d.get("nodes", [])])


def product_upset_to_json(S: ProductUpset) -> dict:
    return {"base": poset_to_json(S.base),
            "fibers": {key_of(p): rn_to_json(v) for p, v in S.assignment.items()}}


def product_upset_from_json(d: dict) -> ProductUpset:
    P = poset_from_json(d["base"])
    return ProductUpset(P, {p: rn_from_json(v) for p, v in _keyed(P, d["fibers"]).items()})


# -- generic encoding for reports --------------------------------------------


def to_json(obj):
    """Best-effort JSON value for any library object (used for report payloads)."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, FinPoset):
        return poset_to_json(obj)
    if isinstance(obj, MonotoneMap):
        return map_to_json(obj)
    if isinstance(obj, Upset):
        return [label_to_json(e) for e in obj.sorted_members()]
    if isinstance(obj, FinLattice):
        return lattice_to_json(obj)
    if isinstance(obj, LatticeHom):
        return hom_to_json(obj)
    if isinstance(obj, RNElement):
        return rn_to_json(obj)
    if isinstance(obj, ProductUpset):
        return {key_of(p): rn_to_json(v) for p, v in obj.assignment.items()}
    if isinstance(obj, KripkeModel):
        return model_to_json(obj)
    if isinstance(obj, Formula):
        return to_text(obj)
    if isinstance(obj, Presentation):
        return presentation_to_json(obj)
    if isinstance(obj, dict):
        return {str(k) if isinstance(k, str) else key_of(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_json(v) for v in obj), key=_sort_key)
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_json(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    return repr(obj)


def dumps(obj) -> str:
    return json.dumps(to_json(obj), sort_keys=True, ensure_ascii=False, indent=2)


def load(path) -> dict:
    """Read a JSON file; ``-`` is standard input."""
    if str(path) == "-":
        import sys

        return json.load(sys.stdin)
    return json.loads(Path(path).read_text())
