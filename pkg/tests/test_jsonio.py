import json

from hypothesis import given

from conftest import posets
from ktopos import catalog, jsonio
from ktopos.duality import to_lattice
from ktopos.kp import notexact_pair
from ktopos.ladder import TOP_RN, RNElement, finite_upsets
from ktopos.logic import KripkeModel
from ktopos.nerve import SHEAF_PRESENTATIONS
from ktopos.poset import Upset, UpsetAlgebra, monotone_maps, tensor
from ktopos.quantifiers import product_upsets


def through_text(d):
    return json.loads(json.dumps(d))


@given(posets())
def test_poset_roundtrip(P):
    Q = jsonio.poset_from_json(through_text(jsonio.poset_to_json(P)))
    assert Q.elements == P.elements and Q.relation() == P.relation()


def test_tuple_labels():
    S2, p1, _ = tensor(catalog.sigma(), catalog.sigma())
    Q = jsonio.poset_from_json(through_text(jsonio.poset_to_json(S2)))
    assert Q == S2
    m = jsonio.map_from_json(through_text(jsonio.map_to_json(p1)))
    assert m.table == p1.table


def test_maps():
    f, g = notexact_pair()
    d = through_text(jsonio.map_to_json(f))
    assert d["open"] is True
    assert jsonio.map_from_json(d, open_required=True).table == f.table
    for h in monotone_maps(catalog.sigma(), catalog.vee()):
        assert jsonio.map_from_json(through_text(jsonio.map_to_json(h))).table == h.table


def test_upsets_and_lattices():
    V = catalog.vee()
    for m in UpsetAlgebra(V).masks:
        U = Upset(V, m)
        assert jsonio.upset_from_json(through_text(jsonio.upset_to_json(U))) == U
    L = to_lattice(UpsetAlgebra(V))
    back = jsonio.lattice_from_json(through_text(jsonio.lattice_to_json(L)))
    # set labels come back as sorted tuples; the order is unchanged
    assert back.elements == tuple(tuple(sorted(e)) for e in L.elements)
    assert back.order.up == L.order.up


def test_presentations_and_models():
    for A in SHEAF_PRESENTATIONS:
        assert jsonio.presentation_from_json(through_text(jsonio.presentation_to_json(A))) == A
    M = KripkeModel.of(catalog.vee(), {"x": ["a"], "y": ["a", "b"]})
    assert jsonio.model_from_json(through_text(jsonio.model_to_json(M))) == M


def test_ladder_values():
    for a in finite_upsets(3) + [TOP_RN]:
        assert jsonio.rn_from_json(through_text(jsonio.rn_to_json(a))) == a
    assert jsonio.rn_to_json(RNElement([("R", 1)])) == {"nodes": [["R", 1]]}


def test_product_upsets():
    for S in product_upsets(catalog.vee(), 1)[::7]:
        back = jsonio.product_upset_from_json(through_text(jsonio.product_upset_to_json(S)))
        assert back == S


def test_dumps_deterministic():
    payload = {"b": [frozenset({3, 1}), catalog.sigma()], "a": TOP_RN}
    assert jsonio.dumps(payload) == jsonio.dumps(payload)
    assert json.loads(jsonio.dumps(payload))["b"][0] == [1, 3]
