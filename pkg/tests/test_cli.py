import json
import subprocess
import sys

import pytest

from ktopos import catalog, jsonio
from ktopos.cli import run
from ktopos.kp import notexact_pair
from ktopos.ladder import GENERIC_X, TOP_RN
from ktopos.quantifiers import ProductUpset


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, err = call(capsys, "--json", *argv)
    return code, json.loads(out)


@pytest.fixture
def pair_file(tmp_path):
    f, g = notexact_pair()
    p = tmp_path / "pair.json"
    p.write_text(json.dumps({"f": jsonio.map_to_json(f), "g": jsonio.map_to_json(g)}))
    return str(p)


def test_coequalize_notexact(capsys, pair_file):
    code, d = call_json(capsys, "kp", "coequalize", "--pair", pair_file, "--verify-bound", "3")
    assert code == 0
    Q = jsonio.poset_from_json(d["quotient"])
    assert catalog.isomorphism(Q, catalog.chain(3)) is not None
    assert d["projection"]["open"] is True


def test_notexact(capsys):
    code, d = call_json(capsys, "kp", "notexact")
    assert code == 0 and d["ok"] and d["three_chain"]


def test_decide(capsys):
    code, d = call_json(capsys, "logic", "decide", "x | ~x")
    assert code == 0 and d["provable"] is False
    # a two-point chain, x true only at the top, refuted at the root
    P = jsonio.poset_from_json(d["countermodel"]["frame"])
    assert catalog.isomorphism(P, catalog.sigma()) is not None
    (top,) = [e for e in P.elements if e != d["point"]]
    assert d["countermodel"]["valuation"]["x"] == [top] and P.leq(d["point"], top)
    code, d = call_json(capsys, "logic", "decide", "x -> (y -> x)")
    assert code == 0 and d["provable"] is True


def test_countermodel_exit(capsys):
    assert call(capsys, "logic", "countermodel", "x -> x")[0] == 1
    assert call(capsys, "logic", "countermodel", "~~x -> x")[0] == 0


def test_parse_error_is_usage(capsys):
    code, _, err = call(capsys, "logic", "decide", "x ->")
    assert code == 2 and "error" in err


def test_unknown_command(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "poset", "show", "no-such-file.json")[0] == 2


def test_poset_and_dual(capsys):
    code, out, _ = call(capsys, "poset", "show", "vee")
    assert code == 0 and "r<a" in out
    code, d = call_json(capsys, "dual", "spec", "antichain2")
    assert code == 0 and len(d["elements"]) == 2
    code, d = call_json(capsys, "dual", "homs", "sigma", "sigma", "--heyting")
    assert d["count"] == 2
    assert call(capsys, "dual", "roundtrip", "chain4")[0] == 0


def test_nerve(capsys):
    code, d = call_json(capsys, "nerve", "models", "sigma")
    assert code == 0 and d["count"] == 3
    code, d = call_json(capsys, "nerve", "models", "--rel", "~x", "sigma")
    assert d["count"] == 1
    code, d = call_json(capsys, "nerve", "sheaf-check", "--rooted", "chain3")
    assert code == 0 and d["ok"]
    code, d = call_json(capsys, "nerve", "pi-connect", "one", '["*"]', "one", "[]")
    assert code == 0 and d["steps"]


def test_ladder(capsys):
    code, d = call_json(capsys, "ladder", "eval", "~~x")
    assert code == 0 and d == {"nodes": [["R", 1], ["R", 2]]}


def test_quant(capsys, tmp_path):
    S = catalog.sigma()
    p = tmp_path / "s.json"
    p.write_text(json.dumps(jsonio.product_upset_to_json(ProductUpset(S, {0: GENERIC_X, 1: TOP_RN}))))
    code, d = call_json(capsys, "quant", "exists", str(p))
    assert code == 0 and d == [0, 1]
    code, d = call_json(capsys, "quant", "forall", str(p))
    assert d == [1]
    code, d = call_json(capsys, "quant", "impl", str(p), str(p))
    assert all(v == {"top": True} for v in d["fibers"].values())


def test_quant_checks_exit_codes(capsys):
    assert call(capsys, "quant", "frobenius", "--poset", "sigma")[0] == 0
    code, d = call_json(capsys, "quant", "frobenius", "--poset", "vee", "--depth", "1")
    assert code == 1 and d["failures"] == 2
    assert call(capsys, "quant", "joins", "--poset", "sigma")[0] == 0
    code, out, _ = call(capsys, "quant", "joins", "--control")
    assert code == 0 and "found" in out
    assert call(capsys, "quant", "local", "--poset", "antichain2")[0] == 2
    assert call(capsys, "quant", "local", "--poset", "antichain2", "--allow-unrooted")[0] == 1
    code, d = call_json(capsys, "quant", "glue", "--shadow")
    assert code == 0 and d["size"] == 10 and d["local"]


def test_verify_deterministic(capsys):
    a = call(capsys, "--json", "verify", "two-valued", "coequalizer", "--grid", "quick")
    b = call(capsys, "verify", "two-valued", "coequalizer", "--json", "--grid", "quick")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    assert json.loads(a[1])["ok"] is True


def test_verify_unknown_suite(capsys):
    assert call(capsys, "verify", "nonsense")[0] == 2


def test_entry_point():
    out = subprocess.run([sys.executable, "-m", "ktopos.cli", "logic", "equiv", "~x", "~~~x"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "equivalent"
