import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ktopos import catalog
from ktopos.ladder import (EMPTY_RN, GENERIC_X, TOP_RN, RNElement, class_representatives,
                           eval_one_var, finite_upsets, is_uniform_topological, ladder_trunc,
                           rn_implies, rn_join, rn_meet, rn_neg, rn_ops, utop_search)
from ktopos.logic import (BOTTOM, TRUE, KripkeModel, Var, equiv, formula_pool, parse, provable,
                          truth_mask)
from ktopos.poset import UpsetAlgebra, open_maps


def rn(*nodes):
    return RNElement([(n[0], int(n[1:])) for n in nodes])


def trunc_implies(a, b, d):
    """a → b computed inside the finite truncation of depth d.

    The truncation is an upset of the ladder, so restricting to it is a
    Heyting map and the restriction of the true a → b must agree.
    """
    T = ladder_trunc(d)
    ra, rb = a.restrict(d), b.restrict(d)
    return frozenset(p for p in T.elements
                     if all(q in rb for q in ra if T.leq(p, q)))


POOL = finite_upsets(3) + [TOP_RN]


class TestTruncation:
    def test_examples(self):
        T1 = ladder_trunc(1)
        assert catalog.isomorphism(T1, catalog.antichain(2)) is not None
        T2 = ladder_trunc(2)
        assert T2.labels(T2.up[T2.index(("L", 2))]) == {("L", 2), ("L", 1), ("R", 1)}
        assert T2.labels(T2.up[T2.index(("R", 2))]) == {("R", 2), ("R", 1)}
        T3 = ladder_trunc(3)
        assert T3.labels(T3.up[T3.index(("R", 3))]) == {("R", 3), ("R", 2), ("R", 1), ("L", 1)}

    def test_size(self):
        for d in range(1, 8):
            assert len(ladder_trunc(d)) == 2 * d

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            ladder_trunc(0)

    def test_deep_nodes_below_everything_two_rows_up(self):
        T = ladder_trunc(9)
        for k in range(1, 8):
            for c in "LR":
                for c2 in "LR":
                    assert T.leq((c, k + 2), (c2, k))

    def test_not_upset(self):
        with pytest.raises(ValueError):
            RNElement([("L", 2)])


class TestOps:
    def test_examples(self):
        assert rn_neg(GENERIC_X) == rn("L1")
        assert rn_neg(rn_neg(GENERIC_X)) == rn("R1", "R2")
        for a in POOL:
            assert rn_implies(a, a) == TOP_RN
        ops = rn_ops(GENERIC_X, rn("L1"))
        assert ops["join"] == rn("L1", "R1") and ops["meet"] == EMPTY_RN

    def test_top_cases(self):
        b = rn("R1", "R2")
        assert rn_implies(TOP_RN, b) == b
        assert rn_implies(b, TOP_RN) == TOP_RN
        assert rn_meet(TOP_RN, b) == b and rn_join(TOP_RN, b) == TOP_RN

    def test_operators(self):
        a, b = rn("R1"), rn("L1")
        assert (a | b) == rn_join(a, b) and (a & b) == rn_meet(a, b)
        assert (a >> b) == rn_implies(a, b) and ~a == rn_neg(a)

    def test_implication_against_truncation(self):
        for a in POOL:
            for b in POOL:
                d = max(a.max_depth, b.max_depth) + 3
                assert rn_implies(a, b).restrict(d) == trunc_implies(a, b, d), (a, b)

    @given(st.sampled_from(finite_upsets(4) + [TOP_RN]),
           st.sampled_from(finite_upsets(4) + [TOP_RN]),
           st.integers(0, 3))
    def test_implication_any_depth(self, a, b, extra):
        d = max(a.max_depth, b.max_depth) + 1 + extra
        assert rn_implies(a, b).restrict(d) == trunc_implies(a, b, d)

    def test_heyting_axioms(self):
        rng = random.Random(5)
        pool = finite_upsets(4) + [TOP_RN]
        for _ in range(3000):
            a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
            assert (rn_meet(c, a) <= b) == (c <= rn_implies(a, b))
            assert rn_meet(a, rn_join(b, c)) == rn_join(rn_meet(a, b), rn_meet(a, c))
            assert rn_meet(a, rn_implies(a, b)) == rn_meet(a, b)
            assert rn_join(a, EMPTY_RN) == a and rn_meet(a, TOP_RN) == a


class TestEval:
    def test_examples(self):
        x = Var("x")
        assert eval_one_var(x) == GENERIC_X
        assert eval_one_var(parse("x | ~x")) == rn("R1", "L1")
        assert eval_one_var(parse("~~x -> x")) == rn("L2", "L1", "R1")
        assert eval_one_var(BOTTOM) == EMPTY_RN and eval_one_var(TRUE) == TOP_RN

    def test_completeness_shadow_small(self):
        for f in formula_pool(6):
            assert provable(f) == (eval_one_var(f) == TOP_RN)

    def test_equivalence_matches_equality(self):
        pool = formula_pool(4)
        vals = {f: eval_one_var(f) for f in pool}
        rng = random.Random(2)
        for _ in range(300):
            f, g = rng.choice(pool), rng.choice(pool)
            assert equiv(f, g) == (vals[f] == vals[g])

    def test_polynomial_naturality(self):
        frames = [P for P in catalog.posets_up_to(3) if len(P)]
        fs = formula_pool(5)
        for P in frames:
            for Q in frames:
                for f in open_maps(Q, P):
                    for U in UpsetAlgebra(P).masks:
                        MP = KripkeModel(P, {"x": U})
                        MQ = KripkeModel(Q, {"x": f.preimage_mask(U)})
                        for phi in fs:
                            assert f.preimage_mask(truth_mask(MP, phi)) == truth_mask(MQ, phi)


class TestUtop:
    def test_examples(self):
        assert is_uniform_topological(parse("x")).ok
        assert is_uniform_topological(parse("~~x")).ok
        assert is_uniform_topological(TRUE).ok
        v = is_uniform_topological(parse("x | ~x"))
        assert not v.ok and v.failed == 2
        assert is_uniform_topological(BOTTOM).failed == 1
        assert not is_uniform_topological(parse("~x")).ok

    def test_countermodel_refutes_condition(self):
        from ktopos.ladder import utop_conditions

        v = is_uniform_topological(parse("x | ~x"))
        cond = utop_conditions(parse("x | ~x"))[v.failed - 1]
        assert v.countermodel is not None and v.countermodel.refutes(cond)

    def test_representatives(self):
        reps = class_representatives(3)
        assert set(reps) == set(finite_upsets(3)) | {TOP_RN}
        for val, f in reps.items():
            assert eval_one_var(f) == val

    def test_search_depth_three(self):
        r = utop_search(3)
        assert {val for val, _ in r.passing} == {GENERIC_X, rn_neg(rn_neg(GENERIC_X)), TOP_RN}
        assert r.classes_tested == len(finite_upsets(3)) + 1

    def test_bad_bound(self):
        with pytest.raises(ValueError):
            utop_search(2)
