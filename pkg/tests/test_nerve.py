from itertools import product

import pytest

from ktopos import catalog
from ktopos.duality import boolean_lattice, lattice_chain, to_lattice, two
from ktopos.errors import NotCoverError, NotOpenError, NotRootedError, SearchExhaustedError
from ktopos.kp import CoverFamily
from ktopos.logic import KripkeModel, all_models, truth_mask
from ktopos.nerve import (SHEAF_PRESENTATIONS, Presentation, check_zigzag, cohesion_stage,
                          free_nerve_check, models, omega, pi_connect, poset_nerve, restrict,
                          sheaf_check)
from ktopos.poset import (FinPoset, MonotoneMap, UpsetAlgebra, all_upset_masks, identity, open_maps,
                          point, tensor)


def brute_models(A, P):
    return {M for M in all_models(P, A.generators)
            if all(truth_mask(M, r) == P.full_mask for r in A.relations)}


def cone_families(A, P):
    """Compatible families over the rooted cover, counted by direct agreement
    on the overlaps ``↑p ∩ ↑q`` of the cones."""
    cones = [P.up[i] for i in range(len(P))]
    per_cone = []
    for c in cones:
        labels = P.labels(c)
        sub = FinPoset.from_relation(sorted(labels, key=P.index),
                                     [(a, b) for a in labels for b in labels if P.leq(a, b)])
        per_cone.append([{g: sub.labels(m) for g, m in M.valuation.items()}
                         for M in brute_models(A, sub)])
    count = 0
    for fam in product(*per_cone):
        count += all(fam[i][g] & P.labels(ci & cj) == fam[j][g] & P.labels(ci & cj)
                     for i, ci in enumerate(cones) for j, cj in enumerate(cones)
                     for g in A.generators)
    return count


X = Presentation(("x",))


class TestModels:
    def test_examples(self):
        S = catalog.sigma()
        for P in catalog.posets_up_to(3):
            st = models(Presentation(("x",), ("x",)), P)
            assert len(st) == 1 and st.models[0].valuation["x"] == P.full_mask
        assert len(models(X, S)) == 3
        st = models(Presentation(("x",), ("~x",)), S)
        assert len(st) == 1 and st.models[0].valuation["x"] == 0

    @pytest.mark.parametrize("A", SHEAF_PRESENTATIONS, ids=str)
    def test_against_brute_force(self, A):
        for P in catalog.posets_up_to(3):
            assert set(models(A, P).models) == brute_models(A, P)

    def test_omega_is_upsets(self):
        for P in catalog.posets_up_to(4):
            assert len(omega(P)) == len(UpsetAlgebra(P)) == len(poset_nerve(catalog.sigma(), P))
        assert len(omega(catalog.one())) == 2

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            Presentation(("x",), ("y",))


class TestRestrict:
    def test_identity(self):
        P = catalog.vee()
        r = restrict(X, identity(P))
        for M in models(X, P).models:
            assert r(M) == M

    def test_point(self):
        S = catalog.sigma()
        M = KripkeModel.of(S, {"x": [1]})
        out = restrict(X, point(S, 1))(M)
        assert out.valuation["x"] == out.frame.full_mask

    def test_not_open(self):
        S = catalog.sigma()
        with pytest.raises(NotOpenError):
            restrict(X, MonotoneMap(S, S, {0: 0, 1: 0}))

    def test_functorial(self):
        A = Presentation(("x", "y"), ("x -> y",))
        frames = [P for P in catalog.posets_up_to(3) if len(P)]
        stage = {P: models(A, P).models for P in frames}
        for P in frames:
            for Q in frames:
                for f in open_maps(Q, P):
                    rf = restrict(A, f)
                    pulled = [rf(M) for M in stage[P]]
                    for R in frames:
                        for g in open_maps(R, Q):
                            lhs, rg = restrict(A, g.then(f)), restrict(A, g)
                            assert [lhs(M) for M in stage[P]] == [rg(N) for N in pulled]


class TestPosetNerve:
    def test_examples(self):
        S = catalog.sigma()
        assert len(poset_nerve(S, S)) == 3
        V = catalog.vee()
        assert len(poset_nerve(V, catalog.one())) == len(V)
        S2, _, _ = tensor(S, S)
        # maps Σ -> L are pairs a <= b; for Σ⊗Σ that is 9
        assert len(poset_nerve(S2, S)) == 9

    def test_free_nerve(self):
        for P in catalog.posets_up_to(3):
            v = free_nerve_check(two(), P)
            assert v.ok and v.models == v.maps == 1
            v = free_nerve_check(lattice_chain(3), P)
            assert v.ok and v.models == len(UpsetAlgebra(P))
        v = free_nerve_check(boolean_lattice(2), catalog.sigma())
        assert v.ok and v.maps == 2

    def test_free_nerve_upset_lattices(self):
        for Lp in [catalog.sigma(), catalog.vee()]:
            D = to_lattice(UpsetAlgebra(Lp))
            for P in catalog.posets_up_to(2):
                assert free_nerve_check(D, P).ok


class TestSheaf:
    def test_examples(self):
        C3 = catalog.chain(3)
        assert sheaf_check(X, C3, CoverFamily.rooted(C3)).ok
        V = catalog.vee()
        assert sheaf_check(X, V, CoverFamily(V, (identity(V),))).ok
        S = catalog.sigma()
        assert sheaf_check(Presentation(("x",), ("~~x",)), S, CoverFamily.rooted(S)).ok

    def test_not_cover(self):
        S = catalog.sigma()
        with pytest.raises(NotCoverError):
            sheaf_check(X, S, CoverFamily(S, (point(S, 1),)))

    @pytest.mark.parametrize("A", SHEAF_PRESENTATIONS, ids=str)
    def test_family_count_against_cone_oracle(self, A):
        for P in catalog.posets_up_to(3):
            if not len(P):
                continue
            v = sheaf_check(A, P, CoverFamily.rooted(P))
            assert v.ok and v.families == v.models == len(brute_models(A, P))
            assert v.families == cone_families(A, P)

    def test_other_covers(self):
        # covers of Σ by the projections out of Σ⊗Σ
        S = catalog.sigma()
        S2, p1, p2 = tensor(S, S)
        for A in SHEAF_PRESENTATIONS[:3]:
            assert sheaf_check(A, S, CoverFamily(S, (p1, p2))).ok
            assert sheaf_check(A, S, CoverFamily(S, (p1, identity(S)))).ok


class TestCohesion:
    def test_examples(self):
        assert len(cohesion_stage("Γ", X)) == 2
        assert len(cohesion_stage("∇", {"a", "b"}, catalog.sigma())) == 2
        assert len(cohesion_stage("nabla", {"a", "b"}, catalog.antichain(2))) == 4
        for P in catalog.posets_up_to(3):
            assert cohesion_stage("Δ", {"a", "b"}, P) == ["a", "b"]

    def test_errors(self):
        with pytest.raises(ValueError):
            cohesion_stage("∇", {"a"})
        with pytest.raises(ValueError):
            cohesion_stage("Π", {"a"})


class TestPiConnect:
    def test_top_to_bottom_of_one(self):
        one = catalog.one()
        z = pi_connect(one, one.full_mask, one, 0, 4)
        assert len(z) > 0 and check_zigzag(z)
        for st in z.steps:
            assert len(st.upper[0]) <= 4 and len(st.lower[0]) <= 4

    def test_trivial(self):
        S = catalog.sigma()
        assert len(pi_connect(S, 0b10, S, 0b10)) == 0

    def test_single_step(self):
        S, one = catalog.sigma(), catalog.one()
        z = pi_connect(S, S.mask_of([1]), one, one.full_mask)
        assert len(z) == 1 and check_zigzag(z)

    def test_all_pairs_up_to_two(self):
        frames = catalog.rooted_posets_up_to(2)
        for P in frames:
            for Q in frames:
                for a in all_upset_masks(P):
                    for b in all_upset_masks(Q):
                        assert check_zigzag(pi_connect(P, a, Q, b, 3))

    def test_errors(self):
        A2, S = catalog.antichain(2), catalog.sigma()
        with pytest.raises(NotRootedError):
            pi_connect(A2, 0, S, 0)
        with pytest.raises(ValueError):
            pi_connect(catalog.chain(3), 0, S, 0, stage_bound=2)
        with pytest.raises(ValueError):
            pi_connect(S, 0b01, S, 0)

    def test_bound_too_small(self):
        one = catalog.one()
        with pytest.raises(SearchExhaustedError):
            pi_connect(one, one.full_mask, one, 0, 1)
