import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ktopos import catalog
from ktopos.duality import FinLattice, LatticeHom, boolean_lattice, lattice_chain, two
from ktopos.errors import (BaseMismatchError, NotMeetPreservingError, NotMonotoneError,
                           NotRootedError, SizeError)
from ktopos.ladder import EMPTY_RN, GENERIC_X, TOP_RN, RNElement, ladder_trunc, rn_implies, rn_meet
from ktopos.poset import FinPoset, Upset, all_upset_masks, tensor
from ktopos.quantifiers import (ProductUpset, bottom, control_fiber_check, exists_pi, fiber_values,
                                forall_along, forall_pi, frobenius_check, galois_check, glue,
                                grid_posets, heyting_axioms_failure, is_local, join_preservation_check,
                                locality_check, locality_shadow, pi_inverse, prod_implies, prod_join,
                                prod_meet, product_upsets, residuation_check, top, upset_lattice)


def rn(*nodes):
    return RNElement([(n[0], int(n[1:])) for n in nodes])


def truncated_product(P, d):
    """The finite poset ``ladder_trunc(d) × P`` with the product order."""
    T = ladder_trunc(d)
    elems = [(w, p) for w in T.elements for p in P.elements]
    return FinPoset.from_leq(elems, lambda x, y: T.leq(x[0], y[0]) and P.leq(x[1], y[1]))


def as_set(S: ProductUpset, d):
    return frozenset((w, p) for p in S.base.elements for w in S.fiber(p).restrict(d))


def brute_implies(X, A, B):
    """Pointwise residual in the upset algebra of X."""
    return frozenset(x for x in X.elements if all(y in B for y in A if X.leq(x, y)))


GRID = dict(grid_posets(("one", "sigma", "chain3")))


class TestBasics:
    def test_pi_inverse(self):
        S = catalog.sigma()
        assert pi_inverse(Upset(S, S.full_mask)) == top(S)
        assert pi_inverse(Upset(S, 0)) == bottom(S)
        T = pi_inverse(Upset.of(S, [1]))
        assert T.fiber(0) == EMPTY_RN and T.fiber(1) == TOP_RN

    def test_exists_forall(self):
        S = catalog.sigma()
        assert exists_pi(ProductUpset(S, {0: EMPTY_RN, 1: GENERIC_X})).members == {1}
        assert forall_pi(ProductUpset(S, {0: EMPTY_RN, 1: TOP_RN})).members == {1}
        assert forall_pi(ProductUpset(S, {0: EMPTY_RN, 1: GENERIC_X})).members == set()

    def test_not_monotone(self):
        S = catalog.sigma()
        with pytest.raises(NotMonotoneError):
            ProductUpset(S, {0: TOP_RN, 1: GENERIC_X})

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatchError):
            prod_meet(top(catalog.sigma()), top(catalog.one()))
        with pytest.raises(BaseMismatchError):
            prod_implies(top(catalog.sigma()), top(catalog.one()))

    def test_implication_unfolded_on_sigma(self):
        S = catalog.sigma()
        rng = random.Random(0)
        fams = product_upsets(S, 2)
        for _ in range(200):
            A, B = rng.choice(fams), rng.choice(fams)
            imp = prod_implies(A, B)
            one = rn_implies(A.fiber(1), B.fiber(1))
            assert imp.fiber(1) == one
            assert imp.fiber(0) == rn_meet(rn_implies(A.fiber(0), B.fiber(0)), one)
        assert all(prod_implies(A, A).is_top for A in fams)

    def test_fiber_values(self):
        assert fiber_values(0) == [EMPTY_RN, TOP_RN]
        with pytest.raises(ValueError):
            fiber_values(-1)

    def test_size_guard(self):
        with pytest.raises(SizeError):
            product_upsets(catalog.antichain(3), 3, max_families=100)

    @pytest.mark.parametrize("name", ["sigma", "vee"])
    def test_operations_against_truncated_product(self, name):
        P = catalog.preset(name)
        d = 4
        X = truncated_product(P, d)
        fams = product_upsets(P, 1)
        for A in fams:
            for B in fams:
                a, b = as_set(A, d), as_set(B, d)
                assert as_set(prod_meet(A, B), d) == a & b
                assert as_set(prod_join(A, B), d) == a | b
                assert as_set(prod_implies(A, B), d) == brute_implies(X, a, b)

    def test_family_counts(self):
        # 8 finite upsets of the depth-2 truncation, plus Top
        vals = fiber_values(2)
        assert len(vals) == 9
        assert len(product_upsets(catalog.one(), 2)) == 9
        # families over Σ are pairs a <= b of fiber values
        pairs = sum(1 for a in vals for b in vals if a <= b)
        assert len(product_upsets(catalog.sigma(), 2)) == pairs


class TestAdjunctions:
    @pytest.mark.parametrize("name", ["one", "sigma", "chain3", "vee"])
    def test_galois(self, name):
        v = galois_check(catalog.preset(name), 2)
        assert v.ok and v.cases > 0

    @pytest.mark.parametrize("name", ["one", "sigma"])
    def test_residuation(self, name):
        assert residuation_check(catalog.preset(name), 1).ok

    @given(st.sampled_from(["sigma", "chain3", "vee"]), st.data())
    def test_galois_random(self, name, data):
        P = catalog.preset(name)
        fams = product_upsets(P, 2)
        S = data.draw(st.sampled_from(fams))
        T = Upset(P, data.draw(st.sampled_from(all_upset_masks(P))))
        assert (S <= pi_inverse(T)) == (exists_pi(S) <= T)
        assert (pi_inverse(T) <= S) == (T <= forall_pi(S))


class TestFrobenius:
    @pytest.mark.parametrize("name", ["one", "sigma", "chain3"])
    def test_holds(self, name):
        v = frobenius_check(GRID[name], 2)
        assert v.ok and v.details["failures"] == 0

    def test_phi_top(self):
        P = catalog.vee()
        for psi in product_upsets(P, 2):
            assert exists_pi(prod_implies(top(P), psi)) == exists_pi(psi)

    def test_vee_cell_counts(self):
        V = catalog.vee()
        counts = {d: frobenius_check(V, d) for d in (1, 2)}
        assert [counts[d].details["failures"] for d in (1, 2)] == [2, 4]
        assert counts[2].cases == 1150

    def test_vee_counterexample_independently(self):
        """The failing cell recomputed inside a finite product poset."""
        V = catalog.vee()
        phi = Upset.of(V, ["a", "b"])
        psi = ProductUpset(V, {"r": EMPTY_RN, "a": rn("L1"), "b": rn("R1")})
        d = 4
        X = truncated_product(V, d)
        lifted = as_set(pi_inverse(phi), d)
        imp = brute_implies(X, lifted, as_set(psi, d))
        lhs = {p for _, p in imp}
        exists_psi = {p for _, p in as_set(psi, d)}
        rhs = brute_implies(V, phi.members, exists_psi)
        assert lhs == {"a", "b"} and rhs == {"r", "a", "b"}
        v = frobenius_check(V, 1)
        assert not v.ok and v.counterexample["psi"] == psi


class TestJoins:
    @pytest.mark.parametrize("name", ["one", "sigma", "chain3", "vee"])
    def test_holds(self, name):
        assert join_preservation_check(catalog.preset(name), 2).ok

    def test_bottom(self):
        for P in GRID.values():
            assert forall_pi(bottom(P)).mask == 0

    def test_control(self):
        v = control_fiber_check()
        assert v.ok
        ce = v.counterexample
        assert ce["lhs"].mask == catalog.one().full_mask and ce["rhs"].mask == 0
        # the two fiber points, one each
        assert {len(ce["S"].members), len(ce["T"].members)} == {1}
        assert ce["S"].members | ce["T"].members == set(ce["S"].poset.elements)

    def test_control_with_omega_like_fiber(self):
        # a rooted fiber has no such failure
        assert not control_fiber_check(catalog.vee(), catalog.one()).ok


class TestLocality:
    @pytest.mark.parametrize("name", ["one", "sigma", "chain3", "vee"])
    def test_rooted(self, name):
        assert locality_check(catalog.preset(name), 2).ok

    def test_antichain(self):
        A2 = catalog.antichain(2)
        with pytest.raises(NotRootedError):
            locality_check(A2)
        v = locality_check(A2, allow_unrooted=True)
        assert not v.ok and v.counterexample["level"] == "algebra"

    def test_fiber_mechanism(self):
        vals = fiber_values(4)
        for a in vals:
            for b in vals:
                if (a | b).top:
                    assert a.top or b.top


def lattice_iso(L, M):
    return catalog.isomorphism(L.order, M.order) is not None


def const_top(B: FinLattice, A: FinLattice) -> LatticeHom:
    return LatticeHom(B, A, tuple(A.top for _ in B.elements))


class TestGlue:
    def test_identity(self):
        for P in [catalog.sigma(), catalog.vee()]:
            U = upset_lattice(P)
            G = glue(LatticeHom(U, U, tuple(range(len(U)))))
            assert G.axioms_ok and G.implication_ok
            assert G.r.is_heyting_hom()
            # pairs a <= b of upsets are the upsets of P ⊗ Σ
            assert lattice_iso(G.lattice, upset_lattice(tensor(P, catalog.sigma())[0]))

    def test_constant_top_is_product(self):
        for B in [two(), lattice_chain(3), boolean_lattice(2)]:
            G = glue(const_top(B, two()))
            assert len(G.lattice) == 2 * len(B)
            assert G.axioms_ok and G.implication_ok and G.r.is_heyting_hom()
            # the carrier B × 2 always has (⊤, ⊥) ∨ (⊥, ⊤) = ⊤, so it is never local
            assert not G.is_local

    def test_shadow(self):
        G = locality_shadow()
        assert len(G.lattice) == 10
        assert G.axioms_ok and G.implication_ok and G.r.is_heyting_hom()
        assert G.is_local and is_local(G.f.codomain)

    def test_forall_preserves_meets(self):
        S = catalog.sigma()
        _, p1, _ = tensor(S, S)
        f = forall_along(p1)
        U = f.domain
        for a in U.elements:
            for b in U.elements:
                assert f(U.meet(a, b)) == f.codomain.meet(f(a), f(b))

    def test_not_meet_preserving(self):
        C3 = lattice_chain(3)
        with pytest.raises(NotMeetPreservingError):
            glue(LatticeHom(C3, C3, (0, 0, 0)))
        B = boolean_lattice(2)
        # a join that is not a meet: send both atoms to ⊤ and ⊥ to ⊥
        table = tuple(B.top if a != B.bottom else B.bottom for a in range(len(B)))
        with pytest.raises(NotMeetPreservingError):
            glue(LatticeHom(B, B, table))

    @given(st.sampled_from(["sigma", "chain3", "vee", "antichain2"]), st.integers(0, 10 ** 6))
    def test_random_meet_preserving(self, name, seed):
        """Glue along random ⊤/∧-preserving maps; always Heyting with r a Heyting hom."""
        U = upset_lattice(catalog.preset(name))
        A = lattice_chain(3)
        rng = random.Random(seed)
        # meet-preserving maps U -> A: preimages of ↑a are filters, so pick a chain of filters
        filters = [frozenset(y for y in range(len(U)) if (U.order.up[x] >> y) & 1)
                   for x in range(len(U))]
        f1 = rng.choice(filters)
        f2 = rng.choice([F for F in filters if F <= f1])
        top_i = A.top
        mid = next(i for i in range(len(A)) if i not in (A.top, A.bottom))
        table = tuple(top_i if y in f2 else mid if y in f1 else A.bottom for y in range(len(U)))
        G = glue(LatticeHom(U, A, table))
        assert G.axioms_ok and G.implication_ok and G.r.is_heyting_hom()
        assert heyting_axioms_failure(G.lattice) is None


def test_is_local_examples():
    assert is_local(two()) and is_local(lattice_chain(4))
    assert not is_local(boolean_lattice(2))
    assert not is_local(lattice_chain(1))
