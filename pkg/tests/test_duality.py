import pytest
from hypothesis import given

from conftest import posets
from ktopos import catalog
from ktopos.duality import (FinLattice, LatticeHom, boolean_lattice, counit, counit_is_iso,
                            dual_monotone_map, dual_open_map, enumerate_homs, lattice_chain, spec,
                            spec_hom, to_lattice, two, roundtrip_poset)
from ktopos.errors import NotALatticeError, NotDistributiveError, NotOpenError
from ktopos.poset import FinPoset, MonotoneMap, UpsetAlgebra, identity, monotone_maps, open_maps


def M3():
    return FinLattice.from_relation("0abc1", [("0", x) for x in "abc"] + [(x, "1") for x in "abc"])


def N5():
    return FinLattice.from_relation("0abc1", [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def prime_filters(D: FinLattice):
    """Brute force over principal filters: ``↑a`` is prime iff ``a`` is join-prime."""
    E = D.elements
    out = []
    for a in E:
        if all(D.leq(a, x) for x in E):
            continue
        if all(D.leq(a, x) or D.leq(a, y) for x in E for y in E if D.leq(a, D.join(x, y))):
            out.append(frozenset(b for b in E if D.leq(a, b)))
    return out


def filter_poset(D):
    fs = prime_filters(D)
    return FinPoset.from_relation(fs, [(F, G) for F in fs for G in fs if F <= G])


def iso(P, Q):
    return catalog.isomorphism(P, Q) is not None


class TestLattice:
    def test_not_a_lattice(self):
        with pytest.raises(NotALatticeError):
            FinLattice(catalog.antichain(2))

    def test_empty(self):
        with pytest.raises(NotALatticeError):
            FinLattice(catalog.empty())

    def test_non_distributive(self):
        for L in (M3(), N5()):
            assert not L.distributive and not L.is_heyting
            with pytest.raises(NotDistributiveError):
                spec(L)
            with pytest.raises(NotDistributiveError):
                L.implies("a", "b")

    def test_boolean(self):
        B = boolean_lattice(2)
        assert len(B) == 4 and B.distributive
        assert len(B.join_irreducibles()) == 2

    @given(posets(max_size=5))
    def test_implication_is_residual(self, P):
        L = to_lattice(UpsetAlgebra(P))
        E = L.elements
        for a in E:
            for b in E:
                imp = L.implies(a, b)
                for c in E:
                    assert L.leq(L.meet(c, a), b) == L.leq(c, imp)


class TestSpec:
    def test_examples(self):
        assert iso(spec(lattice_chain(3)), catalog.sigma())
        assert iso(spec(boolean_lattice(2)), catalog.antichain(2))
        assert iso(spec(two()), catalog.one())

    def test_trivial_lattice(self):
        assert len(spec(lattice_chain(1))) == 0

    @given(posets(max_size=5))
    def test_against_prime_filters(self, P):
        D = to_lattice(UpsetAlgebra(P))
        assert iso(spec(D), filter_poset(D))

    def test_spec_points_are_homs(self):
        D = to_lattice(UpsetAlgebra(catalog.vee()))
        for j in spec(D).elements:
            assert spec_hom(D, j).is_lattice_hom()
        # and there are no others
        assert len(enumerate_homs(D, two())) == len(spec(D))

    def test_chains(self):
        for n in range(2, 7):
            assert iso(spec(lattice_chain(n)), catalog.chain(n - 1))


class TestToLattice:
    def test_examples(self):
        assert iso(to_lattice(UpsetAlgebra(catalog.one())).order, two().order)
        L = to_lattice(UpsetAlgebra(catalog.sigma()))
        assert iso(L.order, catalog.chain(3))
        bot = L.elements[L.bottom]
        assert all(L.implies(a, bot) == bot for a in L.elements if a != bot)
        assert iso(to_lattice(UpsetAlgebra(catalog.antichain(2))).order, boolean_lattice(2).order)


class TestRoundtrip:
    def test_small(self):
        assert roundtrip_poset(catalog.one()).ok
        r = roundtrip_poset(catalog.sigma())
        assert r.ok and r.mapping[0] == {0, 1}

    @pytest.mark.parametrize("n", range(6))
    def test_all_up_to_five(self, n):
        for P in catalog.posets_of_size(n):
            assert roundtrip_poset(P).ok

    @given(posets(max_size=5))
    def test_counit_iso(self, P):
        assert counit_is_iso(to_lattice(UpsetAlgebra(P)))

    def test_counit_non_distributive(self):
        with pytest.raises(NotDistributiveError):
            counit(N5())


class TestHoms:
    def test_dual_identity(self):
        P = catalog.vee()
        h = dual_open_map(identity(P))
        assert h.table == tuple(range(len(h.domain)))

    def test_sigma_counts(self):
        U = to_lattice(UpsetAlgebra(catalog.sigma()))
        assert len(enumerate_homs(U, U, heyting=True)) == 2 == len(open_maps(catalog.sigma(), catalog.sigma()))

    def test_non_open_dual_breaks_negation(self):
        S = catalog.sigma()
        c0 = MonotoneMap(S, S, {0: 0, 1: 0})
        with pytest.raises(NotOpenError):
            dual_open_map(c0)
        h = dual_monotone_map(c0)
        assert h.is_lattice_hom()
        bad = h.implication_failure()
        assert bad is not None
        # ¬{1} = ∅, but the preimage of {1} is empty and its negation is everything
        U = h.domain
        one, empty = frozenset({1}), frozenset()
        assert h(U.implies(one, empty)) != h.codomain.implies(h(one), h(empty))

    def test_homs_brute_force(self):
        # every table, filtered by the hom laws, against the join-irreducible enumeration
        from itertools import product

        lats = [two(), lattice_chain(3), boolean_lattice(2), to_lattice(UpsetAlgebra(catalog.vee()))]
        for A in lats:
            for B in lats:
                for heyting in (False, True):
                    brute = set()
                    for t in product(range(len(B)), repeat=len(A)):
                        h = LatticeHom(A, B, t)
                        if h.is_lattice_hom() and (not heyting or h.implication_failure() is None):
                            brute.add(t)
                    assert {h.table for h in enumerate_homs(A, B, heyting)} == brute

    def test_counts_agree_up_to_four(self):
        ps = [P for P in catalog.posets_up_to(4) if len(P)]
        lat = {P: to_lattice(UpsetAlgebra(P)) for P in ps}
        for P in ps:
            for Q in ps:
                n_open = len(open_maps(P, Q))
                assert len(enumerate_homs(lat[Q], lat[P], heyting=True)) == n_open
                assert len(enumerate_homs(lat[Q], lat[P])) == len(monotone_maps(P, Q))

    def test_functorial(self):
        P, Q, R = catalog.chain(3), catalog.sigma(), catalog.one()
        for f in monotone_maps(P, Q):
            for g in monotone_maps(Q, R):
                lhs = dual_monotone_map(f.then(g))
                rhs = dual_monotone_map(g).then(dual_monotone_map(f))
                assert lhs.table == rhs.table
