import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import closed_domains

from gbpflow.hypergraph import (AdaptednessError, ClosureUndefinedError, Hypergraph,
                                HypergraphError, NotAMemberError, build, convolve, mobius,
                                mobius_numbers, nerve, region)

E = ()


def powerset(vs):
    return [c for k in range(len(vs) + 1) for c in itertools.combinations(vs, k)]


class TestRegionsAndBuild:
    def test_region_canonical(self):
        assert region([2, 0, 1]) == (0, 1, 2)
        assert region([]) == ()

    @pytest.mark.parametrize("bad", [[1, 1], [-1, 2]])
    def test_region_rejects(self, bad):
        with pytest.raises(HypergraphError):
            region(bad)

    def test_close_adds_intersection(self):
        X = build([(0, 1), (1, 2)], close=True)
        assert X.regions == ((0, 1), (1, 2), (1,))

    def test_disjoint_pair_with_empty(self):
        X = build([(0, 1), (2,)], close=True, include_empty=True)
        assert X.regions == ((0, 1), (2,), E)

    def test_single_region_idempotent(self):
        assert build([(0, 1, 2)], close=True).regions == ((0, 1, 2),)

    def test_duplicates_rejected(self):
        with pytest.raises(HypergraphError, match="duplicate"):
            build([(0, 1), (1, 0)])

    def test_empty_input_rejected(self):
        with pytest.raises(HypergraphError):
            build([])

    def test_member_order(self):
        X = build([(3,), (0, 2), (0, 1), (1, 2, 3)])
        assert X.regions == ((1, 2, 3), (0, 1), (0, 2), (3,))
        assert X.omega == (0, 1, 2, 3)

    def test_closed_flag(self):
        assert not build([(0, 1), (1, 2)]).closed
        assert build([(0, 1), (1, 2)], close=True).closed
        # an empty intersection is tolerated when ∅ is not a member
        assert build([(0,), (1,)]).closed


class TestNerve:
    X = build([(0, 1), (0,)], include_empty=True)

    def test_degree_one(self):
        assert nerve(self.X, 1) == [((0, 1), (0,)), ((0, 1), E), ((0,), E)]

    def test_degree_two(self):
        assert nerve(self.X, 2) == [((0, 1), (0,), E)]

    def test_degree_zero_is_member_list(self):
        assert nerve(self.X, 0) == [(a,) for a in self.X.regions]

    def test_beyond_dimension_empty(self):
        assert nerve(self.X, 3) == []
        assert self.X.dim == 2

    def test_negative_degree(self):
        with pytest.raises(HypergraphError):
            nerve(self.X, -1)

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_chains_strictly_decreasing(self, data):
        X = data.draw(closed_domains()).X
        for p in range(X.dim + 1):
            for c in X.nerve(p):
                assert len(c) == p + 1
                assert all(set(b) < set(a) for a, b in zip(c, c[1:]))


class TestMobius:
    def test_boolean_lattice(self):
        X = build(powerset((0, 1)))
        mu = mobius(X)
        for (a, b), v in mu.items():
            assert v == (-1) ** (len(a) - len(b))

    def test_total_order(self):
        X = build([(0, 1, 2), (0, 1), (0,)])
        mu = X.mobius
        assert mu[(0, 1, 2), (0, 1)] == -1 and mu[(0, 1), (0,)] == -1
        assert mu[(0, 1, 2), (0,)] == 0
        assert all(mu[a, a] == 1 for a in X)

    def test_triangle(self):
        X = build([(0, 1), (1, 2), (0, 2)], close=True, include_empty=True)
        for a in X:
            if len(a) == 2:
                assert X.mobius[a, E] == 1
            elif len(a) == 1:
                assert X.mobius[a, E] == -1

    def test_values_are_ints(self):
        X = build([(0, 1), (1, 2), (0, 2)], close=True, include_empty=True)
        assert all(type(v) is int for v in X.mobius.values())

    @given(st.data())
    @settings(max_examples=50, deadline=None)
    def test_dirichlet_inversion(self, data):
        X = data.draw(closed_domains(max_vars=6)).X
        one = {(a, b): int(a == b) for a in X for b in X.below(a, strict=False)}
        assert convolve(X.mobius, X.zeta, X) == one
        assert convolve(X.zeta, X.mobius, X) == one

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_restriction_to_full_suborder(self, data):
        X = data.draw(closed_domains()).X
        a = data.draw(st.sampled_from(X.regions))
        cone = X.cone(a)
        for key, v in cone.mobius.items():
            assert X.mobius[key] == v


class TestMobiusNumbers:
    def test_cone(self):
        X = build([(0, 1), (0,), (1,)], include_empty=True)
        c = mobius_numbers(X).c
        assert [c[a] for a in X.regions] == [1, 0, 0, 0]

    def test_triangle(self):
        X = build([(0, 1), (1, 2), (0, 2)], close=True, include_empty=True)
        c = X.mobius_numbers.c
        assert {len(a): c[a] for a in X} == {2: 1, 1: -1, 0: 1}
        assert sum(c.values()) == 1

    def test_single(self):
        assert build([(4,)]).mobius_numbers.c == {(4,): 1}

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_sum_above_is_one(self, data):
        X = data.draw(closed_domains()).X
        c = X.mobius_numbers.c
        for b in X:
            assert sum(c[a] for a in X.above(b, strict=False)) == 1

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_completion_with_top(self, data):
        X = data.draw(closed_domains()).X
        omega = X.omega
        if omega in X:
            return
        Xt = Hypergraph(list(X.regions) + [omega])
        c = X.mobius_numbers.c
        for b in X:
            assert c[b] == -Xt.mobius[omega, b]


class TestCones:
    X = build([(0, 1), (1, 2)], close=True)

    def test_cone_and_coboundary(self):
        assert self.X.cone((0, 1)).regions == ((0, 1), (1,))
        assert self.X.cone_coboundary((0, 1)) == [((1, 2), (1,))]

    def test_minimal_member(self):
        assert self.X.cone((1,)).regions == ((1,),)
        assert self.X.cone_coboundary((1,)) == [c for c in self.X.nerve(1) if c[1] == (1,)]

    def test_top_has_no_coboundary(self):
        X = build([(0, 1, 2), (0, 1), (1, 2)], close=True)
        assert X.cone_coboundary((0, 1, 2)) == []

    def test_not_a_member(self):
        with pytest.raises(NotAMemberError):
            self.X.cone((0, 2))


class TestClosure:
    X = build([(0, 1), (1, 2)], close=True)

    def test_examples(self):
        assert self.X.x_closure({1}) == (1,)
        assert self.X.x_closure({0}) == (0, 1)
        with pytest.raises(ClosureUndefinedError):
            self.X.x_closure({0, 2})

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_idempotent_and_monotone(self, data):
        X = data.draw(closed_domains(include_empty=True)).X
        a = data.draw(st.sampled_from(X.regions))
        s = data.draw(st.sets(st.sampled_from(a))) if a else set()
        t = data.draw(st.sets(st.sampled_from(a))) if a else set()
        cs = X.x_closure(s)
        assert X.x_closure(cs) == cs
        assert set(cs) <= set(X.x_closure(s | t))


class TestBoundarySplit:
    def test_simple(self):
        X = build([(0, 1), (1,)], include_empty=True)
        sp = X.boundary_split([1])
        assert sp.boundary == ((1,), E)
        assert sp.interior == ((0, 1),)
        assert sp.trace[(0, 1)] == (1,)

    def test_empty_boundary(self):
        X = build([(0, 1), (1,)], include_empty=True)
        sp = X.boundary_split([])
        assert sp.boundary == (E,)
        Y = build([(0, 1), (1,)])
        with pytest.raises(AdaptednessError):
            Y.boundary_split([])

    def test_not_adapted(self):
        X = build([(0, 1), (0,)], include_empty=True)
        with pytest.raises(AdaptednessError, match=r"\{0,1\}"):
            X.boundary_split([1])


class TestRetractability:
    def test_chain(self):
        ok, steps = build([(0, 1), (1, 2)], close=True).is_retractable()
        assert ok and steps

    def test_triangle(self):
        X = build([(0, 1), (1, 2), (0, 2)], close=True, include_empty=True)
        assert not X.is_retractable()[0]

    def test_single(self):
        assert build([(0, 1)]).is_retractable()[0]

    def test_tree(self):
        assert build([(0, 1, 2), (2, 3), (3, 4, 5), (3, 6)], close=True).is_retractable()[0]

    def test_four_cycle(self):
        X = build([(0, 1), (1, 2), (2, 3), (0, 3)], close=True)
        assert not X.is_retractable()[0]


class TestDiameter:
    def test_examples(self):
        assert build([(0, 1), (1, 2)], close=True).diameter() == 2
        assert build([(0, 1)]).diameter() == 0
        assert build([(0, 1), (0,), (1,)], include_empty=True).diameter() == 2

    def test_disconnected_warns(self):
        X = build([(0, 1), (2, 3)])
        with pytest.warns(UserWarning, match="components"):
            assert X.diameter() == 0

    def test_comparability_symmetric(self):
        A = build([(0, 1), (1, 2), (0, 2)], close=True, include_empty=True).comparability()
        np.testing.assert_array_equal(A, A.T)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build([(0, 1), (1, 2), (0, 2)], close=True).diameter()
