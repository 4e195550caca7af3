from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stacky_moduli.errors import BadResidue, BudgetExceeded, NonGenericTheta
from stacky_moduli.fields import QQ
from stacky_moduli.polyring import Poly
from stacky_moduli.verify import (
    check_residue, compare_masses, fiber_check, naive_stack_mass, refined_mass, refined_points_trivial_g,
    search_theta, stack_count, stack_mass, theta_grid,
)

from oracles import count_affine, dual_order_formula, p1_mass, refined_count_p12

GL = ["p12", "p1", "w23", "w222"]


def refined(P, q, theta=None, **kw):
    return refined_mass(P.S, P.constraints, P.lattices, theta or P.default_theta(), q, **kw)


class TestStackMass:
    @pytest.mark.parametrize("name,q,mass", [("p12", 3, 4), ("p12", 5, 6), ("p1", 3, 4), ("p1", 5, 6),
                                             ("w23", 7, 8), ("w23", 5, 6), ("w222", 3, 4), ("w222", 5, 6)])
    def test_examples(self, pipelines, name, q, mass):
        assert stack_mass(pipelines[name].cox, q) == mass == p1_mass(q)

    def test_naive_free(self, p12):
        # L free: the naive count is exact; (25 - 1) / 4
        assert naive_stack_mass(p12.cox, 5) == 6

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_naive_torsion(self, w222, q):
        pts = count_affine([{(2, 0, 0): -1, (0, 2, 0): -1, (0, 0, 2): 1}], 3, q) - 1
        expected = Fraction(pts, dual_order_formula(1, (2, 2), q))
        assert naive_stack_mass(w222.cox, q) == expected
        # the naive quotient miscounts: torsion in L acts with twisted forms
        assert expected != p1_mass(q)

    def test_profile_p12(self, p12):
        sc = stack_count(p12.cox, 5)
        assert sc.profile == {1: 5, 2: 2}
        assert sum(Fraction(n, s) for s, n in sc.profile.items()) == sc.mass

    def test_profile_w222(self, w222):
        assert stack_count(w222.cox, 3).profile == {1: 1, 2: 6}

    def test_bad_residue(self, w222):
        with pytest.raises(BadResidue):
            stack_mass(w222.cox, 2)

    def test_not_prime(self, p12):
        with pytest.raises(ValueError):
            check_residue(p12.cox.group, 4)

    def test_irrelevant_locus(self, f2):
        with pytest.raises(ValueError):
            stack_count(f2.cox, 3)

    def test_budget(self, w23):
        with pytest.raises(BudgetExceeded):
            stack_mass(w23.cox, 7, budget=100)


class TestRefinedMass:
    @pytest.mark.parametrize("q", [3, 5, 7])
    @pytest.mark.parametrize("theta", [(1, 1), (2, 1), (1, 3), (3, -1)])
    def test_p12_vs_direct(self, p12, q, theta):
        r = refined(p12, q, theta)
        assert r.refined_mass == refined_count_p12(q, theta)
        assert r.stable_point_count == r.refined_mass * r.gauge_order
        assert r.gauge_order == (q - 1) ** 2

    def test_p12_examples(self, p12):
        assert refined(p12, 5, (1, 1)).refined_mass == 6
        assert refined(p12, 3, (1, 1)).refined_mass == 4
        assert refined(p12, 5).candidates == 500

    def test_non_generic(self, p12):
        with pytest.raises(NonGenericTheta):
            refined(p12, 5, (0, 0))

    def test_unrestricted_tests_more_subsets(self, p12):
        # theta({2}) = 0 matters only when every subset is tested
        assert refined(p12, 5, (1, 0)).refined_mass == refined_count_p12(5, (1, 0))
        with pytest.raises(NonGenericTheta):
            refined(p12, 5, (1, 0), restricted=False)

    def test_budget(self, p12):
        with pytest.raises(BudgetExceeded):
            refined(p12, 5, budget=10)

    def test_budget_env(self, p12, monkeypatch):
        monkeypatch.setenv("STACKY_MODULI_BUDGET", "10")
        with pytest.raises(BudgetExceeded):
            refined(p12, 5)

    def test_bad_residue(self, w222):
        with pytest.raises(BadResidue):
            refined(w222, 2)

    def test_profile_integral(self, w222):
        r = refined(w222, 3)
        assert all(Fraction(n).denominator == 1 for n in r.refined_profile.values())
        assert sum(Fraction(n, s) for s, n in r.refined_profile.items()) == r.refined_mass


class TestCompare:
    @pytest.mark.parametrize("name,qs", [("p12", [3, 5]), ("p1", [3, 5, 7]), ("w222", [3, 5])])
    def test_match(self, pipelines, name, qs):
        P = pipelines[name]
        for r in compare_masses(P.cox, P.S, P.constraints, P.lattices, qs, P.default_theta()):
            assert r.match and r.stack_mass == r.refined_mass == p1_mass(r.q)
            assert r.profiles_match

    @pytest.mark.slow
    def test_w23(self, w23):
        (r,) = compare_masses(w23.cox, w23.S, w23.constraints, w23.lattices, [7], w23.default_theta())
        assert r.match and r.refined_mass == 8
        assert r.refined_profile == r.stack_profile == {1: 6, 2: 2, 3: 3}

    def test_workers(self, w222):
        a = refined(w222, 5)
        b = refined(w222, 5, workers=2)
        assert (a.stable_point_count, a.refined_profile) == (b.stable_point_count, b.refined_profile)
        s1, s2 = stack_count(w222.cox, 5), stack_count(w222.cox, 5, workers=2)
        assert (s1.mass, s1.profile) == (s2.mass, s2.profile)


class TestPartition:
    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 500), max_size=6))
    def test_refined(self, cuts):
        P = _p12()
        full = refined(P, 5).stable_point_count
        edges = [0] + sorted(cuts) + [500]
        parts = sum(refined(P, 5, start=a, stop=b).stable_point_count for a, b in zip(edges, edges[1:]))
        assert parts == full

    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 100), max_size=6))
    def test_stack(self, cuts):
        C = _p12().cox
        sc = stack_count(C, 5)
        edges = [0] + sorted(cuts) + [sc.candidates]
        parts = sum(stack_count(C, 5, start=a, stop=b).point_count for a, b in zip(edges, edges[1:]))
        assert parts == sc.point_count


_cache: dict = {}


def _p12():
    if not _cache:
        from stacky_moduli.pipeline import gl_pipeline, weighted_p12
        _cache["p"] = gl_pipeline(weighted_p12())
    return _cache["p"]


class TestFiber:
    @pytest.mark.parametrize("name", GL)
    @pytest.mark.parametrize("q", [3, 5])
    def test_all(self, pipelines, name, q):
        P = pipelines[name]
        assert fiber_check(P.S, P.de_ideal, P.constraints, q)

    def test_w23_q7(self, w23):
        assert fiber_check(w23.S, w23.de_ideal, w23.constraints, 7)

    def test_p12_points(self, p12):
        pts = refined_points_trivial_g(p12.S, p12.constraints, 5)
        assert pts == {(x, z, x) for x in range(5) for z in range(5)}

    @pytest.mark.parametrize("name", ["p12", "w222"])
    def test_mutation_detected(self, pipelines, name):
        P = pipelines[name]
        f = P.de_ideal[0]
        (m1, _), (m2, _) = f.sorted_terms()
        mutated = [Poly(QQ, f.nvars, [(m1, 1), (m2, -2)])] + P.de_ideal[1:]
        assert not fiber_check(P.S, mutated, P.constraints, 5)
        assert not fiber_check(P.S, P.de_ideal[1:], P.constraints, 5)


class TestThetaSearch:
    def test_grid(self):
        g = theta_grid(2, 1)
        assert g[0] == (0, 0) and len(g) == 9 and max(map(max, g)) == 1

    def test_search_p12(self, p12):
        th, tried = search_theta(p12.cox, p12.S, p12.constraints, p12.lattices, 5, radius=1)
        assert th is not None and tried[-1] == (th, "match")
        assert tried[0] == ((0, 0), "non-generic")
        assert refined(p12, 5, th).refined_mass == 6
