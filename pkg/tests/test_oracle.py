import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbd import errors
from cbd.coupling import analyze, reduced_coupling_feasible
from cbd.fixtures import cyclic_system, perturbed_pr_box, pr_box, trivial
from cbd.oracle import deterministic_mixture_feasible, grid_search_omega, pair_coupling_bruteforce
from cbd.system import ContextDistribution, System, make_ab_system

from generators import random_consistent_cycle, random_system

probability = st.fractions(min_value=0, max_value=1, max_denominator=30)


class TestPairBruteforce:
    def test_fair(self):
        assert pair_coupling_bruteforce(F(1, 2), F(1, 2), 4) == 1

    def test_shifted(self):
        assert pair_coupling_bruteforce(F(1, 2), F(5, 8), 8) == F(7, 8)

    def test_opposite(self):
        assert pair_coupling_bruteforce(0, 1, 1) == 0

    @given(probability, probability, st.integers(1, 12))
    def test_closed_form(self, p, q, d):
        assert pair_coupling_bruteforce(p, q, d) == 1 - abs(p - q)


class TestDeterministicMixture:
    def test_pr_box(self):
        assert deterministic_mixture_feasible(pr_box()) is False

    def test_trivial(self):
        assert deterministic_mixture_feasible(trivial()) is True

    def test_point_mass(self):
        ones = [[1, 1], [1, 1]]
        assert deterministic_mixture_feasible(make_ab_system(ones, ones, ones))

    def test_requires_consistency(self):
        with pytest.raises(errors.NotConsistentlyConnected):
            deterministic_mixture_feasible(perturbed_pr_box(F(1, 8)))

    def test_too_many_contents(self):
        contexts = tuple(ContextDistribution(f"c{i}", (f"X{i}",), (1, 0)) for i in range(13))
        with pytest.raises(errors.TooManyContents):
            deterministic_mixture_feasible(System(contexts))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_agrees_with_lp_route(self, seed):
        rng = random.Random(seed)
        system = random_consistent_cycle(rng, rng.randint(3, 4), extra_contents=rng.randint(0, 2))
        assert deterministic_mixture_feasible(system) == reduced_coupling_feasible(system).feasible


class TestGridSearch:
    def test_trivial_reaches_four(self):
        result = grid_search_omega(trivial(), 8)
        assert result.best_objective == 4
        assert result.best_coupling.is_coupling_of(trivial())

    @pytest.mark.parametrize("d", [1, 3, 8])
    def test_pr_box_bounded_by_three(self, d):
        assert grid_search_omega(pr_box(), d).best_objective <= 3

    def test_one_context(self):
        system = System((ContextDistribution("c", ("X", "Y"), (F(1, 4),) * 4),))
        assert grid_search_omega(system, 4).best_objective == 0

    def test_rank5(self):
        result = grid_search_omega(cyclic_system(5), 4)
        assert result.best_objective <= sum(analyze(cyclic_system(5)).omega_primes)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_never_beats_lp(self, seed, d):
        system = random_system(random.Random(seed))
        result = grid_search_omega(system, d)
        assert result.best_coupling.is_coupling_of(system)
        assert result.best_objective <= sum(analyze(system).omega_primes)
