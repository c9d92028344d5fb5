import random
from fractions import Fraction as F

import pytest

from cbd import errors
from cbd.chsh import ODD_SIGN_PATTERNS, chsh, cycle_order, expectation_product
from cbd.coupling import analyze
from cbd.fixtures import cyclic_system, perturbed_pr_box, pr_box, trivial
from cbd.system import ContextDistribution, System, make_consistent_ab_system

from generators import flip, random_consistent_ab, relabel

Q = F(1, 4)


def test_eight_odd_patterns():
    assert len(ODD_SIGN_PATTERNS) == 8
    assert all(p.count(-1) in (1, 3) for p in ODD_SIGN_PATTERNS)


class TestExpectationProduct:
    def test_correlated(self):
        assert expectation_product(pr_box().context("11")) == 1

    def test_anticorrelated(self):
        assert expectation_product(pr_box().context("22")) == -1

    def test_independent(self):
        assert expectation_product(ContextDistribution("c", ("X", "Y"), (Q, Q, Q, Q))) == 0

    def test_wrong_arity(self):
        with pytest.raises(errors.WrongArity):
            expectation_product(ContextDistribution("c", ("X",), (1, 0)))


class TestChsh:
    def test_pr_box(self):
        report = chsh(pr_box())
        assert report.s_value == 4 and report.contextual
        assert report.expectations == (1, 1, 1, -1)

    def test_trivial(self):
        report = chsh(trivial())
        assert report.s_value == 2 and not report.contextual

    def test_independent(self):
        r = [[Q, Q], [Q, Q]]
        half = [F(1, 2)] * 2
        assert chsh(make_consistent_ab_system(r, half, half)).s_value == 0

    def test_generic_cycle_labels(self):
        assert chsh(cyclic_system(4)).s_value == 4

    def test_wrong_shape(self):
        with pytest.raises(errors.WrongShape):
            chsh(cyclic_system(5))
        two_pairs = System(tuple(
            ContextDistribution(label, names, (F(1, 2), 0, 0, F(1, 2)))
            for label, names in [("a", ("X", "Y")), ("b", ("X", "Y")),
                                 ("c", ("U", "V")), ("d", ("U", "V"))]
        ))
        with pytest.raises(errors.WrongShape):
            cycle_order(two_pairs)

    def test_inconsistent_rejected(self):
        with pytest.raises(errors.NotConsistentlyConnected):
            chsh(perturbed_pr_box(F(1, 8)))

    def test_invariances_and_bounds(self):
        rng = random.Random(11)
        for _ in range(30):
            system = random_consistent_ab(rng)
            s = chsh(system).s_value
            assert 0 <= s <= 4
            assert s <= sum(abs(e) for e in chsh(system).expectations)
            assert chsh(relabel(system, rng)).s_value == s
            assert chsh(flip(system, rng.choice(system.contents))).s_value == s

    def test_agrees_with_lp(self):
        rng = random.Random(5)
        for _ in range(40):
            system = random_consistent_ab(rng)
            assert chsh(system).contextual == analyze(system).contextual
