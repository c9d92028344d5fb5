import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbd import errors
from cbd.coupling import (
    analyze,
    build_coupling_lp,
    coupling_objective,
    maximal_coupling,
    omega_vector,
    product_coupling,
    reduced_coupling_feasible,
)
from cbd.fixtures import cyclic_system, perturbed_pr_box, perturbed_trivial, pr_box, trivial
from cbd.lp import LinearProgram, solve
from cbd.system import ContextDistribution, System, make_ab_system

from generators import flip, random_consistent_ab, random_consistent_cycle, random_system, relabel

HALF = F(1, 2)
probability = st.fractions(min_value=0, max_value=1, max_denominator=24)


def one_context():
    return System((ContextDistribution("c", ("X", "Y"), (F(1, 2), F(1, 6), 0, F(1, 3))),))


def all_plus():
    ones = [[1, 1], [1, 1]]
    return make_ab_system(ones, ones, ones)


class TestMaximalCoupling:
    def test_fair(self):
        mc = maximal_coupling(HALF, HALF)
        assert mc.table == ((HALF, 0), (0, HALF))
        assert mc.equality_prob == 1

    def test_disjoint(self):
        mc = maximal_coupling(1, 0)
        assert mc.table == ((0, 1), (0, 0))
        assert mc.equality_prob == 0

    def test_scan_of_free_cell(self):
        # every table with margins (1/2, 5/8) is (t, 1/2-t; 5/8-t, t-1/8), t in [1/8, 1/2]
        p, q = HALF, F(5, 8)
        scan = max(
            t + (1 - p - q + t)
            for t in (F(k, 1000) for k in range(125, 501))
        )
        assert scan == F(7, 8)
        assert maximal_coupling(p, q).equality_prob == F(7, 8)

    @settings(max_examples=100, deadline=None)
    @given(probability, probability)
    def test_formula_matches_lp(self, p, q):
        # cells (++, +-, -+, --) with row margins p and column margins q
        lp = LinearProgram.build(4, [1, 0, 0, 1], [
            ([1, 1, 0, 0], "=", p),
            ([1, 0, 1, 0], "=", q),
            ([1, 1, 1, 1], "=", 1),
        ])
        mc = maximal_coupling(p, q)
        assert mc.equality_prob == solve(lp).value == 1 - abs(p - q)
        (a, b), (c, d) = mc.table
        assert min(a, b, c, d) >= 0
        assert (a + b, a + c) == (p, q)


class TestOmegaVector:
    def test_pr_box(self):
        assert omega_vector(pr_box()) == (1, 1, 1, 1)

    def test_perturbed(self):
        # connection order: Alice-1, Alice-2, Bob-1, Bob-2
        assert omega_vector(perturbed_pr_box(F(1, 8))) == (1, F(7, 8), 1, F(7, 8))

    def test_no_connections(self):
        assert omega_vector(one_context()) == ()


class TestBuildCouplingLp:
    def test_pr_box_size(self):
        lp = build_coupling_lp(pr_box())
        assert lp.num_vars == 256
        assert len(lp.constraints) == 16
        # 4 equality indicators, each true on half of the 2**8 atoms
        assert sum(lp.objective) == 4 * 128
        assert max(lp.objective) == 4

    def test_one_context(self):
        lp = build_coupling_lp(one_context())
        assert set(lp.objective) == {0}
        out = solve(lp)
        assert out.value == 0

    def test_rank5(self):
        lp = build_coupling_lp(cyclic_system(5))
        assert lp.num_vars == 1024
        assert len(lp.constraints) == 20
        assert sum(lp.objective) == 5 * 512

    def test_size_guard(self):
        with pytest.raises(errors.SystemTooLarge):
            build_coupling_lp(cyclic_system(9))
        with pytest.raises(errors.SystemTooLarge):
            analyze(pr_box(), max_vars=7)


class TestAnalyze:
    def test_pr_box(self):
        report = analyze(pr_box())
        assert report.cntx == 1 and report.contextual
        assert sum(report.omega_primes) == 3

    def test_trivial(self):
        report = analyze(trivial())
        assert report.cntx == 0 and not report.contextual

    def test_perturbed_pr_box(self):
        assert analyze(perturbed_pr_box(F(1, 8))).cntx == F(3, 4)

    def test_perturbed_trivial(self):
        assert analyze(perturbed_trivial(F(1, 4))).cntx == 0

    def test_one_context(self):
        report = analyze(one_context())
        assert report.cntx == 0
        assert report.witness.atoms == one_context().contexts[0].probs

    def test_single_context_contents_are_lifted(self):
        # PR-box with an extra unshared content in context 11
        base = pr_box()
        ctx = base.context("11")
        probs = []
        for p in ctx.probs:
            probs += [p * F(1, 3), p * F(2, 3)]
        wider = ContextDistribution("11", ctx.contents + ("Z",), tuple(probs))
        system = System((wider,) + tuple(c for c in base.contexts if c.context != "11"))
        report = analyze(system)
        assert report.cntx == 1
        assert report.witness.is_coupling_of(system)

    def test_witness_matches_report(self):
        system = perturbed_pr_box(F(3, 8))
        report = analyze(system)
        assert report.witness.is_coupling_of(system)
        for conn, wp in zip(report.connections, report.omega_primes):
            assert report.witness.equality_probability(
                (conn.content, conn.context_a), (conn.content, conn.context_b)) == wp


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_report_invariants_on_random_systems(seed):
    rng = random.Random(seed)
    system = random_system(rng)
    report = analyze(system)
    assert report.cntx >= 0
    assert all(wp <= w for wp, w in zip(report.omega_primes, report.omegas))
    assert report.cntx == sum(report.omegas) - sum(report.omega_primes)
    assert report.contextual == (report.cntx > 0)
    assert report.witness.is_coupling_of(system)
    prod = product_coupling(system)
    assert prod.is_coupling_of(system)
    assert coupling_objective(system, prod) <= sum(report.omega_primes)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_relabel_and_flip_invariance(seed):
    rng = random.Random(seed)
    system = random_system(rng)
    base = analyze(system).cntx
    assert analyze(relabel(system, rng)).cntx == base
    assert analyze(flip(system, rng.choice(system.contents))).cntx == base


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_contextual_iff_no_reduced_coupling(seed):
    rng = random.Random(seed)
    system = random_consistent_ab(rng) if seed % 2 else random_consistent_cycle(rng, 3 + seed % 3)
    reduced = reduced_coupling_feasible(system)
    assert analyze(system).contextual == (not reduced.feasible)
    if reduced:
        w = reduced.witness
        from cbd.system import marginal
        for ctx in system.contexts:
            assert marginal(w, ctx.contents).probs == ctx.probs


class TestProductCoupling:
    def test_pr_box_agreement_is_half(self):
        system = pr_box()
        coupling = product_coupling(system)
        for conn in analyze(system).connections:
            assert coupling.equality_probability(
                (conn.content, conn.context_a), (conn.content, conn.context_b)) == HALF

    def test_one_context(self):
        assert product_coupling(one_context()).atoms == one_context().contexts[0].probs

    def test_point_mass(self):
        atoms = product_coupling(all_plus()).atoms
        assert atoms[0] == 1 and sum(atoms) == 1


class TestReducedCoupling:
    def test_pr_box(self):
        assert not reduced_coupling_feasible(pr_box())

    def test_trivial(self):
        assert reduced_coupling_feasible(trivial()).feasible

    def test_single_context(self):
        res = reduced_coupling_feasible(one_context())
        assert res.feasible
        assert res.witness.probs == one_context().contexts[0].probs

    def test_requires_consistency(self):
        with pytest.raises(errors.NotConsistentlyConnected):
            reduced_coupling_feasible(perturbed_pr_box(F(1, 8)))
