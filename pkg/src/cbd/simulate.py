"""Monte Carlo re-estimation of a system from simulated realizations.

Draws come from numpy's PCG64 generator seeded through ``SeedSequence``
(``numpy.random.default_rng(seed)``).  Empirical probabilities are kept
as exact fractions ``count / n`` so the analysis pipeline runs unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .coupling import DEFAULT_MAX_VARS, CbdReport, analyze
from .system import ContextDistribution, System

GENERATOR = "numpy.PCG64"

_INT_LIMIT = 2**62


@dataclass(frozen=True)
class SimulationResult:
    empirical_system: System
    counts: tuple[tuple[str, tuple[int, ...]], ...]
    analysis: CbdReport
    seed: int
    samples_per_context: int
    generator: str = GENERATOR


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return np.random.default_rng(seed)


def _draw_counts(dist: ContextDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    denom = lcm(*(p.denominator for p in dist.probs))
    if denom < _INT_LIMIT:
        # exact inverse CDF on the integer lattice 0..denom-1
        cumulative = np.cumsum([p.numerator * (denom // p.denominator) for p in dist.probs])
        draws = rng.integers(0, denom, size=n)
    else:
        cumulative = np.cumsum([float(p) for p in dist.probs])
        cumulative[-1] = 1.0
        draws = rng.random(size=n)
    atoms = np.searchsorted(cumulative, draws, side="right")
    return np.bincount(atoms, minlength=len(dist.probs))


def sample_context(dist: ContextDistribution, n: int, rng: np.random.Generator) -> ContextDistribution:
    """Empirical distribution of ``n`` i.i.d. draws from ``dist``."""
    if n < 1:
        raise ValueError("need at least one sample")
    counts = _draw_counts(dist, n, rng)
    return ContextDistribution(
        dist.context, dist.contents, tuple(Fraction(int(c), n) for c in counts)
    )


def simulate(system: System, samples_per_context: int, seed: int,
             max_vars: int = DEFAULT_MAX_VARS) -> SimulationResult:
    """Sample every context (in label order) and analyze the empirical system."""
    if samples_per_context < 1:
        raise ValueError("samples_per_context must be positive")
    rng = make_rng(seed)
    contexts, counts = [], []
    for ctx in system.contexts:
        drawn = _draw_counts(ctx, samples_per_context, rng)
        counts.append((ctx.context, tuple(int(c) for c in drawn)))
        contexts.append(ContextDistribution(
            ctx.context, ctx.contents,
            tuple(Fraction(int(c), samples_per_context) for c in drawn),
        ))
    empirical = System(tuple(contexts))
    return SimulationResult(
        empirical_system=empirical,
        counts=tuple(counts),
        analysis=analyze(empirical, max_vars=max_vars),
        seed=seed,
        samples_per_context=samples_per_context,
    )
