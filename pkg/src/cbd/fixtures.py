"""Reference systems: the PR-box, its noncontextual counterpart, their
one-parameter perturbations, and rank-n cyclic systems."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import EpsilonOutOfRange
from .system import ContextDistribution, System, make_ab_system, to_fraction

HALF = Fraction(1, 2)


def _check_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 <= eps <= HALF:
        raise EpsilonOutOfRange(f"epsilon must lie in [0, 1/2], got {eps}")
    return eps


def pr_box() -> System:
    """Perfect correlation in contexts 11, 12, 21; perfect anticorrelation in 22."""
    return perturbed_pr_box(0)


def trivial() -> System:
    """Perfect correlation in all four contexts."""
    return perturbed_trivial(0)


def perturbed_pr_box(epsilon) -> System:
    """PR-box whose context 22 becomes ``(0, 1/2+e; 1/2-e, 0)``."""
    eps = _check_epsilon(epsilon)
    r = {"11": HALF, "12": HALF, "21": HALF, "22": 0}
    p = {"11": HALF, "12": HALF, "21": HALF, "22": HALF + eps}
    q = {"11": HALF, "12": HALF, "21": HALF, "22": HALF - eps}
    return make_ab_system(r, p, q)


def perturbed_trivial(epsilon) -> System:
    """Trivial system whose context 22 becomes ``(1/2+e, 0; 0, 1/2-e)``."""
    eps = _check_epsilon(epsilon)
    r = {"11": HALF, "12": HALF, "21": HALF, "22": HALF + eps}
    return make_ab_system(r, r, r)


def cyclic_system(n: int, anticorrelated: Iterable[int] | None = None) -> System:
    """Rank-``n`` cyclic system with fair marginals.

    Context ``c{i}`` measures ``X{i}`` and ``X{i+1}`` (indices mod ``n``,
    1-based).  Contexts listed in ``anticorrelated`` are perfectly
    anticorrelated, the rest perfectly correlated.  The default makes the
    last context the anticorrelated one.
    """
    if n < 2:
        raise ValueError("a cyclic system needs at least two contexts")
    anti = {n} if anticorrelated is None else set(anticorrelated)
    width = len(str(n))
    contexts = []
    for i in range(1, n + 1):
        first = f"X{i:0{width}d}"
        second = f"X{i % n + 1:0{width}d}"
        if i in anti:
            probs = (0, HALF, HALF, 0)
        else:
            probs = (HALF, 0, 0, HALF)
        contexts.append(ContextDistribution(f"c{i:0{width}d}", (first, second), probs))
    return System(tuple(contexts))


def fixtures(epsilon=Fraction(1, 8)) -> dict[str, System]:
    """All named fixtures; the perturbed ones use ``epsilon``."""
    return {
        "pr_box": pr_box(),
        "trivial": trivial(),
        "perturbed_pr_box": perturbed_pr_box(epsilon),
        "perturbed_trivial": perturbed_trivial(epsilon),
    }
