"""Closed-form CHSH criterion for consistently connected rank-4 cyclic systems."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import NotConsistentlyConnected, WrongArity, WrongShape
from .system import ContextDistribution, System, atom_values, connections, is_consistently_connected

# sign patterns over four expectations with an odd number of minus signs
ODD_SIGN_PATTERNS = tuple(
    signs for signs in product((1, -1), repeat=4) if signs.count(-1) % 2 == 1
)


@dataclass(frozen=True)
class ChshReport:
    contexts: tuple[str, ...]
    expectations: tuple[Fraction, ...]
    s_value: Fraction
    contextual: bool
    patterns_examined: int = len(ODD_SIGN_PATTERNS)


def expectation_product(dist: ContextDistribution) -> Fraction:
    """E[X Y] for a context with exactly two variables."""
    if dist.arity != 2:
        raise WrongArity(f"context {dist.context!r} has {dist.arity} contents, expected 2")
    total = Fraction(0)
    for i, p in enumerate(dist.probs):
        x, y = atom_values(i, 2)
        total += x * y * p
    return total


def cycle_order(system: System) -> tuple[str, ...]:
    """Contexts of a rank-4 cyclic system, or :class:`WrongShape`.

    The system must have four two-content contexts and four contents, each
    shared by exactly two contexts, with the contexts forming one 4-cycle
    when joined through shared contents.  Contexts are returned by label.
    """
    if len(system.contexts) != 4:
        raise WrongShape(f"expected 4 contexts, found {len(system.contexts)}")
    if any(ctx.arity != 2 for ctx in system.contexts):
        raise WrongShape("every context must measure exactly two contents")
    conns = connections(system)
    if len(system.contents) != 4 or len(conns) != 4:
        raise WrongShape("expected 4 contents, each measured in exactly two contexts")
    neighbours: dict[str, set[str]] = {label: set() for label in system.context_labels}
    for c in conns:
        neighbours[c.context_a].add(c.context_b)
        neighbours[c.context_b].add(c.context_a)
    if any(len(n) != 2 for n in neighbours.values()):
        raise WrongShape("connection graph is not a single 4-cycle")
    start = system.context_labels[0]
    seen = {start}
    frontier = [start]
    while frontier:
        for nxt in neighbours[frontier.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    if len(seen) != 4:
        raise WrongShape("connection graph is not a single 4-cycle")
    return system.context_labels


def chsh(system: System) -> ChshReport:
    labels = cycle_order(system)
    if not is_consistently_connected(system):
        raise NotConsistentlyConnected(
            "the CHSH criterion applies to consistently connected systems only"
        )
    expectations = tuple(expectation_product(system.context(label)) for label in labels)
    s_value = max(
        sum((s * e for s, e in zip(signs, expectations)), Fraction(0))
        for signs in ODD_SIGN_PATTERNS
    )
    return ChshReport(labels, expectations, s_value, s_value > 2)


def is_chsh_shaped(system: System) -> bool:
    try:
        cycle_order(system)
    except WrongShape:
        return False
    return True
