"""Couplings of content-context systems and the CNTX contextuality measure.

A coupling of a system is one joint distribution over every variable of
every context whose restriction to each context reproduces that context's
distribution.  The system is noncontextual when some coupling makes every
pair of same-content variables coincide as often as their maximal
coupling allows; CNTX measures the shortfall of the best coupling.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotConsistentlyConnected, SystemTooLarge
from .lp import LinearProgram, Status, check_feasible, make_constraint, solve
from .system import (
    Connection,
    ContextDistribution,
    System,
    atom_index,
    atom_values,
    connections,
    is_consistently_connected,
    to_fraction,
)

DEFAULT_MAX_VARS = 16

ZERO = Fraction(0)


@dataclass(frozen=True)
class PairCoupling:
    """2x2 joint table of two +1/-1 variables, rows/columns ordered ``+1, -1``."""

    table: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    @property
    def equality_prob(self) -> Fraction:
        return self.table[0][0] + self.table[1][1]


@dataclass(frozen=True)
class Coupling:
    """Joint distribution over ``variables``; atoms follow the usual bit layout."""

    variables: tuple[tuple[str, str], ...]
    atoms: tuple[Fraction, ...]

    def _positions(self, wanted: Sequence[tuple[str, str]]) -> list[int]:
        return [self.variables.index(v) for v in wanted]

    def marginal(self, wanted: Sequence[tuple[str, str]]) -> tuple[Fraction, ...]:
        """Distribution of the ``wanted`` variables, as a ``2**len(wanted)`` vector."""
        positions = self._positions(wanted)
        n = len(self.variables)
        out = [ZERO] * (2 ** len(positions))
        for a, mass in enumerate(self.atoms):
            if mass:
                values = atom_values(a, n)
                out[atom_index([values[p] for p in positions])] += mass
        return tuple(out)

    def context_marginal(self, dist: ContextDistribution) -> ContextDistribution:
        wanted = [(c, dist.context) for c in dist.contents]
        return ContextDistribution(dist.context, dist.contents, self.marginal(wanted))

    def equality_probability(self, first: tuple[str, str], second: tuple[str, str]) -> Fraction:
        table = self.marginal([first, second])
        return table[0] + table[3]

    def is_coupling_of(self, system: System) -> bool:
        if set(self.variables) != set(system.variables()):
            return False
        if any(a < 0 for a in self.atoms) or sum(self.atoms, ZERO) != 1:
            return False
        return all(self.context_marginal(ctx) == ctx for ctx in system.contexts)


@dataclass(frozen=True)
class CbdReport:
    connections: tuple[Connection, ...]
    omegas: tuple[Fraction, ...]
    omega_primes: tuple[Fraction, ...]
    cntx: Fraction
    contextual: bool
    witness: Coupling

    @property
    def consistent(self) -> bool:
        return all(c.p_a == c.p_b for c in self.connections)


@dataclass(frozen=True)
class ReducedCoupling:
    """Outcome of the reduced-coupling search: one variable per content."""

    feasible: bool
    witness: ContextDistribution | None = None

    def __bool__(self) -> bool:
        return self.feasible


# -- pairwise maximal couplings ---------------------------------------------

def maximal_coupling(p, q) -> PairCoupling:
    """Coupling of two variables with Pr[+1] = ``p`` and ``q`` maximizing Pr[equal]."""
    p, q = to_fraction(p), to_fraction(q)
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError(f"marginals must lie in [0, 1], got {p}, {q}")
    m = min(p, q)
    return PairCoupling(((m, p - m), (q - m, 1 - p - q + m)))


def omega_vector(system: System) -> tuple[Fraction, ...]:
    """Maximal equality probability ``1 - |p_a - p_b|`` of each connection."""
    return tuple(maximal_coupling(c.p_a, c.p_b).equality_prob for c in connections(system))


# -- the overall-coupling linear program -------------------------------------

@dataclass(frozen=True)
class CouplingLayout:
    """How coupling atoms are laid out for the LP.

    Contents measured in only one context are marginalized out: they add
    no objective terms and any coupling of the rest extends to them by
    drawing their values from each context's conditional distribution.
    """

    variables: tuple[tuple[str, str], ...]
    context_positions: tuple[tuple[ContextDistribution, tuple[int, ...]], ...]
    connection_positions: tuple[tuple[int, int], ...]
    connections: tuple[Connection, ...]

    @property
    def num_atoms(self) -> int:
        return 2 ** len(self.variables)


def _check_size(system: System, max_vars: int) -> None:
    if system.num_variables > max_vars:
        raise SystemTooLarge(
            f"system has {system.num_variables} variables; the limit is {max_vars} "
            f"(a coupling has 2**n atoms)"
        )


def coupling_layout(system: System) -> CouplingLayout:
    conns = tuple(connections(system))
    linked = {c.content for c in conns}
    variables = tuple(v for v in system.variables() if v[0] in linked)
    index = {v: i for i, v in enumerate(variables)}
    ctx_pos = tuple(
        (ctx, tuple(index[(c, ctx.context)] for c in ctx.contents if c in linked))
        for ctx in system.contexts
    )
    conn_pos = tuple(
        (index[(c.content, c.context_a)], index[(c.content, c.context_b)]) for c in conns
    )
    return CouplingLayout(variables, ctx_pos, conn_pos, conns)


def _bit(atom: int, pos: int, n: int) -> int:
    return (atom >> (n - 1 - pos)) & 1


def _restrict(atom: int, positions: Sequence[int], n: int) -> int:
    out = 0
    for p in positions:
        out = (out << 1) | _bit(atom, p, n)
    return out


def _reduced_probs(ctx: ContextDistribution, positions_in_ctx: Sequence[int]) -> list[Fraction]:
    k = ctx.arity
    out = [ZERO] * (2 ** len(positions_in_ctx))
    for t, mass in enumerate(ctx.probs):
        if mass:
            out[_restrict(t, positions_in_ctx, k)] += mass
    return out


def _linked_positions_in_context(ctx: ContextDistribution, layout: CouplingLayout) -> tuple[int, ...]:
    linked = {v[0] for v in layout.variables if v[1] == ctx.context}
    return tuple(i for i, c in enumerate(ctx.contents) if c in linked)


def build_coupling_lp(system: System, max_vars: int = DEFAULT_MAX_VARS) -> LinearProgram:
    """LP over coupling atoms maximizing the summed connection equality probabilities.

    One equality constraint per context and per outcome of its connected
    variables (a context with none left contributes ``sum(atoms) = 1``).
    LP column ``j`` is atom ``coupling_columns(layout)[j]``.
    """
    _check_size(system, max_vars)
    return _build_lp(coupling_layout(system))


def _agreements(layout: CouplingLayout) -> list[int]:
    n = len(layout.variables)
    return [
        sum(1 for i, j in layout.connection_positions if _bit(a, i, n) == _bit(a, j, n))
        for a in range(layout.num_atoms)
    ]


def coupling_columns(layout: CouplingLayout) -> list[int]:
    """Atoms in LP column order: most agreeing connections first.

    Bland's rule is valid under any fixed variable order; putting
    high-objective atoms first cuts the pivot count by orders of magnitude
    on these degenerate polytopes.
    """
    score = _agreements(layout)
    return sorted(range(layout.num_atoms), key=lambda a: (-score[a], a))


def _build_lp(layout: CouplingLayout) -> LinearProgram:
    n = len(layout.variables)
    score = _agreements(layout)
    columns = coupling_columns(layout)
    num_atoms = layout.num_atoms
    constraints = []
    for ctx, positions in layout.context_positions:
        target = _reduced_probs(ctx, _linked_positions_in_context(ctx, layout))
        rows: list[dict[int, int]] = [{} for _ in target]
        for col, a in enumerate(columns):
            rows[_restrict(a, positions, n)][col] = 1
        for row, rhs in zip(rows, target):
            constraints.append(make_constraint(row, "=", rhs, num_atoms))
    objective = tuple(score[a] for a in columns)
    return LinearProgram(num_atoms, objective, tuple(constraints))


def _equality_probs(layout: CouplingLayout, atoms: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(layout.variables)
    out = []
    for i, j in layout.connection_positions:
        out.append(sum((m for a, m in enumerate(atoms) if m and _bit(a, i, n) == _bit(a, j, n)), ZERO))
    return tuple(out)


def _lift(system: System, layout: CouplingLayout, atoms: Sequence[Fraction]) -> Coupling:
    """Extend a coupling of the connected variables to all variables."""
    n = len(layout.variables)
    per_context = []
    for ctx, positions in layout.context_positions:
        linked_in_ctx = _linked_positions_in_context(ctx, layout)
        reduced = _reduced_probs(ctx, linked_in_ctx)
        conditional: dict[int, list[tuple[int, Fraction]]] = {}
        for t, mass in enumerate(ctx.probs):
            if mass:
                o = _restrict(t, linked_in_ctx, ctx.arity)
                conditional.setdefault(o, []).append((t, mass / reduced[o]))
        per_context.append((ctx.arity, positions, conditional))

    full: dict[int, Fraction] = {}
    for a, mass in enumerate(atoms):
        if not mass:
            continue
        partial = [(0, mass)]
        for arity, positions, conditional in per_context:
            o = _restrict(a, positions, n)
            partial = [
                ((prefix << arity) | t, m * w)
                for prefix, m in partial
                for t, w in conditional[o]
            ]
        for idx, m in partial:
            full[idx] = full.get(idx, ZERO) + m
    dense = [ZERO] * (2 ** system.num_variables)
    for idx, m in full.items():
        dense[idx] = m
    return Coupling(system.variables(), tuple(dense))


def analyze(system: System, max_vars: int = DEFAULT_MAX_VARS) -> CbdReport:
    """Maximal couplings, best overall coupling, CNTX and the verdict."""
    _check_size(system, max_vars)
    layout = coupling_layout(system)
    lp = _build_lp(layout)
    outcome = solve(lp)
    if outcome.status is not Status.OPTIMAL:  # pragma: no cover - product coupling is always feasible
        raise RuntimeError(f"coupling LP unexpectedly {outcome.status.value}")
    atoms = [ZERO] * layout.num_atoms
    for a, x in zip(coupling_columns(layout), outcome.solution):
        atoms[a] = x
    omegas = tuple(maximal_coupling(c.p_a, c.p_b).equality_prob for c in layout.connections)
    omega_primes = _equality_probs(layout, atoms)
    cntx = sum(omegas, ZERO) - outcome.value
    return CbdReport(
        connections=layout.connections,
        omegas=omegas,
        omega_primes=omega_primes,
        cntx=cntx,
        contextual=cntx > 0,
        witness=_lift(system, layout, atoms),
    )


def cntx(system: System, max_vars: int = DEFAULT_MAX_VARS) -> Fraction:
    return analyze(system, max_vars=max_vars).cntx


def product_coupling(system: System, max_vars: int = DEFAULT_MAX_VARS) -> Coupling:
    """Coupling in which the contexts are mutually independent."""
    _check_size(system, max_vars)
    atoms = [Fraction(1)]
    for ctx in system.contexts:
        atoms = [a * p for a in atoms for p in ctx.probs]
    return Coupling(system.variables(), tuple(atoms))


def coupling_objective(system: System, coupling: Coupling) -> Fraction:
    """Sum over connections of Pr[the two variables agree] under ``coupling``."""
    return sum(
        (
            coupling.equality_probability((c.content, c.context_a), (c.content, c.context_b))
            for c in connections(system)
        ),
        ZERO,
    )


def reduced_coupling_feasible(system: System, max_vars: int = DEFAULT_MAX_VARS) -> ReducedCoupling:
    """Search for one joint distribution with a single variable per content.

    Only meaningful for consistently connected systems, where its
    existence is equivalent to noncontextuality.
    """
    if not is_consistently_connected(system):
        raise NotConsistentlyConnected(
            "a reduced coupling requires identical marginals for same-content variables"
        )
    contents = system.contents
    n = len(contents)
    if n > max_vars:
        raise SystemTooLarge(f"system has {n} contents; the limit is {max_vars}")
    num_atoms = 2**n
    constraints = []
    for ctx in system.contexts:
        positions = [contents.index(c) for c in ctx.contents]
        rows: list[dict[int, int]] = [{} for _ in ctx.probs]
        for a in range(num_atoms):
            rows[_restrict(a, positions, n)][a] = 1
        for row, rhs in zip(rows, ctx.probs):
            constraints.append(make_constraint(row, "=", rhs, num_atoms))
    result = check_feasible(constraints, num_vars=num_atoms)
    if not result.feasible:
        return ReducedCoupling(False)
    return ReducedCoupling(True, ContextDistribution("reduced", contents, result.witness))
