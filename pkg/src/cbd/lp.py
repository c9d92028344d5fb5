"""Exact two-phase simplex over the rationals.

Problems are stated as ``maximize c.x`` subject to linear constraints with
relations ``<=``, ``=`` or ``>=`` and ``x >= 0``.  Pivoting uses Bland's
smallest-index rule, so the method terminates on degenerate polytopes.
Arithmetic runs on ``gmpy2.mpq`` when available and on
:class:`fractions.Fraction` otherwise; results are always returned as
``Fraction``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import DimensionMismatch, SystemTooLarge
from .system import to_fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 ships with the supported envs
    _Q = Fraction

DEFAULT_MAX_COLUMNS = 65_536

Coefficients = Union[Sequence, Mapping[int, object]]

_RELATIONS = {"<=": "<=", "≤": "<=", "=": "=", "==": "=", ">=": ">=", "≥": ">="}


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction


def make_constraint(coefficients: Coefficients, relation: str, rhs, num_vars: int) -> Constraint:
    """Normalize a constraint; ``coefficients`` may be dense or ``{index: value}``."""
    if relation not in _RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if isinstance(coefficients, Mapping):
        dense = [Fraction(0)] * num_vars
        for j, v in coefficients.items():
            if not 0 <= j < num_vars:
                raise DimensionMismatch(f"coefficient index {j} outside 0..{num_vars - 1}")
            dense[j] = to_fraction(v)
    else:
        if len(coefficients) != num_vars:
            raise DimensionMismatch(
                f"constraint has {len(coefficients)} coefficients, expected {num_vars}"
            )
        dense = [to_fraction(v) for v in coefficients]
    return Constraint(tuple(dense), _RELATIONS[relation], to_fraction(rhs))


@dataclass(frozen=True)
class LinearProgram:
    """``maximize objective.x`` subject to ``constraints`` and ``x >= 0``."""

    num_vars: int
    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise DimensionMismatch("a linear program needs at least one variable")
        if len(self.objective) != self.num_vars:
            raise DimensionMismatch(
                f"objective has {len(self.objective)} coefficients, expected {self.num_vars}"
            )
        object.__setattr__(self, "objective", tuple(to_fraction(v) for v in self.objective))
        cons = []
        for c in self.constraints:
            if not isinstance(c, Constraint):
                c = make_constraint(*c, num_vars=self.num_vars)
            elif len(c.coefficients) != self.num_vars:
                raise DimensionMismatch(
                    f"constraint has {len(c.coefficients)} coefficients, expected {self.num_vars}"
                )
            cons.append(c)
        object.__setattr__(self, "constraints", tuple(cons))

    @classmethod
    def build(cls, num_vars: int, objective=None, constraints=()) -> "LinearProgram":
        """Convenience constructor taking ``(coefficients, relation, rhs)`` triples."""
        if objective is None:
            objective = [0] * num_vars
        elif isinstance(objective, Mapping):
            dense = [0] * num_vars
            for j, v in objective.items():
                dense[j] = v
            objective = dense
        return cls(
            num_vars,
            tuple(objective),
            tuple(make_constraint(*c, num_vars=num_vars) for c in constraints),
        )

    def is_satisfied_by(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars or any(v < 0 for v in x):
            return False
        for c in self.constraints:
            lhs = sum((a * v for a, v in zip(c.coefficients, x) if a), Fraction(0))
            if c.relation == "=" and lhs != c.rhs:
                return False
            if c.relation == "<=" and lhs > c.rhs:
                return False
            if c.relation == ">=" and lhs < c.rhs:
                return False
        return True

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.objective, x) if a), Fraction(0))


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    pivots: int = 0


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.feasible


class _Tableau:
    """Dense simplex tableau; ``cost`` holds reduced costs and ``-value`` in its last slot."""

    def __init__(self, rows, basis, cost):
        self.rows = rows
        self.basis = basis
        self.cost = cost
        self.pivots = 0

    def pivot(self, r: int, e: int) -> None:
        row = self.rows[r]
        inv = 1 / row[e]
        if inv != 1:
            row = [v * inv if v else v for v in row]
            self.rows[r] = row
        support = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[e]
                if f:
                    for j in support:
                        other[j] -= f * row[j]
        f = self.cost[e]
        if f:
            cost = self.cost
            for j in support:
                cost[j] -= f * row[j]
        self.basis[r] = e
        self.pivots += 1

    def entering(self, allowed: int) -> int | None:
        cost = self.cost
        for j in range(allowed):
            if cost[j] > 0:
                return j
        return None

    def leaving(self, e: int) -> int | None:
        best = None
        best_ratio = None
        for i, row in enumerate(self.rows):
            a = row[e]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best])
                ):
                    best, best_ratio = i, ratio
        return best

    def run(self, allowed: int) -> bool:
        """Pivot to optimality over the first ``allowed`` columns; False if unbounded."""
        while True:
            e = self.entering(allowed)
            if e is None:
                return True
            r = self.leaving(e)
            if r is None:
                return False
            self.pivot(r, e)

    def reset_cost(self, objective) -> None:
        width = len(self.rows[0]) if self.rows else len(objective) + 1
        cost = [_Q(0)] * width
        for j, c in enumerate(objective):
            cost[j] = c
        for i, b in enumerate(self.basis):
            cb = objective[b] if b < len(objective) else 0
            if cb:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        cost[j] -= cb * v
        self.cost = cost


def _standard_form(lp: LinearProgram):
    """Rows with nonnegative right-hand sides, plus slack/surplus/artificial layout."""
    n = lp.num_vars
    prepared = []
    for c in lp.constraints:
        coeffs = [_Q(v) for v in c.coefficients]
        rhs = _Q(c.rhs)
        rel = c.relation
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        prepared.append((coeffs, rel, rhs))
    n_slack = sum(1 for _, rel, _ in prepared if rel != "=")
    n_art = sum(1 for _, rel, _ in prepared if rel != "<=")
    width = n + n_slack + n_art + 1
    rows, basis = [], []
    s = n
    a = n + n_slack
    for coeffs, rel, rhs in prepared:
        row = coeffs + [_Q(0)] * (width - n)
        row[-1] = rhs
        if rel == "<=":
            row[s] = _Q(1)
            basis.append(s)
            s += 1
        else:
            if rel == ">=":
                row[s] = _Q(-1)
                s += 1
            row[a] = _Q(1)
            basis.append(a)
            a += 1
        rows.append(row)
    return rows, basis, n + n_slack, n_art


def solve(lp: LinearProgram, max_columns: int = DEFAULT_MAX_COLUMNS) -> LpOutcome:
    """Solve ``lp`` exactly; the returned solution is a basic feasible solution."""
    if lp.num_vars > max_columns:
        raise SystemTooLarge(
            f"linear program has {lp.num_vars} variables, above the cap of {max_columns}"
        )
    n = lp.num_vars
    rows, basis, n_struct, n_art = _standard_form(lp)
    tab = _Tableau(rows, basis, [])

    if n_art:
        # phase one: maximize minus the sum of artificials
        phase_one = [_Q(0)] * n_struct + [_Q(-1)] * n_art
        tab.reset_cost(phase_one)
        tab.run(n_struct + n_art)
        if tab.cost[-1] != 0:
            return LpOutcome(Status.INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n_struct:
                row = tab.rows[i]
                e = next((j for j in range(n_struct) if row[j]), None)
                if e is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, e)
            i += 1
        keep = n_struct
        tab.rows = [row[:keep] + [row[-1]] for row in tab.rows]

    objective = [_Q(v) for v in lp.objective] + [_Q(0)] * (n_struct - n)
    tab.reset_cost(objective)
    if not tab.run(n_struct):
        return LpOutcome(Status.UNBOUNDED, pivots=tab.pivots)

    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = Fraction(tab.rows[i][-1])
    return LpOutcome(Status.OPTIMAL, -Fraction(tab.cost[-1]), tuple(x), tab.pivots)


def check_feasible(constraints, num_vars: int | None = None,
                   max_columns: int = DEFAULT_MAX_COLUMNS) -> Feasibility:
    """Phase-one feasibility test for ``constraints`` with ``x >= 0``.

    ``constraints`` holds :class:`Constraint` objects or
    ``(coefficients, relation, rhs)`` triples; ``num_vars`` is inferred from
    the first dense coefficient vector when omitted.
    """
    constraints = list(constraints)
    if num_vars is None:
        if not constraints:
            raise DimensionMismatch("cannot infer the number of variables")
        first = constraints[0]
        coeffs = first.coefficients if isinstance(first, Constraint) else first[0]
        if isinstance(coeffs, Mapping):
            raise DimensionMismatch("num_vars is required with sparse coefficients")
        num_vars = len(coeffs)
    lp = LinearProgram(num_vars, (Fraction(0),) * num_vars, tuple(constraints))
    outcome = solve(lp, max_columns=max_columns)
    if outcome.status is Status.OPTIMAL:
        return Feasibility(True, outcome.solution)
    return Feasibility(False)
