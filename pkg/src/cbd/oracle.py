"""Slow, independent cross-checks for the coupling pipeline.

Nothing here goes through :mod:`cbd.lp` or the coupling LP layout: the
pair oracle scans the Frechet interval directly, the mixture oracle runs
its own phase-one elimination over deterministic assignments, and the
grid search builds explicit couplings by quantile alignment.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor

from .coupling import DEFAULT_MAX_VARS, Coupling
from .errors import NotConsistentlyConnected, SystemTooLarge, TooManyContents
from .system import System, to_fraction

MAX_MIXTURE_CONTENTS = 12


@dataclass(frozen=True)
class GridSearchResult:
    best_objective: Fraction
    best_coupling: Coupling
    denominator: int


def pair_coupling_bruteforce(p, q, denominator: int) -> Fraction:
    """Largest Pr[X = Y] over 2x2 tables with Pr[X=+1]=p, Pr[Y=+1]=q.

    The free cell ``t = Pr[+,+]`` ranges over ``[max(0, p+q-1), min(p, q)]``;
    it is scanned on the lattice ``k/denominator`` plus both endpoints.
    """
    if denominator < 1:
        raise ValueError("denominator must be >= 1")
    p, q = to_fraction(p), to_fraction(q)
    lo = max(Fraction(0), p + q - 1)
    hi = min(p, q)
    candidates = {lo, hi}
    for k in range(ceil(lo * denominator), floor(hi * denominator) + 1):
        candidates.add(Fraction(k, denominator))
    best = None
    for t in candidates:
        table = (t, p - t, q - t, 1 - p - q + t)
        if min(table) < 0:
            continue
        agree = table[0] + table[3]
        if best is None or agree > best:
            best = agree
    return best


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """True iff ``rows @ x == rhs`` has a solution with ``x >= 0``.

    Plain tableau with one artificial per row and the smallest-subscript
    pivoting rule; written separately from :mod:`cbd.lp` on purpose.
    """
    m = len(rows)
    if m == 0:
        return True
    ncols = len(rows[0])
    table = []
    for r, (row, b) in enumerate(zip(rows, rhs)):
        if b < 0:
            row, b = [-v for v in row], -b
        table.append(list(row) + [Fraction(int(i == r)) for i in range(m)] + [b])
    basic = [ncols + r for r in range(m)]
    width = ncols + m
    # reduced costs of "minimize sum of artificials", expressed as "increase is good"
    gain = [sum((t[j] for t in table), Fraction(0)) for j in range(ncols)] + [Fraction(0)] * m
    infeasibility = sum((t[-1] for t in table), Fraction(0))
    while infeasibility > 0:
        enter = next((j for j in range(width) if gain[j] > 0), None)
        if enter is None:
            return False
        leave, best = None, None
        for r in range(m):
            a = table[r][enter]
            if a > 0:
                ratio = table[r][-1] / a
                if best is None or ratio < best or (ratio == best and basic[r] < basic[leave]):
                    leave, best = r, ratio
        pivot_row = table[leave]
        piv = pivot_row[enter]
        pivot_row[:] = [v / piv for v in pivot_row]
        for r in range(m):
            if r != leave and table[r][enter]:
                f = table[r][enter]
                table[r] = [v - f * w for v, w in zip(table[r], pivot_row)]
        f = gain[enter]
        gain = [g - f * w for g, w in zip(gain, pivot_row[:-1])]
        infeasibility -= f * pivot_row[-1]
        basic[leave] = enter
    return True


def deterministic_mixture_feasible(system: System) -> bool:
    """Is every context distribution a marginal of one mixture of deterministic assignments?"""
    for content in system.contents:
        where = [ctx for ctx in system.contexts if content in ctx.contents]
        if len(where) == 2:
            p = [sum((m for i, m in enumerate(ctx.probs)
                      if not (i >> (ctx.arity - 1 - ctx.contents.index(content))) & 1), Fraction(0))
                 for ctx in where]
            if p[0] != p[1]:
                raise NotConsistentlyConnected(f"content {content!r} has marginals {p[0]} != {p[1]}")
    contents = system.contents
    if len(contents) > MAX_MIXTURE_CONTENTS:
        raise TooManyContents(
            f"{len(contents)} contents; the mixture oracle enumerates 2**n assignments "
            f"and allows at most {MAX_MIXTURE_CONTENTS}"
        )
    assignments = list(product((1, -1), repeat=len(contents)))
    rows, rhs = [], []
    for ctx in system.contexts:
        where = [contents.index(c) for c in ctx.contents]
        for i, outcome in enumerate(product((1, -1), repeat=ctx.arity)):
            rows.append([
                Fraction(int(all(s[w] == v for w, v in zip(where, outcome))))
                for s in assignments
            ])
            rhs.append(ctx.probs[i])
    return _phase_one(rows, rhs)


def _quantile_coupling(system: System, priority: list[str], signs: dict[str, int]) -> dict[int, Fraction]:
    """Couple all contexts through one shared uniform draw.

    Each context lists its outcomes by the ``priority`` order of contents,
    preferring ``signs[c]`` over ``-signs[c]``, lays their masses out along
    [0, 1] and reads off its outcome at a common point.  Returned as a
    sparse map from full atom index to mass.
    """
    layouts = []
    for ctx in system.contexts:
        outcomes = list(enumerate(product((1, -1), repeat=ctx.arity)))
        order = [c for c in priority if c in ctx.contents]
        outcomes.sort(key=lambda it: tuple(
            -it[1][ctx.contents.index(c)] * signs[c] for c in order
        ))
        ends, total = [], Fraction(0)
        for i, _ in outcomes:
            if ctx.probs[i]:
                total += ctx.probs[i]
                ends.append((total, i))
        layouts.append((ctx.arity, ends))
    cuts = sorted({Fraction(0)} | {end for _, ends in layouts for end, _ in ends})
    atoms: dict[int, Fraction] = {}
    for lo, hi in zip(cuts, cuts[1:]):
        index = 0
        for arity, ends in layouts:
            atom = next(i for end, i in ends if end > lo)
            index = (index << arity) | atom
        atoms[index] = atoms.get(index, Fraction(0)) + (hi - lo)
    return atoms


def _product_atoms(system: System) -> dict[int, Fraction]:
    atoms = {0: Fraction(1)}
    for ctx in system.contexts:
        atoms = {
            (idx << ctx.arity) | i: m * p
            for idx, m in atoms.items()
            for i, p in enumerate(ctx.probs)
            if p
        }
    return atoms


def _agreement(system: System, atoms: dict[int, Fraction]) -> Fraction:
    variables = system.variables()
    n = len(variables)
    pairs = []
    for content in system.contents:
        where = [k for k, v in enumerate(variables) if v[0] == content]
        if len(where) == 2:
            pairs.append(tuple(where))
    total = Fraction(0)
    for idx, m in atoms.items():
        bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
        total += m * sum(1 for i, j in pairs if bits[i] == bits[j])
    return total


def grid_search_omega(system: System, denominator: int,
                      max_vars: int = DEFAULT_MAX_VARS) -> GridSearchResult:
    """Lower bound on the best summed connection agreement over couplings.

    Candidates are the product coupling and quantile-aligned couplings for
    every rotation of the content order with every single-content sign
    flip; all pairwise mixtures with weights ``k/denominator`` are scored.
    """
    if denominator < 1:
        raise ValueError("denominator must be >= 1")
    if system.num_variables > max_vars:
        raise SystemTooLarge(f"system has {system.num_variables} variables; the limit is {max_vars}")
    contents = list(system.contents)
    candidates = [_product_atoms(system)]
    sign_choices = [dict.fromkeys(contents, 1)]
    for c in contents:
        flipped = dict.fromkeys(contents, 1)
        flipped[c] = -1
        sign_choices.append(flipped)
    for shift in range(len(contents)):
        priority = contents[shift:] + contents[:shift]
        for signs in sign_choices:
            candidates.append(_quantile_coupling(system, priority, signs))
    scores = [_agreement(system, atoms) for atoms in candidates]

    best = (scores[0], 0, 0, Fraction(1))
    for i in range(len(candidates)):
        for j in range(i, len(candidates)):
            for k in range(denominator + 1):
                lam = Fraction(k, denominator)
                value = lam * scores[i] + (1 - lam) * scores[j]
                if value > best[0]:
                    best = (value, i, j, lam)
    value, i, j, lam = best
    mixed: dict[int, Fraction] = {}
    for weight, atoms in ((lam, candidates[i]), (1 - lam, candidates[j])):
        if weight:
            for idx, m in atoms.items():
                mixed[idx] = mixed.get(idx, Fraction(0)) + weight * m
    dense = [Fraction(0)] * (2 ** system.num_variables)
    for idx, m in mixed.items():
        dense[idx] = m
    return GridSearchResult(value, Coupling(system.variables(), tuple(dense)), denominator)
