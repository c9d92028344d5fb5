"""Content-context systems of dichotomous (+1/-1) random variables.

A system is a list of contexts.  Each context jointly measures an ordered
list of contents and carries an exact joint distribution over the ``2**k``
outcome atoms.  Atom ``i`` is read as a ``k``-bit binary number whose most
significant bit belongs to the first listed content; bit 0 means +1 and
bit 1 means -1.  So for two contents the atoms are ``++, +-, -+, --``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateContent,
    DuplicateContextLabel,
    EmptySystem,
    InvalidTable,
    NegativeProbability,
    NonUnitMass,
    OverconnectedContent,
    ParseError,
    UnknownContent,
    ValidationError,
    WrongArity,
)

Probability = Fraction

ONE = Fraction(1)
ZERO = Fraction(0)


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Accepts integers, rationals, :class:`~decimal.Decimal`, strings such as
    ``"3/8"`` or ``"0.125"`` and floats (read through their shortest repr,
    so ``0.1`` becomes ``1/10``).
    """
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a probability: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {value!r}") from None
    raise ParseError(f"cannot interpret {value!r} as a rational number")


# -- outcome atoms ----------------------------------------------------------

def atom_values(index: int, k: int) -> tuple[int, ...]:
    """Values (+1/-1) of the ``k`` variables at atom ``index``."""
    return tuple(-1 if (index >> (k - 1 - pos)) & 1 else 1 for pos in range(k))


def atom_index(values: Sequence[int]) -> int:
    index = 0
    for v in values:
        if v not in (1, -1):
            raise ValueError(f"dichotomous values must be +1 or -1, got {v!r}")
        index = (index << 1) | (v == -1)
    return index


def outcome_string(index: int, k: int) -> str:
    return "".join("+" if v == 1 else "-" for v in atom_values(index, k))


def parse_outcome(text: str, k: int) -> int:
    if len(text) != k or any(ch not in "+-" for ch in text):
        raise ParseError(f"outcome {text!r} must be {k} characters over '+'/'-'")
    return atom_index([1 if ch == "+" else -1 for ch in text])


# -- domain types -----------------------------------------------------------

@dataclass(frozen=True)
class ContextDistribution:
    """Joint distribution of the contents measured in one context."""

    context: str
    contents: tuple[str, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "contents", tuple(self.contents))
        object.__setattr__(self, "probs", tuple(to_fraction(p) for p in self.probs))
        if not isinstance(self.context, str) or not self.context:
            raise ValidationError("context label must be a nonempty string")
        k = len(self.contents)
        if k == 0:
            raise ValidationError(f"context {self.context!r} measures no contents")
        for c in self.contents:
            if not isinstance(c, str) or not c:
                raise ValidationError(
                    f"context {self.context!r}: content labels must be nonempty strings"
                )
        if len(set(self.contents)) != k:
            raise DuplicateContent(
                f"context {self.context!r} lists a content more than once: {self.contents}"
            )
        if len(self.probs) != 2**k:
            raise ValidationError(
                f"context {self.context!r}: expected {2**k} probabilities, got {len(self.probs)}"
            )
        for i, p in enumerate(self.probs):
            if p < 0:
                raise NegativeProbability(
                    f"context {self.context!r}: Pr[{outcome_string(i, k)}] = {p} < 0"
                )
        total = sum(self.probs, ZERO)
        if total != 1:
            raise NonUnitMass(
                f"context {self.context!r}: probabilities sum to {total}, not 1"
            )

    @property
    def arity(self) -> int:
        return len(self.contents)

    def prob(self, outcome: Sequence[int] | str) -> Fraction:
        if isinstance(outcome, str):
            return self.probs[parse_outcome(outcome, self.arity)]
        return self.probs[atom_index(outcome)]

    def p_plus(self, content: str) -> Fraction:
        """Pr[content = +1] in this context."""
        return marginal(self, [content]).probs[0]

    def as_dict(self) -> dict[str, Fraction]:
        return {outcome_string(i, self.arity): p for i, p in enumerate(self.probs)}


@dataclass(frozen=True)
class System:
    """A content-context system.  Contexts are kept sorted by label."""

    contexts: tuple[ContextDistribution, ...]

    def __post_init__(self):
        contexts = tuple(sorted(self.contexts, key=lambda c: c.context))
        object.__setattr__(self, "contexts", contexts)
        if not contexts:
            raise EmptySystem("a system needs at least one context")
        labels = [c.context for c in contexts]
        for a, b in zip(labels, labels[1:]):
            if a == b:
                raise DuplicateContextLabel(f"context label {a!r} used more than once")
        seen: dict[str, list[str]] = {}
        for ctx in contexts:
            for content in ctx.contents:
                seen.setdefault(content, []).append(ctx.context)
        for content, where in seen.items():
            if len(where) > 2:
                raise OverconnectedContent(
                    f"content {content!r} appears in {len(where)} contexts {where}; "
                    "at most two are supported"
                )

    @property
    def contents(self) -> tuple[str, ...]:
        return tuple(sorted({c for ctx in self.contexts for c in ctx.contents}))

    @property
    def context_labels(self) -> tuple[str, ...]:
        return tuple(c.context for c in self.contexts)

    @property
    def num_variables(self) -> int:
        return sum(c.arity for c in self.contexts)

    def context(self, label: str) -> ContextDistribution:
        for ctx in self.contexts:
            if ctx.context == label:
                return ctx
        raise KeyError(label)

    def contexts_of(self, content: str) -> tuple[str, ...]:
        return tuple(c.context for c in self.contexts if content in c.contents)

    def variables(self) -> tuple[tuple[str, str], ...]:
        """All (content, context) variables, context by context."""
        return tuple((content, c.context) for c in self.contexts for content in c.contents)


@dataclass(frozen=True)
class Connection:
    """A content measured in exactly two contexts, with both +1 marginals."""

    content: str
    context_a: str
    context_b: str
    p_a: Fraction
    p_b: Fraction

    @property
    def delta(self) -> Fraction:
        return abs(self.p_a - self.p_b)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    connections: tuple[Connection, ...]

    def __bool__(self) -> bool:
        return self.consistent


@dataclass(frozen=True)
class SampleSpace:
    """Finite probability space carrying the two variables of one context."""

    points: tuple[str, ...]
    mass: tuple[Fraction, ...]
    variables: tuple[tuple[str, tuple[int, ...]], ...] = field(default=())
    context: str = ""

    def value(self, content: str, point: str) -> int:
        values = dict(self.variables)[content]
        return values[self.points.index(point)]

    def pushforward(self) -> ContextDistribution:
        """Distribution induced on the variables by the mass function."""
        contents = [name for name, _ in self.variables]
        probs = [ZERO] * (2 ** len(contents))
        for pos, m in enumerate(self.mass):
            probs[atom_index([vals[pos] for _, vals in self.variables])] += m
        return ContextDistribution(self.context, tuple(contents), tuple(probs))


# -- operations -------------------------------------------------------------

def _context_from_raw(raw: Mapping) -> ContextDistribution:
    if not isinstance(raw, Mapping):
        raise ParseError(f"context entry must be an object, got {type(raw).__name__}")
    try:
        label = raw["id"]
        contents = raw["contents"]
        probabilities = raw["probabilities"]
    except KeyError as exc:
        raise ParseError(f"context entry is missing field {exc.args[0]!r}") from None
    if not isinstance(label, str):
        raise ParseError(f"context id must be a string, got {label!r}")
    if isinstance(contents, str) or not isinstance(contents, Sequence):
        raise ParseError(f"context {label!r}: 'contents' must be a list of strings")
    contents = tuple(contents)
    if any(not isinstance(c, str) for c in contents):
        raise ParseError(f"context {label!r}: 'contents' must be a list of strings")
    k = len(contents)
    if isinstance(probabilities, Mapping):
        probs = [ZERO] * (2**k)
        for outcome, value in probabilities.items():
            try:
                index = parse_outcome(outcome, k)
                probs[index] = to_fraction(value)
            except ParseError as exc:
                raise ParseError(f"context {label!r}, probabilities[{outcome!r}]: {exc}") from None
    elif isinstance(probabilities, Sequence) and not isinstance(probabilities, str):
        try:
            probs = [to_fraction(v) for v in probabilities]
        except ParseError as exc:
            raise ParseError(f"context {label!r}, probabilities: {exc}") from None
    else:
        raise ParseError(f"context {label!r}: 'probabilities' must be an object or list")
    return ContextDistribution(label, contents, tuple(probs))


def validate_system(raw) -> System:
    """Build a validated :class:`System` from a loose description.

    ``raw`` may already be a :class:`System`, an iterable of
    :class:`ContextDistribution`, or a mapping in the JSON layout
    ``{"contexts": [{"id", "contents", "probabilities"}, ...]}`` where
    ``probabilities`` maps outcome strings such as ``"+-"`` to rationals
    (missing outcomes are zero) or lists all ``2**k`` atoms in order.
    """
    if isinstance(raw, System):
        return System(raw.contexts)
    if isinstance(raw, Mapping):
        if "contexts" not in raw:
            raise ParseError("system description is missing the 'contexts' field")
        entries = raw["contexts"]
        if isinstance(entries, (str, Mapping)) or not isinstance(entries, Iterable):
            raise ParseError("'contexts' must be a list")
        contexts = [
            e if isinstance(e, ContextDistribution) else _context_from_raw(e)
            for e in entries
        ]
    elif isinstance(raw, Iterable) and not isinstance(raw, (str, bytes)):
        contexts = list(raw)
        if not all(isinstance(c, ContextDistribution) for c in contexts):
            raise ParseError("expected an iterable of ContextDistribution")
    else:
        raise ParseError(f"cannot build a system from {type(raw).__name__}")
    return System(tuple(contexts))


def marginal(dist: ContextDistribution, subset: Sequence[str]) -> ContextDistribution:
    """Marginal distribution of ``dist`` over ``subset``, in the given order."""
    subset = tuple(subset)
    if not subset:
        raise UnknownContent("marginal needs a nonempty list of contents")
    if len(set(subset)) != len(subset):
        raise DuplicateContent(f"marginal subset repeats a content: {subset}")
    missing = [c for c in subset if c not in dist.contents]
    if missing:
        raise UnknownContent(f"context {dist.context!r} does not measure {missing}")
    positions = [dist.contents.index(c) for c in subset]
    k = dist.arity
    probs = [ZERO] * (2 ** len(subset))
    for i, p in enumerate(dist.probs):
        if p:
            values = atom_values(i, k)
            probs[atom_index([values[pos] for pos in positions])] += p
    return ContextDistribution(dist.context, subset, tuple(probs))


def connections(system: System) -> list[Connection]:
    """One connection per content measured in two contexts, sorted by content."""
    result = []
    for content in system.contents:
        where = system.contexts_of(content)
        if len(where) == 2:
            a, b = sorted(where)
            result.append(
                Connection(
                    content,
                    a,
                    b,
                    system.context(a).p_plus(content),
                    system.context(b).p_plus(content),
                )
            )
    return result


def is_consistently_connected(system: System) -> ConsistencyReport:
    conns = tuple(connections(system))
    return ConsistencyReport(all(c.p_a == c.p_b for c in conns), conns)


def canonical_sample_space(dist: ContextDistribution) -> SampleSpace:
    """Four-point space ``{a, b, c, d}`` carrying a two-variable context.

    With ``r = Pr[+,+]``, ``p`` and ``q`` the +1 marginals of the first and
    second variable, the masses are ``r, p-r, q-r, 1-p-q+r``.  The first
    variable is +1 on ``{a, b}``, the second on ``{a, c}``.
    """
    if dist.arity != 2:
        raise WrongArity(
            f"context {dist.context!r} has {dist.arity} contents; the canonical "
            "sample space needs exactly two"
        )
    first, second = dist.contents
    r = dist.probs[0]
    p = dist.p_plus(first)
    q = dist.p_plus(second)
    return SampleSpace(
        points=("a", "b", "c", "d"),
        mass=(r, p - r, q - r, 1 - p - q + r),
        variables=((first, (1, 1, -1, -1)), (second, (1, -1, 1, -1))),
        context=dist.context,
    )


# -- the Alice/Bob 2x2 family -----------------------------------------------

AB_CONTEXTS = ("11", "12", "21", "22")


def alice(i: int) -> str:
    return f"Alice-{i}"


def bob(j: int) -> str:
    return f"Bob-{j}"


def _ab_param(table, i: int, j: int):
    if isinstance(table, Mapping):
        for key in ((i, j), f"{i}{j}"):
            if key in table:
                return table[key]
        raise InvalidTable(f"missing parameter for context {i}{j}")
    return table[i - 1][j - 1]


def make_ab_system(r, p, q) -> System:
    """Four-context Alice/Bob system built from 2x2 tables.

    In context ``ij`` Alice measures setting ``i`` and Bob setting ``j``;
    ``r[ij] = Pr[A=+1, B=+1]``, ``p[ij] = Pr[A=+1]`` and ``q[ij] = Pr[B=+1]``.
    Each of ``r``, ``p``, ``q`` is either a mapping keyed by ``(i, j)`` / ``"ij"``
    or a nested 2x2 sequence indexed ``[i-1][j-1]``.
    """
    contexts = []
    for label in AB_CONTEXTS:
        i, j = int(label[0]), int(label[1])
        rij = to_fraction(_ab_param(r, i, j))
        pij = to_fraction(_ab_param(p, i, j))
        qij = to_fraction(_ab_param(q, i, j))
        cells = (rij, pij - rij, qij - rij, 1 - pij - qij + rij)
        for name, value in zip(("r", "p", "q"), (rij, pij, qij)):
            if not 0 <= value <= 1:
                raise InvalidTable(f"context {label}: {name} = {value} outside [0, 1]")
        for outcome, cell in zip(("++", "+-", "-+", "--"), cells):
            if not 0 <= cell <= 1:
                raise InvalidTable(f"context {label}: Pr[{outcome}] = {cell} outside [0, 1]")
        contexts.append(ContextDistribution(label, (alice(i), bob(j)), cells))
    return System(tuple(contexts))


def make_consistent_ab_system(r, p: Sequence, q: Sequence) -> System:
    """Consistently connected special case: ``p[i-1]`` and ``q[j-1]`` do not depend on the other party's setting."""
    p_full = {(i, j): p[i - 1] for i, j in product((1, 2), repeat=2)}
    q_full = {(i, j): q[j - 1] for i, j in product((1, 2), repeat=2)}
    return make_ab_system(r, p_full, q_full)
