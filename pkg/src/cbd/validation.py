"""Input checking helpers in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path

from .errors import ParseError
from .system import ContextDistribution, System, validate_system


def check_system(X) -> System:
    """Coerce ``X`` into a validated :class:`System`.

    Accepts a ``System``, a mapping in the JSON layout, JSON text or bytes,
    a path to a JSON file, or an iterable of :class:`ContextDistribution`.
    """
    from .jsonio import load_system, parse_system

    if isinstance(X, System):
        return X
    if isinstance(X, Path):
        return load_system(X)
    if isinstance(X, bytes):
        return parse_system(X)
    if isinstance(X, str):
        if X.lstrip().startswith("{"):
            return parse_system(X)
        return load_system(X)
    if isinstance(X, Mapping):
        return validate_system(X)
    try:
        items = list(X)
    except TypeError:
        raise ParseError(f"cannot interpret {type(X).__name__} as a system") from None
    if items and all(isinstance(c, ContextDistribution) for c in items):
        return validate_system(items)
    raise ParseError(f"cannot interpret {type(X).__name__} as a system")


def check_systems(X) -> list[System]:
    """Coerce a single system or a batch of systems into a list."""
    if isinstance(X, (System, Mapping, str, bytes, Path)):
        return [check_system(X)]
    items = list(X)
    if items and all(isinstance(c, ContextDistribution) for c in items):
        return [check_system(items)]
    return [check_system(x) for x in items]
