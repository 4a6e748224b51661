"""Resource budgets, scoped with a context variable."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budgets:
    max_pairs: int = 50_000
    max_degree: int = 40
    max_minor_size: int = 8
    max_tor_index: int = 6


_current = contextvars.ContextVar("fiberflat_budgets", default=Budgets())


def budgets() -> Budgets:
    return _current.get()


@contextlib.contextmanager
def use_budgets(**overrides):
    """Temporarily override budget fields, e.g. ``use_budgets(max_pairs=100)``."""
    token = _current.set(replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
