"""Resource budgets, the cooperative deadline, and budget exceptions.

Every exhausted budget surfaces as an ``unknown`` verdict; nothing here is
allowed to turn into a wrong answer.
"""

from __future__ import annotations

import time
from contextvars import ContextVar
from dataclasses import dataclass


class BudgetExceeded(Exception):
    """Base class for resource exhaustion. Callers report ``unknown``."""

    reason = "budget"


class StateBudgetExceeded(BudgetExceeded):
    reason = "state budget"


class CubeBudgetExceeded(BudgetExceeded):
    reason = "cube budget"


class ProgressionCapExceeded(BudgetExceeded):
    reason = "progression cap"


class LengthModelBudgetExceeded(BudgetExceeded):
    reason = "length-model budget"


class DeadlineExceeded(BudgetExceeded):
    reason = "timeout"


@dataclass(frozen=True)
class Budgets:
    max_cubes: int = 4096
    max_states: int = 1_000_000
    max_lia_nodes: int = 100_000
    max_length_models: int = 10_000
    max_progressions: int = 64
    timeout: float | None = None

    def __post_init__(self):
        for name in ("max_cubes", "max_states", "max_lia_nodes", "max_length_models", "max_progressions"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")


class Deadline:
    """Wall-clock deadline polled every ``stride`` calls to :meth:`tick`."""

    def __init__(self, seconds: float | None, stride: int = 1000):
        self.expires = None if seconds is None else time.monotonic() + seconds
        self.stride = stride
        self._count = 0

    def check(self):
        if self.expires is not None and time.monotonic() > self.expires:
            raise DeadlineExceeded()

    def tick(self):
        self._count += 1
        if self._count >= self.stride:
            self._count = 0
            self.check()


_current: ContextVar[Deadline | None] = ContextVar("regexlen_deadline", default=None)


def set_deadline(deadline: Deadline | None):
    return _current.set(deadline)


def reset_deadline(token):
    _current.reset(token)


def tick():
    d = _current.get()
    if d is not None:
        d.tick()


def checkpoint():
    d = _current.get()
    if d is not None:
        d.check()
