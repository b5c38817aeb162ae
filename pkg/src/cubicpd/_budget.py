"""Cooperative time budgets.

Long-running loops call :func:`check`; when a deadline installed with
:func:`deadline` has passed, :class:`BudgetExceeded` is raised.
"""

from __future__ import annotations

import contextvars
import time
from contextlib import contextmanager

_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar("deadline", default=None)


class BudgetExceeded(RuntimeError):
    """The current computation ran past its time budget."""


def check() -> None:
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise BudgetExceeded("time budget exceeded")


@contextmanager
def deadline(seconds: float | None):
    """Limit the enclosed computation to ``seconds`` of wall time
    (``None`` means unlimited; nested budgets keep the tighter one)."""
    if seconds is None:
        yield
        return
    new = time.monotonic() + seconds
    old = _deadline.get()
    if old is not None:
        new = min(new, old)
    token = _deadline.set(new)
    try:
        yield
    finally:
        _deadline.reset(token)
