"""Cooperative resource budgets.

Long-running exact computations call :func:`checkpoint` from their inner
loops.  When a budget installed with :func:`limits` is exhausted,
:class:`BudgetExceeded` is raised; nothing is silently truncated.
"""

import contextlib
import contextvars
import time


class BudgetExceeded(RuntimeError):
    """A time or size budget ran out.  ``partial`` carries progress, if any."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class _Budget:
    __slots__ = ("deadline", "max_work", "work", "max_terms", "parent")

    def __init__(self, seconds, max_work, max_terms, parent):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.max_work = max_work
        self.work = 0
        self.max_terms = max_terms
        self.parent = parent


_current = contextvars.ContextVar("planedyn_budget", default=None)


@contextlib.contextmanager
def limits(seconds=None, max_work=None, max_terms=None):
    """Install a budget for the enclosed block; enclosing budgets stay in force."""
    if seconds is not None and seconds <= 0:
        raise BudgetExceeded("time budget is zero")
    token = _current.set(_Budget(seconds, max_work, max_terms, _current.get()))
    try:
        yield
    finally:
        _current.reset(token)


def checkpoint(work=1):
    b = _current.get()
    now = None
    while b is not None:
        b.work += work
        if b.max_work is not None and b.work > b.max_work:
            raise BudgetExceeded(f"work budget of {b.max_work} operations exceeded")
        if b.deadline is not None:
            now = time.monotonic() if now is None else now
            if now > b.deadline:
                raise BudgetExceeded("time budget exceeded")
        b = b.parent


def term_limit():
    b = _current.get()
    out = None
    while b is not None:
        if b.max_terms is not None:
            out = b.max_terms if out is None else min(out, b.max_terms)
        b = b.parent
    return out
