"""Shared window builders for the test suite."""
from __future__ import annotations

from dynwindow import Window


def interval(lo: int, hi: int, horizon: int | None = None) -> Window:
    return Window(tuple(range(lo, hi + 1)), hi if horizon is None else horizon)


def evens(horizon: int) -> Window:
    return Window(tuple(range(0, horizon + 1, 2)), horizon)


def odds(horizon: int) -> Window:
    return Window(tuple(range(1, horizon + 1, 2)), horizon)


def squares(n_max: int, horizon: int | None = None) -> Window:
    elems = tuple(n * n for n in range(0, n_max + 1))
    return Window(elems, elems[-1] if horizon is None else horizon)


def multiples(k: int, horizon: int) -> Window:
    return Window(tuple(range(0, horizon + 1, k)), horizon)
