"""Builtin example quivers used by the command line checks and the test
suite: each entry is (quiver, dimension vector, trace-free parameter).
"""

from __future__ import annotations

from .quiver import Quiver, StabilityParam


def a2() -> tuple[Quiver, tuple[int, ...], StabilityParam]:
    """Single arrow 1 -> 2, rank one at each vertex, parameter (1, -1)."""
    q = Quiver(("1", "2"), (("1", "2"),))
    v = (1, 1)
    return q, v, StabilityParam.trace_free(q, v, [1, -1])


def jordan2() -> tuple[Quiver, tuple[int, ...], StabilityParam]:
    """One vertex with one loop, rank 2; the only trace-free parameter is 0."""
    q = Quiver(("1",), (("1", "1"),))
    v = (2,)
    return q, v, StabilityParam.trace_free(q, v, [0])


def star21() -> tuple[Quiver, tuple[int, ...], StabilityParam]:
    """Two vertices {1, inf} with two loops at 1 and arrows both ways between
    them; v = (2, 1) with the 2-filtered parameter (-1, 2)."""
    q = Quiver(("1", "inf"), (("1", "1"), ("1", "1"), ("1", "inf"), ("inf", "1")))
    v = (2, 1)
    return q, v, StabilityParam.trace_free(q, v, [-1, 2])


BUILTINS = {"a2": a2, "jordan2": jordan2, "star21": star21}
