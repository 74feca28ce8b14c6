"""Deciding and constructing locally fair balanced partitions.

:func:`dp_solve` is the exact dynamic program on a line. It only tracks
prefixes ``(0, j]`` together with their last three boundaries: a deviating
group has length at most ``hi`` while every part has at least ``lo`` points,
so a group touching the newest part lies within the newest four parts.
:func:`brute_force_solve` is the enumeration oracle (line and circle).
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import _accel, kernels
from .audit import Partition, check_fair
from .core import (
    FairnessParams,
    FairPartError,
    Instance,
    Interval,
    ParameterError,
    Topology,
    is_allowable,
)

__all__ = [
    "SolveResult",
    "OracleCapError",
    "standalone_fair",
    "fair4",
    "dp_solve",
    "brute_force_solve",
    "DEFAULT_ORACLE_CAP",
    "FAIR4_CACHE_LIMIT",
]

DEFAULT_ORACLE_CAP = 60
# Above this many table cells a precomputed four-part table is refused.
FAIR4_CACHE_LIMIT = 50_000_000


class OracleCapError(FairPartError):
    pass


@dataclass
class SolveResult:
    partition: Partition | None
    states: int = 0
    fair4_calls: int = 0
    elapsed_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.partition is not None

    def to_dict(self) -> dict:
        part = None
        if self.partition is not None:
            part = {"boundaries": list(self.partition.boundaries)}
            if self.partition.offset:
                part["offset"] = self.partition.offset
        return {
            "feasible": self.feasible,
            "partition": part,
            "stats": {
                "states": self.states,
                "fair4_calls": self.fair4_calls,
                "elapsed_ms": round(self.elapsed_ms, 3),
            },
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _window_ok(x: Instance, bounds, e_min: int, p: FairnessParams) -> bool:
    bd = np.asarray(bounds, dtype=np.int64)
    if _accel.backend() == "numba":
        scratch = np.empty((2, int(bd[-1] - bd[0]) + 1), dtype=np.int64)
        return bool(kernels.window_ok(x.red_prefix, bd, bd.size, e_min, p.lo, p.hi,
                                      p.min_unhappy, scratch[0], scratch[1]))
    return bool(kernels.windows_ok_np(x.red_prefix, bd[None, :], [e_min], p.lo, p.hi,
                                      p.min_unhappy)[0])


def standalone_fair(x: Instance, interval: Interval, p: FairnessParams) -> bool:
    """Whether ``interval`` as a single part contains no deviating group."""
    interval.check(x.n)
    if not is_allowable(interval, p):
        raise ParameterError(f"{interval.render()} is not allowable")
    return _window_ok(x, (interval.start, interval.end), interval.start, p)


def fair4(x: Instance, i4: int, i3: int, i2: int, i1: int, j: int, p: FairnessParams) -> bool:
    """No deviating group inside ``(i4, j]`` against the parts cut at i3, i2, i1.

    Equal consecutive boundaries stand for missing parts (partitions with fewer
    than four parts); every non-empty part must be allowable.
    """
    bounds = (i4, i3, i2, i1, j)
    if not 0 <= i4 <= i3 <= i2 <= i1 < j <= x.n:
        raise ParameterError(f"boundaries must satisfy 0 <= i4 <= i3 <= i2 <= i1 < j <= n: {bounds}")
    for v, w in zip(bounds, bounds[1:]):
        if w > v and not is_allowable(w - v, p):
            raise ParameterError(f"part ({v},{w}] is not allowable")
    distinct = sorted(set(bounds))
    return _window_ok(x, distinct, i4, p)


def _standalone_table(x: Instance, p: FairnessParams) -> np.ndarray:
    if _accel.backend() == "numba":
        out = np.zeros((x.n + 1, p.width), dtype=np.uint8)
        kernels.standalone_table(x.red_prefix, x.n, p.lo, p.hi, p.min_unhappy, out)
        return out
    return kernels.standalone_table_np(x.red_prefix, x.n, p.lo, p.hi, p.min_unhappy)


def _resolve_cache(flag, n: int, W: int) -> bool:
    flag = {"auto": "auto", True: "on", False: "off"}.get(flag, flag)
    if flag == "on":
        if (n + 1) * W ** 4 > FAIR4_CACHE_LIMIT:
            raise ParameterError("four-part table too large; use fair4_cache='off'")
        return True
    if flag in ("off", "auto"):
        # every (i4, ..., j) tuple is visited at most once by the prefix
        # recurrence, so precomputing never saves window checks
        return False
    raise ParameterError(f"fair4_cache must be on/off/auto, got {flag!r}")


def dp_solve(
    x: Instance,
    p: FairnessParams,
    *,
    path: str = "auto",
    fair4_cache="auto",
    verify: bool = True,
) -> SolveResult:
    """A fair balanced partition of the line, or ``partition=None`` if none exists.

    ``path="four"`` checks a full four-part window for every candidate fourth
    boundary; ``"three"`` checks the last three parts once per state and is
    only valid when an allowable group cannot touch four parts; ``"auto"``
    picks ``"three"`` whenever that holds. Among fair partitions the one
    returned has the lexicographically smallest final boundaries, each
    earlier boundary again chosen smallest.
    """
    t0 = time.perf_counter()
    if path not in ("auto", "four", "three"):
        raise ParameterError(f"unknown path {path!r}")
    span = p.max_span
    if path == "three" and span > 3:
        raise ParameterError("the three-part path needs groups to touch at most three parts")
    four = path == "four" or (path == "auto" and span > 3)
    n, lo, W = x.n, p.lo, p.width
    use_f4 = _resolve_cache(fair4_cache, n, W)
    if use_f4:
        four = True

    standalone = _standalone_table(x, p)
    table = np.zeros((n + 1, W, W, W), dtype=np.uint8)
    parent = np.full((n + 1, W, W, W), -1, dtype=np.int16)
    stats = np.zeros(2, dtype=np.int64)
    rp = x.red_prefix
    if _accel.backend() == "numba":
        if use_f4:
            f4 = np.zeros((n + 1, W, W, W, W), dtype=np.uint8)
            kernels.fair4_table(rp, n, lo, p.hi, p.min_unhappy, f4, stats)
            precomputed = int(stats[1])
        else:
            f4 = np.zeros((1, 1, 1, 1, 1), dtype=np.uint8)
            precomputed = 0
        kernels.dp_fill(rp, n, lo, p.hi, p.min_unhappy, standalone, four, f4, use_f4,
                        table, parent, stats)
        stats[1] += precomputed
    else:
        # the numpy path evaluates windows directly; the cache flag only
        # changes which recurrence is used
        kernels.dp_fill_np(rp, n, lo, p.hi, p.min_unhappy, standalone, four,
                           table, parent, stats)

    partition = _reconstruct(table, parent, n, lo)
    if partition is not None and verify and not check_fair(x, partition, p):
        raise AssertionError(f"dp_solve produced an unfair partition {partition.boundaries}")
    elapsed = (time.perf_counter() - t0) * 1000.0
    return SolveResult(partition, int(stats[0]), int(stats[1]), elapsed,
                       {"path": "four" if four else "three", "fair4_cache": use_f4})


def _reconstruct(table, parent, n, lo) -> Partition | None:
    if n < lo:
        return None
    hits = np.argwhere(table[n] != 0)
    if hits.size == 0:
        return None
    # smallest i1, then i2, then i3 == largest offsets, lexicographically
    a, b, c = max(map(tuple, hits.tolist()))
    bounds = [n]
    j = n
    while True:
        i1 = j - lo - a
        bounds.append(i1)
        if i1 == 0:
            break
        cp = int(parent[j, a, b, c])
        j, a, b, c = i1, b, c, cp
    return Partition(n, tuple(reversed(bounds)))


def brute_force_solve(
    x: Instance,
    p: FairnessParams,
    topology: Topology | str = Topology.LINE,
    *,
    cap: int = DEFAULT_ORACLE_CAP,
    force: bool = False,
) -> SolveResult:
    """First fair balanced composition in lexicographic boundary order.

    On a circle every cut position in ``[0, hi)`` is tried in turn (each
    circular partition has a cut there) and the returned partition carries that
    cut as its ``offset``.
    """
    topology = Topology(topology)
    if x.n > cap and not force:
        raise OracleCapError(f"n={x.n} exceeds the oracle cap {cap}; pass force=True")
    t0 = time.perf_counter()
    search = kernels.composition_search
    if _accel.backend() != "numba":
        search = getattr(search, "py_func", search)
    circular = topology is Topology.CIRCLE
    shifts = range(min(p.hi, x.n)) if circular else range(1)
    sizes = np.zeros(x.n + 1, dtype=np.int64)
    stats = np.zeros(1, dtype=np.int64)
    nodes = 0
    found = None
    for shift in shifts:
        xr = x.rotated(shift) if shift else x
        k = search(xr.is_red, x.n, p.lo, p.hi, p.min_unhappy, circular, sizes, stats)
        nodes += int(stats[0])
        if k > 0:
            found = Partition.from_sizes(sizes[:k].tolist(), offset=shift)
            break
    if found is not None and not check_fair(x, found, p, topology):
        raise AssertionError(f"brute_force_solve produced an unfair partition {found}")
    elapsed = (time.perf_counter() - t0) * 1000.0
    return SolveResult(found, nodes, 0, elapsed, {"topology": topology.value})
