"""Happiness, deviating-group enumeration and balancedness for a given partition."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _accel, kernels
from .core import (
    Color,
    FairnessParams,
    FairPartError,
    Instance,
    Interval,
    ParameterError,
    Topology,
    format_rational,
    is_allowable,
)

__all__ = [
    "Partition",
    "HappinessIndex",
    "DeviatingGroup",
    "IntervalStats",
    "AuditReport",
    "build_happiness",
    "find_deviating_groups",
    "audit",
    "parse_partition",
]


@dataclass(frozen=True)
class Partition:
    """Boundaries ``0 = b0 < b1 < ... < bT = n``; part ``t`` is ``(b[t-1], b[t]]``.

    ``offset`` places the cut of a circular partition: every position is read
    shifted by ``offset`` modulo ``n``. Line partitions always have offset 0.
    """

    n: int
    boundaries: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        b = tuple(int(v) for v in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2:
            raise ParameterError("a partition needs at least one part")
        if b[0] != 0 or b[-1] != self.n:
            raise ParameterError(f"boundaries must run from 0 to n={self.n}, got {b[0]}..{b[-1]}")
        if any(v >= w for v, w in zip(b, b[1:])):
            raise ParameterError("boundaries must be strictly increasing")
        if not 0 <= self.offset < max(self.n, 1):
            raise ParameterError(f"offset {self.offset} outside [0, {self.n})")

    @classmethod
    def from_sizes(cls, sizes: Iterable[int], offset: int = 0) -> "Partition":
        bounds = [0]
        for s in sizes:
            bounds.append(bounds[-1] + int(s))
        return cls(bounds[-1], tuple(bounds), offset)

    @property
    def sizes(self) -> tuple[int, ...]:
        b = self.boundaries
        return tuple(w - v for v, w in zip(b, b[1:]))

    def __len__(self):
        return len(self.boundaries) - 1

    def intervals(self) -> list[Interval]:
        """Parts as intervals in the instance's own coordinates."""
        b = self.boundaries
        return [Interval((v + self.offset) % self.n, w - v) for v, w in zip(b, b[1:])]

    def to_dict(self) -> dict:
        d = {"n": self.n, "boundaries": list(self.boundaries)}
        if self.offset:
            d["offset"] = self.offset
        return d

    def to_text(self) -> str:
        return " ".join(str(v) for v in self.boundaries)


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Read a boundary list (``0 10 20``) or a JSON object ``{"n", "boundaries"}``."""
    body = "\n".join(ln for ln in text.splitlines() if not ln.lstrip().startswith("#")).strip()
    if not body:
        raise FairPartError("empty partition file")
    if body.startswith("{"):
        try:
            obj = json.loads(body)
        except json.JSONDecodeError as exc:
            raise FairPartError(f"invalid partition JSON: {exc}") from None
        if "partition" in obj and isinstance(obj["partition"], dict):
            obj = obj["partition"]
        bounds = obj.get("boundaries")
        if not isinstance(bounds, list):
            raise FairPartError("partition JSON needs a 'boundaries' list")
        pn = int(obj.get("n", bounds[-1] if bounds else 0))
        offset = int(obj.get("offset", 0))
    else:
        try:
            bounds = [int(tok) for tok in body.replace(",", " ").split()]
        except ValueError as exc:
            raise FairPartError(f"malformed boundary list: {exc}") from None
        pn = bounds[-1] if bounds else 0
        offset = 0
    if n is not None and pn != n:
        raise FairPartError(f"partition covers n={pn} but the instance has n={n}")
    return Partition(pn, tuple(bounds), offset)


@dataclass(frozen=True, eq=False)
class HappinessIndex:
    """Majority color per part and O(1) unhappy counts on any sub-interval."""

    partition: Partition
    majority: tuple[Color, ...]
    unhappy: np.ndarray
    unhappy_red_prefix: np.ndarray
    unhappy_blue_prefix: np.ndarray

    @property
    def total_unhappy(self) -> int:
        return int(self.unhappy_red_prefix[-1] + self.unhappy_blue_prefix[-1])

    def unhappy_counts(self, interval: Interval) -> tuple[int, int]:
        """(unhappy red, unhappy blue) inside ``interval``; wrapping allowed."""
        ur, ub = self.unhappy_red_prefix, self.unhappy_blue_prefix
        n = self.partition.n
        s = interval.start % n
        e = s + interval.length
        if interval.length > n:
            raise ParameterError("interval longer than the instance")
        if e <= n:
            return int(ur[e] - ur[s]), int(ub[e] - ub[s])
        e -= n
        return (int(ur[n] - ur[s] + ur[e]), int(ub[n] - ub[s] + ub[e]))


def build_happiness(x: Instance, partition: Partition) -> HappinessIndex:
    """Index of unhappy points, in the partition's frame (offset applied)."""
    if partition.n != x.n:
        raise ParameterError(f"partition covers n={partition.n} but the instance has n={x.n}")
    xr = x.rotated(partition.offset) if partition.offset else x
    b = np.asarray(partition.boundaries, dtype=np.int64)
    red = xr.red_prefix[b[1:]] - xr.red_prefix[b[:-1]]
    sizes = np.diff(b)
    maj_red = 2 * red > sizes
    point_maj_red = np.repeat(maj_red, sizes)
    unhappy = (xr.is_red == 1) != point_maj_red
    ur = np.zeros(x.n + 1, dtype=np.int64)
    ub = np.zeros(x.n + 1, dtype=np.int64)
    np.cumsum(unhappy & (xr.is_red == 1), out=ur[1:])
    np.cumsum(unhappy & (xr.is_red == 0), out=ub[1:])
    for arr in (unhappy, ur, ub):
        arr.flags.writeable = False
    majority = tuple(Color.RED if m else Color.BLUE for m in maj_red)
    return HappinessIndex(partition, majority, unhappy, ur, ub)


@dataclass(frozen=True)
class DeviatingGroup:
    interval: Interval
    color: Color
    unhappy_count: int

    @property
    def size(self) -> int:
        return self.interval.length

    def sort_key(self):
        return (self.interval.start, self.interval.length, int(self.color))

    def to_dict(self) -> dict:
        return {
            "start": self.interval.start,
            "len": self.interval.length,
            "color": self.color.letter,
            "unhappy": self.unhappy_count,
        }


def _scan(ur, ub, n, p: FairnessParams, circular: bool, first_only: bool) -> np.ndarray:
    if circular:
        ur = np.concatenate((ur, ur[n] + ur[1:]))
        ub = np.concatenate((ub, ub[n] + ub[1:]))
    if _accel.backend() == "numba":
        mask = np.zeros((n, p.width), dtype=np.uint8)
        kernels.scan_groups(ur, ub, n, p.lo, p.hi, p.min_unhappy, circular, first_only, mask)
        return mask
    mask = kernels.scan_groups_np(ur, ub, n, p.lo, p.hi, p.min_unhappy, circular)
    if first_only:
        flat = np.flatnonzero(mask)
        first = np.zeros_like(mask)
        if flat.size:
            k = flat[0]
            bits = mask.flat[k]
            first.flat[k] = 1 if bits & 1 else 2
        mask = first
    return mask


def find_deviating_groups(
    x: Instance,
    partition: Partition,
    p: FairnessParams,
    topology: Topology | str = Topology.LINE,
    first_only: bool = False,
    happiness: HappinessIndex | None = None,
) -> list[DeviatingGroup]:
    """Every allowable interval holding enough same-colored unhappy points to deviate.

    Ordered by (start, length, color) in instance coordinates. With
    ``first_only`` the scan stops at the first witness in that order.
    """
    topology = Topology(topology)
    if partition.offset and topology is Topology.LINE:
        raise ParameterError("a line partition cannot have a circular offset")
    h = happiness if happiness is not None else build_happiness(x, partition)
    n = x.n
    circular = topology is Topology.CIRCLE
    mask = _scan(h.unhappy_red_prefix, h.unhappy_blue_prefix, n, p, circular,
                 first_only and partition.offset == 0)
    groups = []
    starts, cols = np.nonzero(mask)
    for s, c in zip(starts.tolist(), cols.tolist()):
        bits = int(mask[s, c])
        length = p.lo + c
        iv = Interval(s, length)
        ur, ub = h.unhappy_counts(iv)
        start = (s + partition.offset) % n
        if bits & 1:
            groups.append(DeviatingGroup(Interval(start, length), Color.RED, ur))
        if bits & 2:
            groups.append(DeviatingGroup(Interval(start, length), Color.BLUE, ub))
    groups.sort(key=DeviatingGroup.sort_key)
    if first_only:
        groups = groups[:1]
    return groups


@dataclass(frozen=True)
class IntervalStats:
    start: int
    size: int
    majority: Color
    unhappy: int
    allowable: bool

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "len": self.size,
            "majority": self.majority.letter,
            "unhappy": self.unhappy,
            "allowable": self.allowable,
        }


@dataclass(frozen=True)
class AuditReport:
    is_fair: bool
    groups: tuple[DeviatingGroup, ...]
    alpha: Fraction
    per_interval: tuple[IntervalStats, ...]
    topology: Topology

    def to_dict(self) -> dict:
        return {
            "is_fair": self.is_fair,
            "alpha": format_rational(self.alpha),
            "topology": self.topology.value,
            "groups": [g.to_dict() for g in self.groups],
            "intervals": [s.to_dict() for s in self.per_interval],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def audit(
    x: Instance,
    partition: Partition,
    p: FairnessParams,
    topology: Topology | str = Topology.LINE,
    first_only: bool = False,
) -> AuditReport:
    """Fairness verdict, witnesses, balancedness and per-part statistics."""
    topology = Topology(topology)
    h = build_happiness(x, partition)
    groups = find_deviating_groups(x, partition, p, topology, first_only, happiness=h)
    stats = []
    outside = 0
    b = partition.boundaries
    for t, (lo_b, hi_b) in enumerate(zip(b, b[1:])):
        size = hi_b - lo_b
        ur, ub = h.unhappy_counts(Interval(lo_b, size))
        ok = is_allowable(size, p)
        if not ok:
            outside += size
        stats.append(IntervalStats((lo_b + partition.offset) % x.n, size, h.majority[t], ur + ub, ok))
    return AuditReport(
        is_fair=not groups,
        groups=tuple(groups),
        alpha=Fraction(outside, x.n),
        per_interval=tuple(stats),
        topology=topology,
    )


def check_fair(x: Instance, partition: Partition, p: FairnessParams,
               topology: Topology | str = Topology.LINE) -> bool:
    """Balanced and free of deviating groups."""
    if any(not is_allowable(s, p) for s in partition.sizes):
        return False
    return not find_deviating_groups(x, partition, p, topology, first_only=True)


def unhappy_positions(h: HappinessIndex) -> Sequence[int]:
    """1-based positions of unhappy points, in the partition's frame."""
    return (np.flatnonzero(h.unhappy) + 1).tolist()
