"""Instances, intervals, fairness parameters and exact count queries.

Positions are 1-based in everything a user sees; internally an interval is the
half-open offset range ``(start, start + length]`` so that point ``i`` (1-based)
is covered when ``start < i <= start + length``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Color",
    "TIE_COLOR",
    "BetaMode",
    "Topology",
    "Instance",
    "Interval",
    "FairnessParams",
    "FairPartError",
    "InstanceFormatError",
    "ParameterError",
    "parse_rational",
    "format_rational",
    "parse_instance",
    "serialize_instance",
    "is_allowable",
    "majority_color",
    "count_colors",
    "deviation_threshold_met",
    "measure",
]


class FairPartError(ValueError):
    """Base class for input and precondition errors raised by this package."""


class InstanceFormatError(FairPartError):
    pass


class ParameterError(FairPartError):
    pass


class Color(enum.IntEnum):
    RED = 0
    BLUE = 1

    @property
    def letter(self) -> str:
        return "R" if self is Color.RED else "B"

    @classmethod
    def from_letter(cls, ch: str) -> "Color":
        ch = ch.upper()
        if ch == "R":
            return cls.RED
        if ch == "B":
            return cls.BLUE
        raise InstanceFormatError(f"unknown color letter {ch!r}")

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED

    def __str__(self) -> str:
        return self.letter


# Intervals without a strict red majority belong to blue.
TIE_COLOR = Color.BLUE


class BetaMode(str, enum.Enum):
    STRICT = "strict"
    INCLUSIVE = "inclusive"


class Topology(str, enum.Enum):
    LINE = "line"
    CIRCLE = "circle"


_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_DECIMAL_RE = re.compile(r"^\s*(\d+)?(?:\.(\d+))?\s*$")


def parse_rational(text: str | Fraction | int) -> Fraction:
    """Parse ``p/q`` or a finite decimal such as ``0.25`` into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParameterError(f"cannot read {text!r} as a rational")
    m = _FRACTION_RE.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParameterError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    m = _DECIMAL_RE.match(text)
    if m and (m.group(1) or m.group(2)):
        return Fraction(text.strip())
    raise ParameterError(f"malformed rational {text!r}; expected p/q or a finite decimal")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


@dataclass(frozen=True, eq=False)
class Instance:
    """A two-colored point sequence with run-length and prefix-count views.

    ``is_red[k]`` is 1 when point ``k + 1`` is red. ``red_prefix[i]`` counts the
    red points among positions ``1..i``.
    """

    is_red: np.ndarray
    runs: tuple[tuple[Color, int], ...] = field(init=False)
    red_prefix: np.ndarray = field(init=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.is_red, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise InstanceFormatError("an instance needs at least one point")
        if arr.max() > 1:
            raise InstanceFormatError("colors must be encoded as 0 (blue) / 1 (red)")
        arr.flags.writeable = False
        prefix = np.zeros(arr.size + 1, dtype=np.int64)
        np.cumsum(arr, out=prefix[1:])
        prefix.flags.writeable = False
        change = np.flatnonzero(np.diff(arr)) + 1
        starts = np.concatenate(([0], change))
        ends = np.concatenate((change, [arr.size]))
        runs = tuple(
            (Color.RED if arr[s] else Color.BLUE, int(e - s)) for s, e in zip(starts, ends)
        )
        object.__setattr__(self, "is_red", arr)
        object.__setattr__(self, "red_prefix", prefix)
        object.__setattr__(self, "runs", runs)

    @classmethod
    def from_string(cls, text: str) -> "Instance":
        return cls(np.frombuffer(text.upper().encode("ascii"), dtype=np.uint8) == ord("R"))

    @classmethod
    def from_colors(cls, colors: Iterable[Color]) -> "Instance":
        return cls(np.array([c is Color.RED for c in colors], dtype=np.uint8))

    @classmethod
    def from_runs(cls, runs: Iterable[tuple[Color | str, int]]) -> "Instance":
        chunks = []
        for color, length in runs:
            if isinstance(color, str):
                color = Color.from_letter(color)
            if length < 1:
                raise InstanceFormatError(f"run length must be positive, got {length}")
            chunks.append(np.full(int(length), 1 if color is Color.RED else 0, dtype=np.uint8))
        if not chunks:
            raise InstanceFormatError("an instance needs at least one run")
        return cls(np.concatenate(chunks))

    @property
    def n(self) -> int:
        return int(self.is_red.size)

    @property
    def red_total(self) -> int:
        return int(self.red_prefix[-1])

    def color(self, position: int) -> Color:
        """Color of the point at 1-based ``position``."""
        return Color.RED if self.is_red[position - 1] else Color.BLUE

    @property
    def colors(self) -> tuple[Color, ...]:
        return tuple(Color.RED if v else Color.BLUE for v in self.is_red)

    def to_string(self) -> str:
        return bytes(np.where(self.is_red == 1, ord("R"), ord("B")).astype(np.uint8)).decode()

    def rotated(self, shift: int) -> "Instance":
        """The instance read starting after position ``shift`` (circle rotation)."""
        shift %= self.n
        return Instance(np.roll(self.is_red, -shift))

    def reversed(self) -> "Instance":
        return Instance(self.is_red[::-1].copy())

    def swapped(self) -> "Instance":
        return Instance(1 - self.is_red)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return np.array_equal(self.is_red, other.is_red)

    def __hash__(self):
        return hash(self.is_red.tobytes())

    def __len__(self):
        return self.n

    def __repr__(self):
        body = serialize_instance(self)
        if len(body) > 60:
            body = body[:57] + "..."
        return f"Instance(n={self.n}, runs={body!r})"


@dataclass(frozen=True)
class Interval:
    """Half-open range ``(start, start + length]``; may wrap when ``circular``."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ParameterError(f"interval length must be >= 1, got {self.length}")
        if self.start < 0:
            raise ParameterError(f"interval start must be >= 0, got {self.start}")

    @property
    def end(self) -> int:
        return self.start + self.length

    def check(self, n: int, circular: bool = False) -> None:
        if self.start >= n and not (self.start == 0 and n == 0):
            raise ParameterError(f"interval start {self.start} outside [0, {n})")
        if circular:
            if self.length > n:
                raise ParameterError(f"interval length {self.length} exceeds n={n}")
        elif self.end > n:
            raise ParameterError(f"interval {self.render()} exceeds n={n}")

    def render(self, n: int | None = None) -> str:
        end = self.end
        if n is not None and end > n:
            end -= n
        return f"({self.start},{end}]"


@dataclass(frozen=True)
class FairnessParams:
    """Ideal size ``sigma``, slack ``epsilon``, deviation bar ``beta``.

    ``lo``/``hi`` are the integer allowable sizes and ``min_unhappy`` the
    smallest unhappy count that clears the beta clause under ``beta_mode``.
    """

    sigma: int
    epsilon: Fraction
    beta: Fraction
    beta_mode: BetaMode = BetaMode.INCLUSIVE
    lo: int = field(init=False)
    hi: int = field(init=False)
    min_unhappy: int = field(init=False)

    def __post_init__(self):
        eps = parse_rational(self.epsilon)
        beta = parse_rational(self.beta)
        mode = BetaMode(self.beta_mode)
        if isinstance(self.sigma, bool) or int(self.sigma) != self.sigma or self.sigma < 1:
            raise ParameterError(f"sigma must be a positive integer, got {self.sigma!r}")
        if not (0 <= eps <= Fraction(1, 2)):
            raise ParameterError(f"epsilon must lie in [0, 1/2], got {eps}")
        if not (Fraction(1, 2) <= beta <= 1):
            raise ParameterError(f"beta must lie in [1/2, 1], got {beta}")
        sigma = int(self.sigma)
        lo = _ceil_frac((1 - eps) * sigma)
        hi = _floor_frac((1 + eps) * sigma)
        if lo > hi:
            raise ParameterError(f"no integer size in [{(1 - eps) * sigma}, {(1 + eps) * sigma}]")
        beta_sigma = beta * sigma
        if mode is BetaMode.INCLUSIVE:
            min_unhappy = _ceil_frac(beta_sigma)
        else:
            min_unhappy = _floor_frac(beta_sigma) + 1
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "beta_mode", mode)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "min_unhappy", min_unhappy)

    @classmethod
    def from_strings(cls, sigma, epsilon: str, beta: str, beta_mode: str = "inclusive"):
        return cls(int(sigma), parse_rational(epsilon), parse_rational(beta), BetaMode(beta_mode))

    @property
    def width(self) -> int:
        """Number of allowable sizes, ``hi - lo + 1``."""
        return self.hi - self.lo + 1

    @property
    def max_span(self) -> int:
        """Most partition intervals (all allowable) that one allowable interval can touch.

        Touching ``k`` intervals means containing ``k - 2`` of them whole plus at
        least one point on each side.
        """
        span = 2 if self.hi >= 2 else 1
        while span >= 2 and (span - 1) * self.lo + 2 <= self.hi:
            span += 1
        return span

    def with_beta(self, beta, beta_mode=None) -> "FairnessParams":
        return FairnessParams(self.sigma, self.epsilon, parse_rational(beta),
                              self.beta_mode if beta_mode is None else BetaMode(beta_mode))


def measure(interval: Interval | int, sigma: int) -> Fraction:
    length = interval.length if isinstance(interval, Interval) else int(interval)
    return Fraction(length, sigma)


# --- parsing -----------------------------------------------------------------

_RUN_TOKEN = re.compile(r"^(\d+)([RBrb])$")


def parse_instance(text: str) -> Instance:
    """Read the instance text format: ``#`` comments, then R/B letters or run tokens."""
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    payload = " ".join(lines).strip()
    if not payload:
        raise InstanceFormatError("empty instance")
    compact = "".join(payload.split())
    if re.fullmatch(r"[RBrb]+", compact):
        return Instance.from_string(compact)
    runs: list[tuple[Color, int]] = []
    for token in payload.split():
        m = _RUN_TOKEN.match(token)
        if not m:
            raise InstanceFormatError(f"malformed run token {token!r}")
        count = int(m.group(1))
        if count == 0:
            raise InstanceFormatError(f"zero-length run {token!r}")
        color = Color.from_letter(m.group(2))
        if runs and runs[-1][0] is color:
            runs[-1] = (color, runs[-1][1] + count)
        else:
            runs.append((color, count))
    return Instance.from_runs(runs)


def serialize_instance(x: Instance) -> str:
    return " ".join(f"{length}{color.letter}" for color, length in x.runs)


# --- queries -----------------------------------------------------------------

def is_allowable(interval: Interval | int, p: FairnessParams) -> bool:
    length = interval.length if isinstance(interval, Interval) else int(interval)
    return p.lo <= length <= p.hi


def _linear_red(x: Instance, a: int, b: int) -> int:
    return int(x.red_prefix[b] - x.red_prefix[a])


def count_colors(x: Instance, interval: Interval) -> tuple[int, int]:
    """(red, blue) counts in the interval; wrapped intervals split in two queries."""
    n = x.n
    if interval.length > n:
        raise ParameterError(f"interval length {interval.length} exceeds n={n}")
    start = interval.start % n
    end = start + interval.length
    if end <= n:
        red = _linear_red(x, start, end)
    else:
        red = _linear_red(x, start, n) + _linear_red(x, 0, end - n)
    return red, interval.length - red


def majority_color(x: Instance, interval: Interval) -> Color:
    red, blue = count_colors(x, interval)
    return Color.RED if red > blue else TIE_COLOR


def deviation_threshold_met(unhappy: int, d_len: int, p: FairnessParams) -> bool:
    """Whether ``unhappy`` same-colored unhappy points make a group of size ``d_len`` deviate."""
    if 2 * unhappy <= d_len:
        return False
    lhs = unhappy * p.beta.denominator
    rhs = p.beta.numerator * p.sigma
    if p.beta_mode is BetaMode.STRICT:
        return lhs > rhs
    return lhs >= rhs


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)
