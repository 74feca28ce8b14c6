"""Constructive partitioners: almost-uniform cutting and run-aware cutting.

Neither optimizes anything. :func:`almost_uniform_partition` ignores colors
and cuts ``n`` into near-equal allowable parts; :func:`guarantee_check`
certifies, from sizes alone, when no coloring can make that cut unfair.
:func:`partition_clustered` follows the monochromatic runs and only mixes
colors in parts of exactly ``lo`` points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .audit import Partition
from .core import (
    FairnessParams,
    FairPartError,
    Instance,
    ceil_div,
    deviation_threshold_met,
    format_rational,
    is_allowable,
)

__all__ = [
    "ConstructionError",
    "AlmostUniformPlan",
    "AlphaPartition",
    "almost_uniform_plan",
    "almost_uniform_partition",
    "unhappy_upper_bound",
    "guarantee_check",
    "beta_bar_reference",
    "carve_run",
    "partition_clustered",
    "clustered_alpha_bound",
    "zero_alpha_run_threshold",
]


class ConstructionError(FairPartError):
    pass


@dataclass(frozen=True)
class AlmostUniformPlan:
    n: int
    sigma: int
    base_size: int
    interval_count: int
    remainder: int
    max_size: int
    sizes: tuple[int, ...]

    @property
    def q(self) -> Fraction:
        return Fraction(self.max_size, self.sigma)

    def delta(self, epsilon: Fraction) -> Fraction:
        return self.q - (1 - Fraction(epsilon))

    def delta_bound(self, epsilon=None) -> Fraction | None:
        """``1/(n/sigma - 1) + 1/sigma``; ``None`` when ``n <= sigma``.

        With ``epsilon`` the slack from rounding ``(1-eps)*sigma`` up to
        ``base_size`` is added, which is zero when that product is integral.
        """
        if self.n <= self.sigma:
            return None
        bound = 1 / (Fraction(self.n, self.sigma) - 1) + Fraction(1, self.sigma)
        if epsilon is not None:
            bound += (self.base_size - (1 - Fraction(epsilon)) * self.sigma) / self.sigma
        return bound

    def partition(self) -> Partition:
        return Partition.from_sizes(self.sizes)


def almost_uniform_plan(n: int, p: FairnessParams) -> AlmostUniformPlan:
    s0 = p.lo
    if n < s0:
        raise ConstructionError(f"n={n} is smaller than the smallest allowable size {s0}")
    t = n // s0
    rem = n - t * s0
    extra, first = divmod(rem, t)
    # round-robin, front-first: the first rem % t parts get one more point
    sizes = tuple(s0 + extra + (1 if k < first else 0) for k in range(t))
    sigma_prime = s0 + ceil_div(rem, t)
    if sigma_prime > p.hi:
        raise ConstructionError(
            f"almost-uniform sizes reach {sigma_prime} > hi={p.hi}; no allowable near-equal cut")
    assert sum(sizes) == n
    assert all(s in (sigma_prime - 1, sigma_prime) for s in sizes)
    plan = AlmostUniformPlan(n, p.sigma, s0, t, rem, sigma_prime, sizes)
    bound = plan.delta_bound(p.epsilon)
    if bound is not None:
        assert plan.delta(p.epsilon) <= bound, (plan, bound)
    return plan


def almost_uniform_partition(n: int, p: FairnessParams) -> Partition:
    """``n // lo`` parts of size ``lo`` with the leftover spread round-robin from the front."""
    return almost_uniform_plan(n, p).partition()


def unhappy_upper_bound(d_len: int, sigma_prime: int) -> int:
    """Most same-colored unhappy points a window of ``d_len`` can hold against
    any coloring cut into parts of sizes ``sigma_prime - 1`` or ``sigma_prime``.

    Inside a part only its minority is unhappy, so a fully covered part gives at
    most ``sigma_prime // 2``; the two partially covered end parts give at most
    their overlap. With ``m`` whole parts inside the window that is
    ``d_len - m * (sigma_prime - 1) + m * (sigma_prime // 2)``; a window touching
    at most two parts holds at most ``sigma_prime``.
    """
    best = min(d_len, sigma_prime)
    half = sigma_prime // 2
    m = 1
    while m * (sigma_prime - 1) <= d_len:
        best = max(best, d_len - m * (sigma_prime - 1) + m * half)
        m += 1
    return min(best, d_len)


def guarantee_check(n: int, p: FairnessParams) -> bool:
    """True only if the almost-uniform cut of ``n`` points is fair for every coloring.

    Sound but not complete: ``False`` means the size-based bound could not
    rule out a deviating group.
    """
    plan = almost_uniform_plan(n, p)
    for d in range(p.lo, p.hi + 1):
        if deviation_threshold_met(unhappy_upper_bound(d, plan.max_size), d, p):
            return False
    return True


def beta_bar_reference(epsilon) -> Fraction:
    """Leading term of the closed-form threshold on beta above which the
    almost-uniform cut is fair, for epsilon in [0, 1/2]; additive slack omitted.
    Informational only; :func:`guarantee_check` is the decision procedure.
    """
    eps = Fraction(epsilon)
    if not 0 <= eps <= Fraction(1, 2):
        raise ConstructionError("reference threshold only defined for epsilon in [0, 1/2]")
    if eps <= Fraction(1, 3):
        return max(1 - eps, (1 + 3 * eps) / 2)
    return max(Fraction(3, 2) * (1 - eps), 2 * eps)


@dataclass(frozen=True)
class AlphaPartition:
    partition: Partition
    non_allowable: tuple[int, ...]
    alpha: Fraction

    def to_dict(self) -> dict:
        d = self.partition.to_dict()
        d["alpha"] = format_rational(self.alpha)
        d["non_allowable"] = list(self.non_allowable)
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def carve_run(length: int, p: FairnessParams) -> tuple[list[int], int]:
    """Cut a monochromatic stretch into allowable parts, leaving the smallest residual.

    With ``t = ceil(length / hi)``: if ``t * lo <= length`` the stretch splits into
    ``t`` near-equal allowable parts and nothing is left; otherwise ``t - 1``
    parts of size ``hi`` leave a residual below ``lo``.
    """
    if length <= 0:
        return [], 0
    t = ceil_div(length, p.hi)
    if t * p.lo <= length:
        base, extra = divmod(length, t)
        return [base + (1 if k < extra else 0) for k in range(t)], 0
    parts = [p.hi] * (t - 1)
    residual = length - (t - 1) * p.hi
    assert 0 < residual < p.lo
    return parts, residual


def partition_clustered(x: Instance, p: FairnessParams) -> AlphaPartition:
    """Run-following partition; colors mix only in parts of exactly ``lo`` points.

    Runs of at least ``2 sigma`` points are carved with :func:`carve_run`; the
    residual is carried forward and completed to ``lo`` points from what comes
    next. Maximal stretches of shorter runs either absorb the carry (the rest
    of their runs become standalone monochromatic parts, undersized if short)
    or, when too small, join the carry themselves. A carry left at the end is
    an undersized part.
    """
    lo = p.lo
    long_min = 2 * p.sigma
    runs = [length for _, length in x.runs]
    sizes: list[int] = []
    carry = 0

    def emit_piece(length):
        parts, residual = carve_run(length, p)
        sizes.extend(parts)
        if residual:
            sizes.append(residual)

    k = 0
    while k < len(runs):
        if runs[k] >= long_min:
            left = runs[k]
            if carry:
                take = lo - carry
                sizes.append(lo)
                left -= take
                carry = 0
            parts, carry = carve_run(left, p)
            sizes.extend(parts)
            k += 1
            continue
        block_end = k
        while block_end < len(runs) and runs[block_end] < long_min:
            block_end += 1
        block = runs[k:block_end]
        mass = sum(block)
        if carry + mass < lo:
            carry += mass
        else:
            need = lo - carry if carry else 0
            if need:
                sizes.append(lo)
                carry = 0
            for length in block:
                used = min(need, length)
                need -= used
                emit_piece(length - used)
        k = block_end
    if carry:
        sizes.append(carry)

    part = Partition.from_sizes(sizes)
    bad = tuple(t for t, s in enumerate(sizes) if not is_allowable(s, p))
    assert all(sizes[t] < lo for t in bad)
    alpha = Fraction(sum(sizes[t] for t in bad), x.n)
    return AlphaPartition(part, bad, alpha)


def clustered_alpha_bound(x: Instance, p: FairnessParams) -> Fraction:
    """``(1 - eps) sigma / n + gamma`` with gamma the share of points in runs under ``2 sigma``."""
    short = sum(length for _, length in x.runs if length < 2 * p.sigma)
    return (1 - p.epsilon) * p.sigma / x.n + Fraction(short, x.n)


def zero_alpha_run_threshold(p: FairnessParams) -> int | None:
    """Run length from which every residual can be absorbed; ``None`` when epsilon is 0."""
    if p.epsilon == 0:
        return None
    factor = (1 - p.epsilon) ** 2 / (2 * p.epsilon)
    return -(-factor.numerator // factor.denominator) * p.sigma
