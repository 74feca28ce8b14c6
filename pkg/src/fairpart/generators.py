"""Instance families: alternating short runs (no fair partition), clustered, random.

Every generator is a pure function of its arguments; randomness comes from
``numpy.random.default_rng(seed)``. Each returns a :class:`Generated` pairing
the instance with a metadata dict that is written as a ``# meta:`` line.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    Color,
    FairPartError,
    Instance,
    ceil_div,
    format_rational,
    parse_rational,
    serialize_instance,
)

__all__ = [
    "Generated",
    "GeneratorError",
    "adversarial_threshold",
    "gen_adversarial",
    "gen_multi_sigma_adversarial",
    "gen_clustered",
    "gen_mostly_clustered",
    "gen_uniform_random",
]


class GeneratorError(FairPartError):
    pass


@dataclass(frozen=True)
class Generated:
    instance: Instance
    meta: dict

    def to_text(self) -> str:
        head = "# meta: " + json.dumps(self.meta, sort_keys=True, separators=(",", ":"))
        return head + "\n" + serialize_instance(self.instance) + "\n"


def _alternating(lengths, first: Color = Color.RED) -> Instance:
    runs = []
    color = first
    for length in lengths:
        if length > 0:
            runs.append((color, int(length)))
        color = color.other
    return Instance.from_runs(runs)


def _run_length(sigma: int, beta: Fraction) -> int:
    return ceil_div(beta.numerator * sigma, beta.denominator)


def adversarial_threshold(sigma: int, epsilon, beta) -> Fraction | None:
    """Length above which the alternating construction has no fair partition on a circle.

    Uses ``beta' = ceil(beta sigma) / sigma`` in place of ``beta``. Returns
    ``None`` when rounding pushes ``beta'`` up to ``1 - epsilon``, where the
    bound is undefined.
    """
    eps, beta = parse_rational(epsilon), parse_rational(beta)
    bp = Fraction(_run_length(sigma, beta), sigma)
    if bp >= 1 - eps:
        return None
    return (3 - 3 * eps - 2 * bp) * bp * sigma / (2 * (1 - eps - bp))


def gen_adversarial(sigma: int, epsilon, beta, n: int) -> Generated:
    """Alternating runs of ``ceil(beta sigma)`` points starting with red; the
    last run is cut short to total ``n``."""
    eps, beta = parse_rational(epsilon), parse_rational(beta)
    if sigma < 1:
        raise GeneratorError("sigma must be positive")
    if beta >= 1 - eps:
        raise GeneratorError(f"need beta < 1 - epsilon, got beta={beta}, epsilon={eps}")
    r = _run_length(sigma, beta)
    n0 = adversarial_threshold(sigma, eps, beta)
    if n <= r:
        raise GeneratorError(f"n={n} must exceed the run length {r} to hold two runs")
    if Fraction(r, sigma) * 2 == 1 - eps:
        warnings.warn("rounded beta equals (1 - epsilon)/2: the majority step of the "
                      "construction is only non-strict here", stacklevel=2)
    full, last = divmod(n, r)
    lengths = [r] * full + ([last] if last else [])
    meta = {
        "kind": "adversarial",
        "sigma": sigma,
        "epsilon": format_rational(eps),
        "beta": format_rational(beta),
        "n": n,
        "run_length": r,
        "last_run_length": lengths[-1],
        "threshold_n0": None if n0 is None else format_rational(n0),
        "above_threshold": n0 is not None and n > n0,
    }
    return Generated(_alternating(lengths), meta)


def gen_multi_sigma_adversarial(sigmas, epsilon, beta, n: int) -> Generated:
    """One adversarial block of ``n // M`` points per ideal size; the leftover
    points extend the final run."""
    eps, beta = parse_rational(epsilon), parse_rational(beta)
    sigmas = [int(s) for s in sigmas]
    if not sigmas:
        raise GeneratorError("need at least one sigma")
    if beta >= 1 - eps:
        raise GeneratorError(f"need beta < 1 - epsilon, got beta={beta}, epsilon={eps}")
    M = len(sigmas)
    gap = 1 / (1 - eps - beta)
    need = -(-gap.numerator // gap.denominator)
    for s in sigmas:
        if not Fraction(n, M * s) > need:
            raise GeneratorError(f"n/(M*sigma) = {Fraction(n, M * s)} must exceed {need} (sigma={s})")
    block = n // M
    lengths = []
    blocks = []
    for s in sigmas:
        g = gen_adversarial(s, eps, beta, block)
        # colors alternate by run index, so a block may start with blue
        lengths.extend(length for _, length in g.instance.runs)
        blocks.append({"sigma": s, "run_length": g.meta["run_length"],
                       "threshold_n0": g.meta["threshold_n0"]})
    lengths[-1] += n - block * M
    meta = {
        "kind": "multi-sigma",
        "sigmas": sigmas,
        "epsilon": format_rational(eps),
        "beta": format_rational(beta),
        "n": n,
        "block_size": block,
        "blocks": blocks,
    }
    return Generated(_alternating(lengths), meta)


def gen_clustered(n: int, min_run: int, max_run: int, seed: int) -> Generated:
    """Alternating runs with lengths uniform in ``[min_run, max_run]``."""
    if min_run < 1 or max_run < min_run:
        raise GeneratorError("need 1 <= min_run <= max_run")
    if n < min_run:
        raise GeneratorError(f"n={n} is shorter than one run ({min_run})")
    rng = np.random.default_rng(seed)
    first = Color(int(rng.integers(2)))
    lengths = []
    total = 0
    while total < n:
        length = int(rng.integers(min_run, max_run + 1))
        length = min(length, n - total)
        lengths.append(length)
        total += length
    meta = {
        "kind": "clustered",
        "n": n,
        "min_run": min_run,
        "max_run": max_run,
        "seed": seed,
        "runs": len(lengths),
        "last_run_length": lengths[-1],
        "last_run_truncated": lengths[-1] < min_run,
    }
    return Generated(_alternating(lengths, first), meta)


def gen_mostly_clustered(n: int, sigma: int, gamma, min_run: int, seed: int,
                         max_run: int | None = None) -> Generated:
    """Long runs (at least ``min_run``) with bursts of runs shorter than ``2 sigma``.

    Short runs are only placed while their total stays within ``gamma n`` and
    a final long run still fits, so the realized share never exceeds ``gamma``.
    """
    gamma = parse_rational(gamma)
    if not 0 <= gamma < 1:
        raise GeneratorError("gamma must lie in [0, 1)")
    if min_run < 2 * sigma:
        raise GeneratorError(f"min_run={min_run} must be at least 2*sigma={2 * sigma}")
    if n < min_run:
        raise GeneratorError(f"n={n} cannot hold a single long run of {min_run}")
    max_run = 2 * min_run if max_run is None else max_run
    if max_run < min_run:
        raise GeneratorError("max_run must be at least min_run")
    rng = np.random.default_rng(seed)
    first = Color(int(rng.integers(2)))
    budget = (gamma.numerator * n) // gamma.denominator
    short_cap = 2 * sigma - 1
    lengths = []
    short_total = 0
    left = n
    while left > 0:
        if left < 2 * min_run:
            long_len = left
        else:
            long_len = int(rng.integers(min_run, min(max_run, left - min_run) + 1))
        lengths.append(long_len)
        left -= long_len
        if left == 0 or short_total >= budget or rng.random() < 0.5:
            continue
        burst = int(rng.integers(1, 4))
        for _ in range(burst):
            room = min(budget - short_total, left - min_run, short_cap)
            if room < 1:
                break
            s = int(rng.integers(1, room + 1))
            lengths.append(s)
            short_total += s
            left -= s
    realized = Fraction(short_total, n)
    meta = {
        "kind": "mostly-clustered",
        "n": n,
        "sigma": sigma,
        "gamma": format_rational(gamma),
        "min_run": min_run,
        "max_run": max_run,
        "seed": seed,
        "short_points": short_total,
        "realized_gamma": format_rational(realized),
    }
    return Generated(_alternating(lengths, first), meta)


def gen_uniform_random(n: int, p_red, seed: int) -> Generated:
    """Each point independently red with probability ``p_red``."""
    p_red = parse_rational(p_red)
    if not 0 <= p_red <= 1:
        raise GeneratorError("p_red must lie in [0, 1]")
    if n < 1:
        raise GeneratorError("n must be positive")
    rng = np.random.default_rng(seed)
    if p_red == 1:
        red = np.ones(n, dtype=np.uint8)
    else:
        red = (rng.random(n) < float(p_red)).astype(np.uint8)
    x = Instance(red)
    meta = {"kind": "random", "n": n, "p_red": format_rational(p_red), "seed": seed}
    return Generated(x, meta)
