from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import params
from fairpart import (
    TIE_COLOR,
    Color,
    FairnessParams,
    Instance,
    InstanceFormatError,
    Interval,
    ParameterError,
    count_colors,
    deviation_threshold_met,
    is_allowable,
    majority_color,
    measure,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from oracles import allowable_sizes

colorings = st.text(alphabet="RB", min_size=1, max_size=80)


# --- parsing -------------------------------------------------------------------


def test_parse_string_and_runs():
    x = parse_instance("RRBB")
    assert x.n == 4 and x.runs == ((Color.RED, 2), (Color.BLUE, 2))
    y = parse_instance("5R 3B")
    assert y.n == 8 and y.runs == ((Color.RED, 5), (Color.BLUE, 3))


def test_parse_merges_adjacent_tokens():
    x = parse_instance("2R 2R 1B")
    assert x.runs == ((Color.RED, 4), (Color.BLUE, 1))


def test_parse_skips_comments_and_blank_lines():
    x = parse_instance("# meta: {}\n\n  RB\nBR  \n")
    assert x.to_string() == "RBBR"


@pytest.mark.parametrize("text", ["", "# only a comment\n", "3R 0B", "3X", "R5", "RRQ"])
def test_parse_rejects(text):
    with pytest.raises(InstanceFormatError):
        parse_instance(text)


@given(colorings)
def test_serialize_roundtrip(s):
    x = Instance.from_string(s)
    assert parse_instance(serialize_instance(x)) == x
    assert parse_instance(x.to_string()) == x
    assert sum(length for _, length in x.runs) == x.n


def test_runs_alternate_and_prefix_monotone():
    x = parse_instance("3R 2B 1R 4B")
    cols = [c for c, _ in x.runs]
    assert all(a != b for a, b in zip(cols, cols[1:]))
    assert x.red_prefix[0] == 0 and x.red_prefix[-1] == 4
    assert np.all(np.diff(x.red_prefix) >= 0)


def test_instance_is_immutable():
    x = parse_instance("RRB")
    with pytest.raises(ValueError):
        x.is_red[0] = 0


# --- rationals -----------------------------------------------------------------


@pytest.mark.parametrize("text,value", [
    ("1/4", Fraction(1, 4)), ("0.25", Fraction(1, 4)), ("0", Fraction(0)),
    ("1", Fraction(1)), (".5", Fraction(1, 2)), ("2/6", Fraction(1, 3)),
    ("0.1", Fraction(1, 10)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.1.1", "1/0", "abc", "", "-1/2", "1e-3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


# --- parameters ----------------------------------------------------------------


def test_allowable_examples():
    p = params(8, "1/4")
    assert (p.lo, p.hi) == (6, 10)
    assert is_allowable(6, p) and not is_allowable(5, p)
    assert is_allowable(10, p) and not is_allowable(11, p)
    assert is_allowable(Interval(2, 7), p)


@pytest.mark.parametrize("eps", ["0", "1/8", "1/5", "1/4", "1/3", "1/2"])
@pytest.mark.parametrize("sigma", [1, 2, 3, 5, 8, 10, 13])
def test_allowable_matches_real_inequality(sigma, eps):
    try:
        p = params(sigma, eps)
    except ParameterError:
        assert allowable_sizes(sigma, eps) == []
        return
    expected = set(allowable_sizes(sigma, eps))
    got = {L for L in range(1, 4 * sigma + 1) if is_allowable(L, p)}
    assert got == expected


def test_parameter_validation():
    with pytest.raises(ParameterError):
        params(8, "3/4")
    with pytest.raises(ParameterError):
        params(8, "1/4", beta="1/3")
    with pytest.raises(ParameterError):
        params(0, "0")


def test_min_unhappy_by_mode():
    assert params(8, "1/4", "5/8").min_unhappy == 5
    assert params(8, "1/4", "5/8", "strict").min_unhappy == 6
    assert params(10, "0", "2/3").min_unhappy == 7
    assert params(10, "0", "2/3", "strict").min_unhappy == 7


def test_max_span():
    assert params(2, "0").max_span == 2
    assert params(16, "1/4").max_span == 3
    assert params(8, "1/2").max_span == 4
    assert params(4, "1/2").max_span == 4


def test_measure_exact():
    assert measure(Interval(0, 6), 8) * 8 == 6


# --- counting ------------------------------------------------------------------


def test_majority_examples():
    assert majority_color(parse_instance("RRB"), Interval(0, 3)) is Color.RED
    assert majority_color(parse_instance("RB"), Interval(0, 2)) is TIE_COLOR is Color.BLUE
    assert majority_color(parse_instance("BBB"), Interval(0, 3)) is Color.BLUE


def test_count_colors_examples():
    x = parse_instance("RRBB")
    assert count_colors(x, Interval(1, 2)) == (1, 1)
    assert count_colors(x, Interval(0, 4)) == (2, 2)
    assert count_colors(x, Interval(3, 2)) == (1, 1)  # wraps to points 4 and 1


@given(colorings, st.data())
def test_count_colors_matches_naive(s, data):
    x = Instance.from_string(s)
    n = len(s)
    start = data.draw(st.integers(0, n - 1))
    length = data.draw(st.integers(1, n))
    pts = [s[(start + k) % n] for k in range(length)]
    assert count_colors(x, Interval(start, length)) == (pts.count("R"), pts.count("B"))


def test_prefix_counts_on_random_pairs():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        s = "".join(rng.choice(["R", "B"], size=n))
        x = Instance.from_string(s)
        a = int(rng.integers(0, n))
        b = int(rng.integers(a + 1, n + 1))
        sub = s[a:b]
        assert count_colors(x, Interval(a, b - a)) == (sub.count("R"), sub.count("B"))


@given(colorings, st.data())
def test_swap_mirrors_majority_off_ties(s, data):
    x = Instance.from_string(s)
    n = len(s)
    start = data.draw(st.integers(0, n - 1))
    length = data.draw(st.integers(1, n - start))
    iv = Interval(start, length)
    r, b = count_colors(x, iv)
    if r != b:
        assert majority_color(x.swapped(), iv) is majority_color(x, iv).other


# --- deviation threshold -------------------------------------------------------


def test_threshold_examples():
    inc = params(8, "1/4", "5/8")
    strict = params(8, "1/4", "5/8", "strict")
    assert deviation_threshold_met(5, 6, inc)
    assert not deviation_threshold_met(5, 6, strict)
    assert not deviation_threshold_met(3, 6, params(8, "1/4", "1/2"))
    assert not deviation_threshold_met(3, 6, params(8, "1/4", "1"))


@given(st.integers(1, 20), st.fractions(Fraction(1, 2), 1), st.integers(0, 40), st.integers(1, 40),
       st.sampled_from(["strict", "inclusive"]))
def test_threshold_matches_min_unhappy(sigma, beta, u, d, mode):
    p = FairnessParams(sigma, Fraction(0), beta, mode)
    bs = beta * sigma
    beta_ok = u > bs if mode == "strict" else u >= bs
    assert deviation_threshold_met(u, d, p) == (2 * u > d and beta_ok)
    assert deviation_threshold_met(u, d, p) == (2 * u > d and u >= p.min_unhappy)
