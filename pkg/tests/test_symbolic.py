import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcutter import (DepthCapError, Locus, PointBatch, ScaledPoint, Word,
                        basic_interval, decompose_blocks, enumerate_intervals,
                        interval_J, interval_table, inverse_branch)
from flowcutter.cookie import LN3

words = st.text(alphabet="01", min_size=0, max_size=40)


# ----------------------------------------------------------------------
# words and block decompositions
# ----------------------------------------------------------------------

def test_word_basics():
    w = Word("0010")
    assert len(w) == 4 and list(w) == [0, 0, 1, 0]
    assert Word("0") < Word("1")
    assert Word.from_index(5, 4) == Word("0101")
    assert Word("0101").index == 5
    with pytest.raises(Exception):
        Word("012")


def test_block_examples():
    d = decompose_blocks("001101")
    assert d.blocks == ((2, 2), (1, 1))
    assert d.tails == (4, 1)
    assert decompose_blocks("111").blocks == ((0, 3),)
    assert decompose_blocks("00").blocks == ((2, 0),)


@given(words)
@settings(max_examples=300, deadline=None)
def test_block_round_trip(bits):
    d = decompose_blocks(bits)
    assert d.rebuild() == Word(bits)
    tails = d.tails
    assert all(a > b for a, b in zip(tails, tails[1:]))
    # interior runs are nonempty
    for j, (m, n) in enumerate(d.blocks):
        if j > 0:
            assert m > 0
        if j < len(d.blocks) - 1:
            assert n > 0


# ----------------------------------------------------------------------
# inverse branches
# ----------------------------------------------------------------------

def test_right_branch_fixed_point(cmap):
    one = ScaledPoint.from_raw(1.0)
    assert inverse_branch(cmap, 1, one) == one


def test_left_branch_from_right_window(cmap):
    p = ScaledPoint.from_raw(0.8)          # in J_0
    q = inverse_branch(cmap, 0, p)
    assert q.locus is Locus.INJ and q.n == 1
    t = cmap.schedule.flow_time(1)
    assert q.u == pytest.approx(cmap.engine.flow_position(-t, 0.8 * 3 - 2),
                                abs=1e-12)


def test_round_trip_bulk(cmap):
    rng = np.random.default_rng(17)
    xs = rng.uniform(0.0, 1.0, 10_000)
    batch = PointBatch.from_raw(xs)
    for symbol in (0, 1):
        pre, _ = cmap.inverse_batch(symbol, batch)
        img, _ = cmap.apply_batch(pre)
        assert np.max(np.abs(img.raw() - xs)) < 1e-11


def test_round_trip_scalar_points(cmap):
    for raw in (0.0, 0.31, 0.5, 0.77, 1.0):
        p = ScaledPoint.from_raw(raw)
        for s in (0, 1):
            q = inverse_branch(cmap, s, p)
            assert q.in_domain
            back = cmap.apply(q)
            assert abs(back.raw - raw) < 1e-11


# ----------------------------------------------------------------------
# basic intervals
# ----------------------------------------------------------------------

def test_depth_one_intervals(cmap):
    iv0 = basic_interval(cmap, "0")
    assert iv0.left.locus is Locus.ZERO
    assert iv0.right.raw == pytest.approx(1.0 / 3.0, abs=1e-16)
    assert iv0.log_size == pytest.approx(-LN3, rel=1e-15)
    iv1 = basic_interval(cmap, "1")
    assert iv1.left.raw == pytest.approx(2.0 / 3.0, abs=1e-16)
    assert iv1.right.raw == 1.0


@pytest.mark.parametrize("n", range(1, 13))
def test_window_addresses_are_exact(cmap, n):
    iv = basic_interval(cmap, "0" * n + "1")
    lo, hi = interval_J(n)
    assert iv.left == lo and iv.right == hi     # bitwise endpoint match
    assert iv.log_size == pytest.approx(-(n + 1) * LN3, rel=1e-13)


def test_address_01_is_second_window(cmap):
    iv = basic_interval(cmap, "01")
    assert iv.left.raw == pytest.approx(2.0 / 9.0, abs=1e-16)
    assert iv.right.raw == pytest.approx(1.0 / 3.0, abs=1e-16)


def test_all_zero_words(cmap):
    iv = basic_interval(cmap, "0" * 9)
    assert iv.left.locus is Locus.ZERO
    assert iv.log_size == pytest.approx(-9 * LN3, rel=1e-14)


def test_enumeration_depth_two(cmap):
    ivs = list(enumerate_intervals(cmap, 2))
    assert [str(iv.word) for iv in ivs] == ["00", "01", "10", "11"]
    rights = [iv.right.raw for iv in ivs]
    lefts = [iv.left.raw for iv in ivs]
    # spatially ordered and separated by gaps
    for i in range(3):
        assert rights[i] < lefts[i + 1]


def test_lex_order_is_spatial_order(cmap):
    ivs = list(enumerate_intervals(cmap, 8))
    mids = [0.5 * (iv.left.raw + iv.right.raw) for iv in ivs]
    assert all(a < b for a, b in zip(mids, mids[1:]))
    # pairwise disjoint, separated by genuine gaps
    for a, b in zip(ivs, ivs[1:]):
        assert a.right.raw < b.left.raw


def test_nesting(cmap):
    rng = np.random.default_rng(23)
    for _ in range(20):
        k = int(rng.integers(1, 7))
        bits = "".join(rng.choice(["0", "1"]) for _ in range(k))
        outer = basic_interval(cmap, bits)
        for s in "01":
            inner = basic_interval(cmap, bits + s)
            assert outer.left.raw <= inner.left.raw + 1e-15
            assert inner.right.raw <= outer.right.raw + 1e-15


def test_cover_length_decreases(cmap):
    prev = math.inf
    for k in range(1, 9):
        total = sum(math.exp(ls)
                    for ls in interval_table(cmap, k).log_sizes())
        assert total < prev
        prev = total


def test_iterates_stretch_onto_unit_interval(cmap):
    # endpoint orbits ride exactly on the branch junctions, so the strict
    # escape check needs a roundoff-sized slack to let them through
    rng = np.random.default_rng(29)
    for _ in range(12):
        k = int(rng.integers(1, 12))
        bits = "".join(rng.choice(["0", "1"]) for _ in range(k))
        iv = basic_interval(cmap, bits)
        left_end = cmap.iterate(iv.left, k, hole_slack=1e-10).point
        right_end = cmap.iterate(iv.right, k, hole_slack=1e-10).point
        assert abs(left_end.raw - 0.0) <= 1e-9
        assert abs(right_end.raw - 1.0) <= 1e-9


def test_log_size_matches_raw_difference(cmap):
    rng = np.random.default_rng(31)
    for _ in range(20):
        k = int(rng.integers(1, 13))
        bits = "".join(rng.choice(["0", "1"]) for _ in range(k))
        iv = basic_interval(cmap, bits)
        raw_width = iv.right.raw - iv.left.raw
        assert iv.log_size == pytest.approx(math.log(raw_width), abs=1e-9)


def test_membership_of_one_run_words(cmap):
    # words starting with 1 stay inside the right branch piece
    for bits in ("10", "110", "1011"):
        iv = basic_interval(cmap, bits)
        assert iv.left.raw >= 2.0 / 3.0 - 1e-15
        assert iv.right.raw <= 1.0


def test_depth_cap(cmap):
    with pytest.raises(DepthCapError):
        list(enumerate_intervals(cmap, 21))


def test_table_row_order_matches_words(cmap):
    table = interval_table(cmap, 5)
    assert table.size == 32
    for i in (0, 7, 19, 31):
        iv = basic_interval(cmap, Word.from_index(i, 5))
        left, right = table.endpoints(i)
        assert abs(left.raw - iv.left.raw) <= 1e-13
        assert abs(right.raw - iv.right.raw) <= 1e-13
