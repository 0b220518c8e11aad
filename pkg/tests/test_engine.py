import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumsetlab import IntervalBitmap, InvalidParameterError, Polygonal, to_bitmap
from sumsetlab.engine import complement_members, counting, counting_many, hfold, sumset
from tests.conftest import brute_hfold


def bm(bound, members):
    return IntervalBitmap.from_members(bound, members)


@st.composite
def sparse_sets(draw, max_bound=2000):
    bound = draw(st.integers(0, max_bound))
    members = draw(st.lists(st.integers(0, bound), max_size=25, unique=True))
    return bound, members


# -- bitmap basics ---------------------------------------------------------


def test_bits_above_bound_are_zero():
    full = IntervalBitmap.full(70)
    assert full.popcount() == 71
    assert int(full.words[-1]) == (1 << 7) - 1
    with pytest.raises(InvalidParameterError):
        IntervalBitmap(70, np.array([0, 1 << 10], dtype=np.uint64))


@given(sparse_sets())
def test_popcount_is_cardinality(case):
    bound, members = case
    b = bm(bound, members)
    assert b.popcount() == len(members)
    assert b.members() == sorted(members)


def test_word_layout():
    b = bm(200, [0, 63, 64, 130])
    assert b.words.tolist() == [1 | (1 << 63), 1, 1 << 2, 0]


@given(case=sparse_sets())
def test_serialization_round_trip(case, tmp_path_factory):
    bound, members = case
    b = bm(bound, members)
    assert IntervalBitmap.from_bytes(b.to_bytes()) == b
    path = tmp_path_factory.mktemp("bm") / "x.ssl"
    b.save(path)
    assert IntervalBitmap.load(path) == b


def test_file_format_header():
    data = bm(64, [0, 64]).to_bytes()
    assert data[:4] == b"SSL1"
    assert data[4:12] == (64).to_bytes(8, "little")
    assert data[12:] == (1).to_bytes(8, "little") + (1).to_bytes(8, "little")
    with pytest.raises(InvalidParameterError):
        IntervalBitmap.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(InvalidParameterError):
        IntervalBitmap.from_bytes(data[:-1])


# -- sumset ----------------------------------------------------------------


def test_sumset_example():
    # all nine pairs of {0,1,3}, truncated at 6
    assert brute_hfold([0, 1, 3], 2, 6) == {0, 1, 2, 3, 4, 6}
    assert sumset(bm(6, [0, 1, 3]), bm(6, [0, 1, 3])).members() == [0, 1, 2, 3, 4, 6]


@given(sparse_sets())
def test_identity_and_annihilator(case):
    bound, members = case
    x = bm(bound, members)
    assert sumset(x, bm(bound, [0])) == x
    assert sumset(IntervalBitmap.empty(bound), x) == IntervalBitmap.empty(bound)
    assert sumset(x, IntervalBitmap.empty(bound)) == IntervalBitmap.empty(bound)


def test_mismatched_bounds():
    with pytest.raises(InvalidParameterError):
        sumset(bm(10, [1]), bm(11, [1]))


@given(st.data())
def test_commutative_and_associative(data):
    bound = data.draw(st.integers(0, 1500))
    sets = [bm(bound, data.draw(st.lists(st.integers(0, bound), max_size=30))) for _ in range(3)]
    x, y, z = sets
    assert sumset(x, y) == sumset(y, x)
    assert sumset(sumset(x, y), z) == sumset(x, sumset(y, z))


@given(
    st.lists(st.integers(0, 5000), max_size=20),
    st.lists(st.integers(0, 5000), max_size=20),
    st.integers(0, 2000),
)
def test_truncation_exact(a, b, bound):
    full = {x + y for x in a for y in b}
    got = sumset(bm(bound, [v for v in a if v <= bound]), bm(bound, [v for v in b if v <= bound]))
    assert got.members() == sorted(s for s in full if s <= bound)


def test_dense_operands_saturate():
    x = bm(5000, range(0, 3000))
    y = bm(5000, list(range(0, 2500, 2)) + [4000])
    want = {a + b for a in range(3000) for b in list(range(0, 2500, 2)) + [4000] if a + b <= 5000}
    assert sumset(x, y).members() == sorted(want)


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_parallel_matches_sequential(workers):
    t = to_bitmap(Polygonal(3), 50_000)
    two = sumset(t, t, workers=1)
    assert sumset(t, two, workers=workers) == sumset(t, two, workers=1)


def test_threads_env_var(monkeypatch):
    t = to_bitmap(Polygonal(4), 20_000)
    expected = sumset(t, t, workers=1)
    monkeypatch.setenv("SUMSETLAB_THREADS", "4")
    assert sumset(t, t) == expected


# -- hfold -----------------------------------------------------------------


def test_hfold_gauss_ten_thousand():
    assert hfold(to_bitmap(Polygonal(3), 10**4), 3).is_full()


def test_hfold_small_examples():
    a = bm(10, [0, 1])
    assert hfold(a, 1) == a
    assert brute_hfold([0, 1], 5, 10) == {0, 1, 2, 3, 4, 5}
    assert hfold(a, 5).members() == [0, 1, 2, 3, 4, 5]
    with pytest.raises(InvalidParameterError):
        hfold(a, 0)


@settings(max_examples=100, deadline=None)
@given(sparse_sets(), st.integers(1, 8))
def test_doubling_equals_naive(case, h):
    bound, members = case
    a = bm(bound, members)
    naive = a
    for _ in range(h - 1):
        naive = sumset(naive, a)
    assert hfold(a, h, method="doubling") == naive
    assert hfold(a, h, method="chain") == naive
    assert hfold(a, h) == naive


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 300), st.lists(st.integers(0, 300), max_size=10), st.integers(1, 4))
def test_hfold_matches_tuple_enumeration(bound, members, h):
    got = hfold(bm(bound, [m for m in members if m <= bound]), h)
    assert set(got.members()) == brute_hfold(members, h, bound)


@settings(max_examples=40, deadline=None)
@given(sparse_sets(), st.integers(1, 7))
def test_nesting_when_zero_present(case, h):
    bound, members = case
    a = bm(bound, set(members) | {0})
    assert hfold(a, h).issubset(hfold(a, h + 1))


def test_unknown_method():
    with pytest.raises(InvalidParameterError):
        hfold(bm(5, [0]), 2, method="fft")


# -- complement and counting ----------------------------------------------


def test_complement_examples():
    assert sorted(set(range(21)) - brute_hfold([0, 1, 3, 6, 10, 15], 2, 20)) == [5, 8, 14, 17, 19]
    two_t = hfold(to_bitmap(Polygonal(3), 20), 2)
    assert complement_members(two_t, 0, 20) == [5, 8, 14, 17, 19]
    assert complement_members(IntervalBitmap.full(50), 0, 50) == []
    squares = [x * x for x in range(11)]
    assert sorted(set(range(31)) - brute_hfold(squares, 3, 100)) == [7, 15, 23, 28]
    assert complement_members(hfold(to_bitmap(Polygonal(4), 100), 3), 0, 30) == [7, 15, 23, 28]


def test_complement_range_checked():
    with pytest.raises(InvalidParameterError):
        complement_members(bm(10, []), 5, 11)
    with pytest.raises(InvalidParameterError):
        complement_members(bm(10, []), 6, 5)


def test_counting_examples():
    t = to_bitmap(Polygonal(3), 10**6)
    assert counting(t, 10) == 4
    assert counting(t, 0) == 0
    # largest x with x(x+1)/2 <= 10**6 is x = 1413
    from math import isqrt

    assert (isqrt(8 * 10**6 + 1) - 1) // 2 == 1413
    assert counting(t, 10**6) == 1413
    with pytest.raises(InvalidParameterError):
        counting(t, 10**6 + 1)


@given(sparse_sets(), st.data())
def test_counting_excludes_zero(case, data):
    bound, members = case
    b = bm(bound, members)
    n = data.draw(st.integers(0, bound))
    expected = sum(1 for m in members if 1 <= m <= n)
    assert counting(b, n) == expected
    assert counting_many(b, [n]) == [expected]
