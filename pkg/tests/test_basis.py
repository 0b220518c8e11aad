import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumsetlab import (
    Augmented,
    Explicit,
    InvalidParameterError,
    Polygonal,
    enumerate_basis,
    parse_spec,
    polygonal_value,
    to_bitmap,
)
from sumsetlab.basis import polygonal_count


def gnomon_sequence(k, terms):
    # each step adds the next gnomon 1 + (k-2)*x
    seq, value = [0], 0
    for x in range(terms - 1):
        value += 1 + (k - 2) * x
        seq.append(value)
    return seq


@pytest.mark.parametrize("k, x, expected", [(3, 4, 10), (4, 0, 0), (5, 3, 12)])
def test_polygonal_value_examples(k, x, expected):
    assert polygonal_value(k, x) == expected


def test_pentagonal_matches_gnomon_oracle():
    assert gnomon_sequence(5, 4) == [0, 1, 5, 12]
    for k in range(3, 12):
        assert [polygonal_value(k, x) for x in range(50)] == gnomon_sequence(k, 50)


def test_polygonal_rejects_small_k():
    with pytest.raises(InvalidParameterError):
        polygonal_value(2, 3)
    with pytest.raises(InvalidParameterError):
        Polygonal(2)


def test_polygonal_overflow_is_reported():
    with pytest.raises(InvalidParameterError, match="overflows"):
        polygonal_value(3, 2**33)


@pytest.mark.parametrize("k", range(3, 20))
def test_second_differences_constant(k):
    seq = [polygonal_value(k, x) for x in range(40)]
    assert seq[0] == 0 and seq[1] == 1
    assert all(seq[i + 2] - 2 * seq[i + 1] + seq[i] == k - 2 for i in range(38))


def test_triangular_and_square_closed_forms():
    for x in range(10**4 + 1):
        assert polygonal_value(3, x) == x * (x + 1) // 2
        assert polygonal_value(4, x) == x * x


@given(st.integers(3, 40), st.integers(0, 10**7))
def test_polygonal_count_is_exact(k, bound):
    c = polygonal_count(k, bound)
    assert polygonal_value(k, c - 1) <= bound < polygonal_value(k, c)


@pytest.mark.parametrize(
    "spec, bound, expected",
    [
        (Polygonal(3), 12, [0, 1, 3, 6, 10]),
        (Explicit([2, 7]), 1, []),
        (Augmented(Polygonal(5), [2, 3]), 6, [0, 1, 2, 3, 5]),
    ],
)
def test_enumerate_examples(spec, bound, expected):
    assert enumerate_basis(spec, bound) == expected


@pytest.mark.parametrize(
    "spec, bound, bits",
    [
        (Polygonal(3), 6, [0, 1, 3, 6]),
        (Explicit([]), 10, []),
        (Polygonal(4), 20, [0, 1, 4, 9, 16]),
    ],
)
def test_to_bitmap_examples(spec, bound, bits):
    bm = to_bitmap(spec, bound)
    assert bm.members() == bits
    assert bm.bound == bound


def test_explicit_must_increase():
    with pytest.raises(InvalidParameterError):
        Explicit([3, 1])
    with pytest.raises(InvalidParameterError):
        Explicit([1, 1])
    with pytest.raises(InvalidParameterError):
        Explicit([-1, 2])
    with pytest.raises(InvalidParameterError):
        Augmented(Polygonal(3), [5, 2])


@given(
    st.integers(3, 10),
    st.lists(st.integers(0, 500), unique=True).map(sorted),
    st.integers(0, 600),
)
def test_augmented_is_sorted_union(k, extra, bound):
    got = enumerate_basis(Augmented(Polygonal(k), extra), bound)
    want = sorted(set(enumerate_basis(Polygonal(k), bound)) | {f for f in extra if f <= bound})
    assert got == want


@given(st.integers(3, 12), st.integers(0, 5000))
def test_enumeration_strictly_increasing_within_bound(k, bound):
    values = enumerate_basis(Polygonal(k), bound)
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(0 <= v <= bound for v in values)


@pytest.mark.parametrize(
    "text, spec",
    [
        ("poly:3", Polygonal(3)),
        ("set:2,7", Explicit([2, 7])),
        ("set:", Explicit([])),
        ("aug:poly:5+set:2,3", Augmented(Polygonal(5), [2, 3])),
        ("aug:set:0,4+set:1", Augmented(Explicit([0, 4]), [1])),
        ("aug:poly:5+set:0..3", Augmented(Polygonal(5), [0, 1, 2, 3])),
    ],
)
def test_parse_spec(text, spec):
    assert parse_spec(text) == spec
    assert parse_spec(str(spec)) == spec


@pytest.mark.parametrize(
    "text, token", [("poly:x", "'x'"), ("tri:3", "'tri:3'"), ("aug:poly:3", "aug"), ("poly:2", ">= 3")]
)
def test_parse_spec_errors_name_the_token(text, token):
    with pytest.raises(InvalidParameterError, match=token):
        parse_spec(text)


def test_bound_limit():
    with pytest.raises(InvalidParameterError):
        enumerate_basis(Polygonal(3), 2**32 + 1)
