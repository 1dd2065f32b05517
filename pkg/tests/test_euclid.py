from collections import Counter
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from rsmsr.errors import IndexOutOfRange, InvalidArguments
from rsmsr.euclid import euclid_chain, local_coords, square_partition


@pytest.mark.parametrize("p,s,a,b", [
    (7, 5, (1, 2, 2), (2, 1)),
    (7, 3, (2, 3), (1,)),
    (6, 3, (2,), ()),
])
def test_chain_examples(p, s, a, b):
    c = euclid_chain(p, s)
    assert (c.a, c.b_rest, c.m) == (a, b, len(b))


@pytest.mark.parametrize("p,s", [(3, 3), (2, 5), (4, 0)])
def test_chain_rejects(p, s):
    with pytest.raises(InvalidArguments):
        euclid_chain(p, s)


@pytest.mark.parametrize("h,w,squares", [
    (7, 5, [(0, 0, 5), (5, 0, 2), (5, 2, 2), (5, 4, 1), (6, 4, 1)]),
    (2, 2, [(0, 0, 2)]),
    (5, 3, [(0, 0, 3), (3, 0, 2), (3, 2, 1), (4, 2, 1)]),
])
def test_partition_examples(h, w, squares):
    assert [q.as_tuple() for q in square_partition(h, w).squares] == squares


def test_ascii_layout():
    assert square_partition(7, 5).ascii().splitlines()[-2:] == ["bbccd", "bbcce"]


@pytest.mark.parametrize("p,s,j,want", [(7, 5, 0, [0, 0]), (7, 5, 1, [1, 0]), (7, 3, 0, [0])])
def test_local_coords_examples(p, s, j, want):
    assert local_coords(j, euclid_chain(p, s)) == want


def test_local_coords_range():
    with pytest.raises(IndexOutOfRange):
        local_coords(2, euclid_chain(7, 5))
    with pytest.raises(IndexOutOfRange):
        local_coords(0, euclid_chain(6, 3))


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.integers(1, 200), st.integers(1, 200))
def test_chain_invariants(x, y):
    p, s = max(x, y) + 1, min(x, y)
    c = euclid_chain(p, s)
    bs = [c.b(t) for t in range(c.m + 1)]
    assert p == c.a[0] * s + (c.b1 if c.m else 0)
    for t in range(1, c.m + 1):
        nxt = c.b(t + 1) if t + 1 <= c.m else 0
        assert bs[t - 1] == c.a[t] * bs[t] + nxt
    assert all(u > v > 0 for u, v in zip(bs, bs[1:]))
    assert bs[-1] == gcd(p, s)


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.integers(1, 60), st.integers(1, 60))
def test_partition_tiles_rectangle(h, w):
    part = square_partition(h, w)
    cells = Counter(cell for q in part.squares for cell in q.cells())
    assert all(v == 1 for v in cells.values())
    assert set(cells) == {(r, c) for r in range(h) for c in range(w)}
    assert sum(q.side**2 for q in part.squares) == h * w


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.integers(2, 80), st.integers(1, 79))
def test_partition_sides_follow_chain(p, s):
    if s >= p:
        s, p = p - 1, p
    part = square_partition(p, s)
    chain = euclid_chain(p, s)
    assert part.side_multiset() == chain.side_multiset()
    # the chain can be read back from the side multiset
    sides = sorted(part.side_multiset().items(), reverse=True)
    assert tuple(k for _, k in sides) == chain.a
    assert tuple(v for v, _ in sides[1:]) == chain.b_rest
