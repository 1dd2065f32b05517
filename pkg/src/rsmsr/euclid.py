"""Euclidean chains and the Euclidean square partition of an index rectangle."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import IndexOutOfRange, InvalidArguments

__all__ = [
    "EuclidChain",
    "Square",
    "SquarePartition",
    "euclid_chain",
    "square_partition",
    "local_coords",
]


@dataclass(frozen=True)
class EuclidChain:
    """Quotients a_0..a_m and remainders b_1..b_m of the Euclidean algorithm on (p, s).

    p = a_0 s + b_1, s = a_1 b_1 + b_2, b_1 = a_2 b_2 + b_3, …,
    b_{m-1} = a_m b_m, so b_m = gcd(p, s).  ``b(0)`` returns s.
    """

    p: int
    s: int
    a: tuple[int, ...]
    b_rest: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.b_rest)

    def b(self, t: int) -> int:
        """b_t with the convention b_0 = s."""
        if t == 0:
            return self.s
        if not 1 <= t <= self.m:
            raise IndexOutOfRange(f"b_{t} undefined for a chain of length {self.m}")
        return self.b_rest[t - 1]

    @property
    def b1(self) -> int:
        """Width of the residual block; 0 when s divides p."""
        return self.b_rest[0] if self.b_rest else 0

    def side_multiset(self) -> Counter:
        sides = Counter({self.s: self.a[0]})
        for t in range(1, self.m + 1):
            sides[self.b(t)] += self.a[t]
        return sides


def euclid_chain(p: int, s: int) -> EuclidChain:
    """Run the Euclidean algorithm on p > s ≥ 1.

    >>> euclid_chain(7, 5)
    EuclidChain(p=7, s=5, a=(1, 2, 2), b_rest=(2, 1))
    """
    if s < 1 or p <= s:
        raise InvalidArguments(f"need p > s >= 1, got p={p}, s={s}")
    a = [p // s]
    b = []
    prev, cur = s, p % s
    while cur:
        b.append(cur)
        a.append(prev // cur)
        prev, cur = cur, prev % cur
    return EuclidChain(p, s, tuple(a), tuple(b))


@dataclass(frozen=True)
class Square:
    """A side × side block with top-left cell (row, col), 0-based."""

    row: int
    col: int
    side: int

    def cells(self):
        for u in range(self.side):
            for v in range(self.side):
                yield self.row + u, self.col + v

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.row, self.col, self.side)


@dataclass(frozen=True)
class SquarePartition:
    h: int
    w: int
    squares: tuple[Square, ...]

    def side_multiset(self) -> Counter:
        return Counter(q.side for q in self.squares)

    def square_at(self, row: int, col: int) -> Square:
        for sq in self.squares:
            if sq.row <= row < sq.row + sq.side and sq.col <= col < sq.col + sq.side:
                return sq
        raise IndexOutOfRange(f"cell ({row}, {col}) outside {self.h}x{self.w}")

    def ascii(self) -> str:
        """One letter per square, in placement order (a, b, …, z, A, …)."""
        letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        grid = [["?"] * self.w for _ in range(self.h)]
        for k, sq in enumerate(self.squares):
            ch = letters[k % len(letters)]
            for r, c in sq.cells():
                grid[r][c] = ch
        return "\n".join("".join(row) for row in grid)


def square_partition(h: int, w: int) -> SquarePartition:
    """Tile [0,h-1]×[0,w-1] greedily by the largest squares, recursing on the rest.

    At each stage t = min(h, w); squares run left-to-right when w ≥ h and
    top-to-bottom otherwise.  Squares are listed in placement order.
    """
    if h < 1 or w < 1:
        raise InvalidArguments(f"rectangle sides must be positive, got {h}x{w}")
    squares = []
    r0, c0, hh, ww = 0, 0, h, w
    while hh and ww:
        t = min(hh, ww)
        if ww >= hh:
            k = ww // t
            squares.extend(Square(r0, c0 + i * t, t) for i in range(k))
            c0 += k * t
            ww -= k * t
        else:
            k = hh // t
            squares.extend(Square(r0 + i * t, c0, t) for i in range(k))
            r0 += k * t
            hh -= k * t
    return SquarePartition(h, w, tuple(squares))


def local_coords(j: int, chain: EuclidChain) -> list[int]:
    """Local column coordinates j^(0), j^(2), … of residual column j.

    j^(2t) = j^(2t-2) mod b_{2t}.  The sequence ends at the first
    horizontal step the column does not pass through (its quotient is
    below a_{2t}), or when the chain runs out.
    """
    if chain.m < 1:
        raise IndexOutOfRange("chain has no residual columns")
    if not 0 <= j < chain.b1:
        raise IndexOutOfRange(f"j={j} outside [0, {chain.b1 - 1}]")
    out = [j]
    t = 1
    while 2 * t <= chain.m:
        prev = out[-1]
        b2t = chain.b(2 * t)
        out.append(prev % b2t)
        if prev // b2t != chain.a[2 * t]:
            break
        t += 1
    return out
