"""Symbolic basis transformation B → R → R̄ and the subspace S it produces.

Entries are kept symbolic, as α^a · Σ_{j∈J} β^j, so the combinatorics
can be checked exhaustively without any field arithmetic.  Evaluation in
a concrete field is a separate step (:func:`evaluate`, :func:`extract_S`).

Symbols map onto the repair setting as follows:

=========================  ==========================
here                       repair of node i
=========================  ==========================
base field of the span     F_i = F_q({α_j : j ≠ i})
α (degree p over base)     α_i, p = p_i
β (degree s over base(α))  β
ambient field              E
=========================  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidArguments,
    NonConsecutiveAlphaExponents,
    ShapeMismatch,
    SpanDeficient,
    UnexpectedDependence,
)
from .euclid import EuclidChain, SquarePartition, euclid_chain, square_partition
from .field import FieldElement, SubfieldSpec, lowest_irreducible, power, rank_over
from .linalg import rank_mod

__all__ = [
    "SymbolicEntry",
    "SymbolicArray",
    "SubspaceBasis",
    "SubspaceReport",
    "build_B",
    "reshape",
    "interfere",
    "basis_transform",
    "residual_partition",
    "yv_set",
    "rj_closed",
    "evaluate",
    "extract_S",
    "verify_lemma_main",
    "verify_subspace_coordinates",
    "format_grid",
]


@dataclass(frozen=True, order=True)
class SymbolicEntry:
    """α^alpha_exp · Σ_{j ∈ beta_exps} β^j."""

    alpha_exp: int
    beta_exps: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(sorted(set(self.beta_exps)))
        if not exps:
            raise InvalidArguments("an entry needs at least one beta exponent")
        if self.alpha_exp < 0 or exps[0] < 0:
            raise InvalidArguments("exponents must be non-negative")
        object.__setattr__(self, "beta_exps", exps)

    @classmethod
    def mono(cls, alpha_exp: int, beta_exp: int) -> "SymbolicEntry":
        return cls(alpha_exp, (beta_exp,))

    def __str__(self):
        a = self.alpha_exp
        apart = "" if a == 0 else "α" if a == 1 else f"α^{a}"
        terms = ["1" if j == 0 else "β" if j == 1 else f"β^{j}" for j in self.beta_exps]
        if len(terms) == 1:
            if terms[0] == "1":
                return apart or "1"
            return apart + terms[0]
        return f"{apart}({'+'.join(terms)})"


@dataclass(frozen=True)
class SymbolicArray:
    rows: int
    cols: int
    entries: tuple[tuple[SymbolicEntry, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch("entries do not match the declared shape")

    def __getitem__(self, ij: tuple[int, int]) -> SymbolicEntry:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[SymbolicEntry]:
        return [row[j] for row in self.entries]

    def cells(self) -> Iterable[SymbolicEntry]:
        for row in self.entries:
            yield from row


def _array(grid: Sequence[Sequence[SymbolicEntry]]) -> SymbolicArray:
    rows = tuple(tuple(r) for r in grid)
    return SymbolicArray(len(rows), len(rows[0]) if rows else 0, rows)


def build_B(p: int, s: int) -> SymbolicArray:
    """The p × s array B(i, j) = α^i (αβ)^j = α^{i+j} β^j."""
    if s < 1 or p <= s:
        raise InvalidArguments(f"need p > s >= 1, got p={p}, s={s}")
    return _array([[SymbolicEntry.mono(i + j, j) for j in range(s)] for i in range(p)])


def reshape(B: SymbolicArray, partition: SquarePartition) -> SymbolicArray:
    """Overall transpose followed by transposing every Euclidean square.

    For a square with top-left (x, y) and side t in B,
    R(y+u, x+v) = B(x+u, y+v) for 0 ≤ u, v < t.
    """
    if (partition.h, partition.w) != (B.rows, B.cols):
        raise ShapeMismatch(
            f"partition is {partition.h}x{partition.w} but array is {B.rows}x{B.cols}"
        )
    grid: list[list[SymbolicEntry | None]] = [[None] * B.rows for _ in range(B.cols)]
    for sq in partition.squares:
        x, y, t = sq.row, sq.col, sq.side
        for u in range(t):
            for v in range(t):
                grid[y + u][x + v] = B[x + u, y + v]
    if any(e is None for row in grid for e in row):
        raise ShapeMismatch("partition does not cover the array")
    return _array(grid)


def interfere(R: SymbolicArray) -> SymbolicArray:
    """Apply the interference operator to every column of R.

    Each entry keeps its α-exponent and receives as β-part the set of all
    β-exponents occurring in its column.  Columns must carry consecutive
    α-exponents.
    """
    cols = []
    for j in range(R.cols):
        col = R.column(j)
        exps = [e.alpha_exp for e in col]
        if exps != list(range(exps[0], exps[0] + len(exps))):
            raise NonConsecutiveAlphaExponents(f"column {j} has alpha exponents {exps}")
        J = tuple(sorted({b for e in col for b in e.beta_exps}))
        cols.append([SymbolicEntry(e.alpha_exp, J) for e in col])
    return _array([[cols[j][i] for j in range(R.cols)] for i in range(R.rows)])


def basis_transform(p: int, s: int) -> tuple[SymbolicArray, SymbolicArray, SymbolicArray]:
    """(B, R, R̄) for the pair (p, s)."""
    B = build_B(p, s)
    R = reshape(B, square_partition(p, s))
    return B, R, interfere(R)


def residual_partition(p: int, s: int) -> SquarePartition | None:
    """The square partition of the last b_1 columns of R, i.e. P(s, b_1)."""
    b1 = p % s
    return square_partition(s, b1) if b1 else None


def yv_set(j: int, partition: SquarePartition | None) -> frozenset[tuple[int, int]]:
    """Pairs (y, v) for the squares of P(s, b_1) met by residual column j.

    y is the square's top row and v the column offset of j inside it.
    ``partition=None`` stands for an empty residual (s divides p).
    """
    if partition is None:
        return frozenset()
    if not 0 <= j < partition.w:
        raise IndexOutOfRange(f"j={j} outside [0, {partition.w - 1}]")
    return frozenset(
        (sq.row, j - sq.col) for sq in partition.squares if sq.col <= j < sq.col + sq.side
    )


def rj_closed(j: int, chain: EuclidChain) -> SymbolicEntry:
    """Closed form of R̄(0, a_0 s + j) from the Euclidean chain alone.

    Vertical steps t = 1, 2, … contribute a_{2t-1} exponents
    Σ_{k<t} a_{2k-1} b_{2k-1} + q b_{2t-1} + j^(2t-2); a horizontal step
    whose quotient stays below a_{2t} contributes the single terminating
    exponent Σ_{k≤t} a_{2k-1} b_{2k-1} + j^(2t) and ends the walk.
    """
    if chain.m < 1:
        raise IndexOutOfRange("chain has no residual columns")
    if not 0 <= j < chain.b1:
        raise IndexOutOfRange(f"j={j} outside [0, {chain.b1 - 1}]")
    m = chain.m
    a, b = chain.a, chain.b
    exps: list[int] = []
    offset = 0  # Σ_{k<t} a_{2k-1} b_{2k-1}
    jj = j  # j^(2t-2)
    t = 1
    while 2 * t - 1 <= m:
        step = b(2 * t - 1)
        exps.extend(offset + q * step + jj for q in range(a[2 * t - 1]))
        offset += a[2 * t - 1] * step
        if 2 * t > m:
            break
        quot, jj_next = divmod(jj, b(2 * t))
        if quot < a[2 * t]:
            exps.append(offset + jj_next)
            break
        jj = jj_next
        t += 1
    if len(set(exps)) != len(exps):
        raise ArithmeticError(f"closed form repeated an exponent: {exps}")
    return SymbolicEntry(a[0] * chain.s + j, tuple(exps))


def evaluate(entry: SymbolicEntry, alpha: FieldElement, beta: FieldElement) -> FieldElement:
    """Field value of a symbolic entry."""
    total = beta.tower.zero()
    for j in entry.beta_exps:
        total = total + power(beta, j)
    return power(alpha, entry.alpha_exp) * total


@dataclass(frozen=True)
class SubspaceBasis:
    elements: tuple[FieldElement, ...]
    over: SubfieldSpec


def extract_S(Rbar: SymbolicArray, alpha: FieldElement, beta: FieldElement,
              over: SubfieldSpec) -> SubspaceBasis:
    """Evaluate the first row of R̄; these p elements span S.

    Raises :class:`UnexpectedDependence` if they are not independent over
    ``over``.
    """
    elems = tuple(evaluate(Rbar[0, t], alpha, beta) for t in range(Rbar.cols))
    r = rank_over(elems, over)
    if r != Rbar.cols:
        raise UnexpectedDependence(f"first row of the transformed array has rank {r} < {Rbar.cols}")
    return SubspaceBasis(elems, over)


@dataclass(frozen=True)
class SubspaceReport:
    p: int
    s: int
    q: int
    dim_s: int
    dim_k: int
    route: str

    @property
    def ok(self) -> bool:
        return self.dim_s == self.p and self.dim_k == self.s * self.p

    def to_dict(self) -> dict:
        return {"p": self.p, "s": self.s, "q": self.q, "route": self.route,
                "dimS": self.dim_s, "dimK": self.dim_k, "ok": self.ok}


def verify_lemma_main(p: int, s: int, alpha: FieldElement, beta: FieldElement,
                      over: SubfieldSpec) -> SubspaceReport:
    """Check dim S = p and S + αS + … + α^{s-1}S = everything, in a concrete field.

    ``alpha`` must have degree p over ``over`` and ``beta`` degree s over
    ``over``(α), and together they must generate the ambient field over
    ``over``.  Raises :class:`SpanDeficient` if the sum falls short.
    """
    *_, Rbar = basis_transform(p, s)
    S = extract_S(Rbar, alpha, beta, over)
    gens = [power(alpha, u) * e for u in range(s) for e in S.elements]
    dim_k = rank_over(gens, over)
    if dim_k != s * p:
        raise SpanDeficient(dim_k, s * p)
    return SubspaceReport(p, s, alpha.tower.q, len(S.elements), dim_k, "field")


def _entry_coordinates(entry: SymbolicEntry, p: int, s: int, xpow: np.ndarray) -> np.ndarray:
    vec = np.zeros((s, p), dtype=np.int64)
    for j in entry.beta_exps:
        vec[j] = xpow[entry.alpha_exp]
    return vec.reshape(-1)


def verify_subspace_coordinates(p: int, s: int, q: int) -> SubspaceReport:
    """Same check as :func:`verify_lemma_main` in a bare coordinate model.

    K is written over F_q in the basis {α^i β^j}; α has the lowest
    irreducible minimal polynomial of degree p over F_q.  Only products
    α^a · β^j occur, so β's own minimal polynomial never enters and p, s
    need not be coprime.
    """
    f = np.array(lowest_irreducible(q, p), dtype=np.int64)
    top = p + 2 * s
    xpow = np.zeros((top, p), dtype=np.int64)
    v = np.zeros(p, dtype=np.int64)
    v[0] = 1
    for k in range(top):
        xpow[k] = v
        lead = v[-1]
        v = (np.concatenate(([0], v[:-1])) - lead * f[:p]) % q
    *_, Rbar = basis_transform(p, s)
    row = [Rbar[0, t] for t in range(p)]
    dim_s = rank_mod(np.stack([_entry_coordinates(e, p, s, xpow) for e in row]), q)
    if dim_s != p:
        raise UnexpectedDependence(f"first row has rank {dim_s} < {p}")
    shifted = [SymbolicEntry(e.alpha_exp + u, e.beta_exps) for u in range(s) for e in row]
    dim_k = rank_mod(np.stack([_entry_coordinates(e, p, s, xpow) for e in shifted]), q)
    if dim_k != s * p:
        raise SpanDeficient(dim_k, s * p)
    return SubspaceReport(p, s, q, dim_s, dim_k, "coordinates")


def format_grid(arr: SymbolicArray, title: str | None = None) -> str:
    """Aligned text rendering, one row per line, cells separated by ' | '."""
    cells = [[str(e) for e in row] for row in arr.entries]
    widths = [max(len(cells[i][j]) for i in range(arr.rows)) for j in range(arr.cols)]
    lines = [title] if title else []
    for row in cells:
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
