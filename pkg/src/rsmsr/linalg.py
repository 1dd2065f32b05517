"""Exact linear algebra over a prime field F_q.

Matrices are plain integer numpy arrays with entries in ``[0, q)``.  For
``q == 2`` rows are bit-packed into 64-bit words so that elimination on
matrices with a few thousand columns stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch

__all__ = ["FqMatrix", "row_reduce", "rank_mod", "solve_mod"]


def _pack_bits(a: np.ndarray) -> np.ndarray:
    rows, cols = a.shape
    words = max(1, -(-cols // 64))
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = a
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).copy()


def _unpack_bits(packed: np.ndarray, cols: int) -> np.ndarray:
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.int64)


def _rref_gf2(a: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    m = _pack_bits(a)
    rows = m.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == rows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(b)
        colbits = (m[:, w] >> bit) & np.uint64(1)
        cand = np.flatnonzero(colbits[r:])
        if cand.size == 0:
            continue
        piv = r + int(cand[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
            colbits[[r, piv]] = colbits[[piv, r]]
        mask = colbits.astype(bool)
        mask[r] = False
        if mask.any():
            m[mask] ^= m[r]
        pivots.append(col)
        r += 1
    return _unpack_bits(m, a.shape[1]), pivots


def _rref_general(a: np.ndarray, q: int, ncols: int) -> tuple[np.ndarray, list[int]]:
    m = a.astype(np.int64) % q
    rows = m.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == rows:
            break
        cand = np.flatnonzero(m[r:, col])
        if cand.size == 0:
            continue
        piv = r + int(cand[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, col]), -1, q)) % q
        factors = m[:, col].copy()
        factors[r] = 0
        nz = np.flatnonzero(factors)
        if nz.size:
            m[nz] = (m[nz] - np.outer(factors[nz], m[r])) % q
        pivots.append(col)
        r += 1
    return m, pivots


def row_reduce(a, q: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over F_q.

    Only the first ``ncols`` columns are used as pivot candidates, which
    lets callers reduce an augmented matrix ``[A | B]`` in one pass.
    """
    a = np.asarray(a, dtype=np.int64) % q
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {a.shape}")
    if ncols is None:
        ncols = a.shape[1]
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.copy(), []
    if q == 2:
        return _rref_gf2(a, ncols)
    return _rref_general(a, q, ncols)


def rank_mod(a, q: int) -> int:
    """Rank of ``a`` over F_q."""
    return len(row_reduce(a, q)[1])


def solve_mod(a, b, q: int, unique: bool = False) -> np.ndarray | None:
    """Solve ``a @ x == b`` over F_q.

    ``b`` may be a vector or a matrix of right-hand sides.  Returns one
    solution (free variables set to zero) or ``None`` if the system is
    inconsistent.  With ``unique=True`` an underdetermined system also
    yields ``None``.
    """
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"{a.shape[0]} equations but {b.shape[0]} right-hand rows")
    n = a.shape[1]
    red, pivots = row_reduce(np.hstack([a, b]), q, ncols=n)
    r = len(pivots)
    if np.any(red[r:, n:]) or (unique and r < n):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    x[pivots] = red[:r, n:]
    return x[:, 0] if vector else x


@dataclass(frozen=True)
class FqMatrix:
    """A rectangular matrix over F_q."""

    entries: np.ndarray
    q: int

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 2:
            raise ShapeMismatch(f"matrix must be 2-d, got shape {e.shape}")
        object.__setattr__(self, "entries", e % self.q)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def rank(self) -> int:
        return rank_mod(self.entries, self.q)

    def solve(self, b):
        return solve_mod(self.entries, b, self.q)
