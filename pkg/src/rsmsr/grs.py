"""Reed–Solomon codes over E evaluated at the tower generators α_1, …, α_n.

Nodes are labelled 1..n, node i storing f(α_i).  The dual of RS(n, k) is
the generalized RS code GRS(n, n-k) with column multipliers
u_i = ∏_{j≠i} (α_i − α_j)^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadHelperSet, BadT, InvalidArguments, LengthMismatch
from .field import FieldElement, TowerConfig, inv

__all__ = [
    "CodeSpec",
    "Codeword",
    "make_code",
    "encode",
    "interpolate",
    "dual_multipliers",
    "dual_codeword",
    "repair_dual_word",
    "inner_product",
    "mds_check",
]


@dataclass(frozen=True)
class CodeSpec:
    tower: TowerConfig
    n: int
    k: int
    points: tuple[FieldElement, ...]

    @property
    def s(self) -> int:
        return self.tower.s

    @property
    def d(self) -> int:
        """Repair degree d = s + k − 1."""
        return self.tower.s + self.k - 1

    def point(self, i: int) -> FieldElement:
        """α_i for the 1-based node label i."""
        self.check_node(i)
        return self.points[i - 1]

    def check_node(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise InvalidArguments(f"node {i} outside [1, {self.n}]")

    def to_dict(self) -> dict:
        return {
            "tower": self.tower.to_dict(),
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "ell": self.tower.ell,
            "points": [x.to_string() for x in self.points],
        }


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[FieldElement, ...]

    def __len__(self):
        return len(self.symbols)

    def symbol(self, i: int) -> FieldElement:
        """Symbol held by node i (1-based)."""
        return self.symbols[i - 1]

    def to_strings(self) -> list[str]:
        return [c.to_string() for c in self.symbols]


def make_code(tower: TowerConfig, k: int) -> CodeSpec:
    """RS(n, k) over E with n = number of primes and Ω = (α_1, …, α_n)."""
    n = tower.n
    if not 1 <= k < n:
        raise InvalidArguments(f"need 1 <= k < n, got k={k}, n={n}")
    return CodeSpec(tower, n, k, tuple(tower.alpha(i) for i in range(1, n + 1)))


def _horner(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.tower.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def encode(spec: CodeSpec, message: Sequence[FieldElement]) -> Codeword:
    """Evaluate f(x) = Σ message[t] x^t at every α_i."""
    if len(message) != spec.k:
        raise LengthMismatch(f"message has {len(message)} symbols, expected {spec.k}")
    return Codeword(tuple(_horner(message, a) for a in spec.points))


def _poly_mul_linear(poly: list[FieldElement], root: FieldElement) -> list[FieldElement]:
    """poly(x) · (x − root)."""
    out = [root.tower.zero()] * (len(poly) + 1)
    for t, c in enumerate(poly):
        out[t + 1] = out[t + 1] + c
        out[t] = out[t] - c * root
    return out


def interpolate(xs: Sequence[FieldElement], ys: Sequence[FieldElement]) -> list[FieldElement]:
    """Coefficients (low to high) of the unique polynomial of degree < len(xs) through the points."""
    if len(xs) != len(ys) or not xs:
        raise LengthMismatch("need the same positive number of abscissae and values")
    tower = xs[0].tower
    coeffs = [tower.zero()] * len(xs)
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        basis = [tower.one()]
        denom = tower.one()
        for m, xm in enumerate(xs):
            if m != j:
                basis = _poly_mul_linear(basis, xm)
                denom = denom * (xj - xm)
        scale = yj * inv(denom)
        coeffs = [c + b * scale for c, b in zip(coeffs, basis)]
    return coeffs


def dual_multipliers(spec: CodeSpec) -> tuple[FieldElement, ...]:
    """u_i = ∏_{j≠i} (α_i − α_j)^{-1}, indexed by node − 1."""
    us = []
    for i, ai in enumerate(spec.points):
        acc = spec.tower.one()
        for j, aj in enumerate(spec.points):
            if i != j:
                acc = acc * (ai - aj)
        us.append(inv(acc))
    return tuple(us)


def dual_codeword(spec: CodeSpec, g: Sequence[FieldElement],
                  u: Sequence[FieldElement] | None = None) -> Codeword:
    """(u_1 g(α_1), …, u_n g(α_n)); a dual codeword whenever deg g < n − k."""
    if len(g) > spec.n - spec.k:
        raise LengthMismatch(f"dual polynomials have degree < {spec.n - spec.k}")
    u = dual_multipliers(spec) if u is None else u
    return Codeword(tuple(uj * _horner(g, a) for uj, a in zip(u, spec.points)))


def _check_helpers(spec: CodeSpec, i: int, helpers: Iterable[int]) -> tuple[int, ...]:
    spec.check_node(i)
    hs = tuple(helpers)
    if len(set(hs)) != len(hs):
        raise BadHelperSet(f"helper set {hs} has repeats")
    if i in hs:
        raise BadHelperSet(f"failed node {i} cannot help repair itself")
    if any(not 1 <= j <= spec.n for j in hs):
        raise BadHelperSet(f"helper set {hs} leaves [1, {spec.n}]")
    if len(hs) != spec.d:
        raise BadHelperSet(f"need d = s + k - 1 = {spec.d} helpers, got {len(hs)}")
    return hs


def h_polynomial_values(spec: CodeSpec, i: int, helpers: Sequence[int]) -> dict[int, FieldElement]:
    """h(α_j) for every node j, h(x) = ∏_{l ∉ helpers ∪ {i}} (x − α_l)."""
    excluded = [l for l in range(1, spec.n + 1) if l != i and l not in helpers]
    out = {}
    for j in range(1, spec.n + 1):
        acc = spec.tower.one()
        for l in excluded:
            acc = acc * (spec.point(j) - spec.point(l))
        out[j] = acc
    return out


def repair_dual_word(spec: CodeSpec, i: int, helpers: Sequence[int], t: int,
                     u: Sequence[FieldElement] | None = None) -> Codeword:
    """The dual codeword (u_j α_j^t h(α_j))_j used to repair node i.

    It vanishes outside helpers ∪ {i}; since deg x^t h(x) = t + n − 1 − d
    ≤ n − k − 1 it is orthogonal to every codeword.
    """
    hs = _check_helpers(spec, i, helpers)
    if not 0 <= t <= spec.s - 1:
        raise BadT(f"t={t} outside [0, {spec.s - 1}]")
    deg = t + spec.n - 1 - spec.d
    assert deg <= spec.n - spec.k - 1
    u = dual_multipliers(spec) if u is None else u
    hv = h_polynomial_values(spec, i, hs)
    return Codeword(tuple(
        u[j - 1] * (spec.point(j) ** t) * hv[j] for j in range(1, spec.n + 1)
    ))


def inner_product(x: Codeword, y: Codeword) -> FieldElement:
    if len(x) != len(y):
        raise LengthMismatch("words of different length")
    acc = x.symbols[0].tower.zero()
    for a, b in zip(x.symbols, y.symbols):
        acc = acc + a * b
    return acc


def mds_check(spec: CodeSpec, trials: int, rng: np.random.Generator) -> bool:
    """Random codewords are recovered from random k-subsets by interpolation."""
    for _ in range(trials):
        msg = [spec.tower.random_element(rng) for _ in range(spec.k)]
        word = encode(spec, msg)
        subset = sorted(rng.choice(spec.n, size=spec.k, replace=False).tolist())
        got = interpolate([spec.points[j] for j in subset], [word.symbols[j] for j in subset])
        if got != msg:
            return False
    return True
