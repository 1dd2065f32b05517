"""Arithmetic in the tower F_q ⊂ F = F_q(α_1, …, α_n) ⊂ E = F(β).

Every generator (α_i and β) is given a minimal polynomial over F_q itself.
Because the degrees p_1, …, p_n, s are pairwise coprime, F_q[α_1] ⊗ … ⊗
F_q[α_n] ⊗ F_q[β] is already a field, so each f_i stays irreducible over
the compositum of the other factors and g stays irreducible over F.  No
irreducible polynomials over large intermediate fields are ever needed.

Coordinates
-----------
An element of E is stored as a coefficient tensor of shape
``(s, p_n, …, p_1)``: entry ``[e, e_n, …, e_1]`` multiplies the monomial
α_1^{e_1}···α_n^{e_n}·β^e.  Flattened in C order, e_1 varies fastest and e
slowest; this is also the order of the canonical digit string.

The Frobenius x ↦ x^q is a ring automorphism fixing F_q and maps every
generator to a polynomial in that same generator, so it acts factor by
factor.  Powers of it are therefore Kronecker products of small
per-factor matrices.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Iterable, Sequence

import numpy as np
from sympy import ZZ, isprime, nextprime
from sympy.polys.galoistools import gf_irreducible_p

from .errors import (
    ConfigMismatch,
    DivisionByZero,
    DuplicatePrime,
    IndexOutOfRange,
    InvalidArguments,
    NoIrreducibleFound,
    NotABasis,
    NotPrime,
    PrimeTooSmall,
)
from .linalg import rank_mod, solve_mod

__all__ = [
    "SubfieldKind",
    "SubfieldSpec",
    "TowerConfig",
    "FieldElement",
    "make_tower",
    "primes_above",
    "lowest_irreducible",
    "add",
    "sub",
    "mul",
    "neg",
    "inv",
    "power",
    "frobenius",
    "trace_to",
    "is_in_subfield",
    "rank_over_fq",
    "rank_over",
    "dual_basis",
]

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def primes_above(s: int, n: int) -> list[int]:
    """The ``n`` smallest primes strictly greater than ``s``."""
    out = []
    p = s
    while len(out) < n:
        p = nextprime(p)
        out.append(int(p))
    return out


def lowest_irreducible(q: int, degree: int) -> tuple[int, ...]:
    """Lowest monic irreducible polynomial of ``degree`` over F_q.

    Candidates are ordered lexicographically on (c_{d-1}, …, c_0), which
    is the same as reading the coefficients as a base-q integer.  The
    result is returned low-to-high, leading 1 included.
    """
    for code in range(q**degree):
        low = [(code // q**i) % q for i in range(degree)]
        if degree > 1 and low[0] == 0:
            continue
        if gf_irreducible_p([1] + low[::-1], q, ZZ):
            return tuple(low) + (1,)
    raise NoIrreducibleFound(f"no irreducible polynomial of degree {degree} over F_{q}")


class _Factor:
    """Precomputed tables for one tensor factor F_q[x]/(f)."""

    def __init__(self, modulus: Sequence[int], q: int):
        f = np.array(modulus, dtype=np.int64) % q
        d = len(f) - 1
        self.q = q
        self.deg = d
        self.modulus = tuple(int(c) for c in f)

        # x^m mod f for every m we need
        top = max(3 * d, (d - 1) * q + 1)
        xpow = np.zeros((top, d), dtype=np.int64)
        v = np.zeros(d, dtype=np.int64)
        v[0] = 1
        for m in range(top):
            xpow[m] = v
            lead = v[-1]
            v = np.concatenate(([0], v[:-1]))
            v = (v - lead * f[:d]) % q

        # reduce[:, m] = coefficients of x^m, m < 2d - 1
        self.reduce = np.ascontiguousarray(xpow[: 2 * d - 1].T)
        # powers[e][:, c] = x^(e + c): multiplication by x^e
        self.powers = np.stack([xpow[e : e + d].T for e in range(d)])

        frob1 = np.ascontiguousarray(xpow[[c * q for c in range(d)]].T)
        frobs = [np.eye(d, dtype=np.int64)]
        for _ in range(d - 1):
            frobs.append(frob1 @ frobs[-1] % q)
        if not np.array_equal(frob1 @ frobs[-1] % q, np.eye(d, dtype=np.int64)):
            raise InvalidArguments(f"modulus {self.modulus} does not define a field")
        self.frob = np.stack(frobs)

        # Tr(x^m) as the matrix trace of multiplication by x^m
        mats = [xpow[m : m + d].T for m in range(2 * d - 1)]
        self.trace = np.array([int(np.trace(mm)) % q for mm in mats], dtype=np.int64)
        idx = np.add.outer(np.arange(d), np.arange(d))
        self.trace_form = self.trace[idx]


class SubfieldKind(enum.Enum):
    BASE = "base"
    F_FULL = "f_full"
    F_MINUS = "f_minus"
    E_FULL = "e_full"


@dataclass(frozen=True)
class SubfieldSpec:
    """One of the subfields F_q, F, F_i = F_q({α_j : j ≠ i}) or E itself.

    ``index`` is the 1-based i of F_MINUS and ``None`` otherwise.
    """

    kind: SubfieldKind
    index: int | None = None

    def __post_init__(self):
        if (self.kind is SubfieldKind.F_MINUS) != (self.index is not None):
            raise InvalidArguments("index is required for F_MINUS and only for it")

    @classmethod
    def base(cls) -> "SubfieldSpec":
        return cls(SubfieldKind.BASE)

    @classmethod
    def f_full(cls) -> "SubfieldSpec":
        return cls(SubfieldKind.F_FULL)

    @classmethod
    def f_minus(cls, i: int) -> "SubfieldSpec":
        return cls(SubfieldKind.F_MINUS, i)

    @classmethod
    def e_full(cls) -> "SubfieldSpec":
        return cls(SubfieldKind.E_FULL)


class TowerConfig:
    """The field tower defined by q, s, the primes p_i and minimal polynomials.

    Instances are immutable after construction; every cache is filled in
    ``__init__`` so a tower can be shared freely between threads.
    Usually built through :func:`make_tower`.
    """

    def __init__(self, q: int, s: int, primes: Sequence[int],
                 minpolys: Sequence[Sequence[int]], g: Sequence[int]):
        primes = tuple(int(p) for p in primes)
        _validate_parameters(q, s, primes)
        if len(minpolys) != len(primes):
            raise InvalidArguments("need one minimal polynomial per prime")
        for p, f in zip(primes, minpolys):
            _check_minpoly(f, p, q)
        _check_minpoly(g, s, q)

        self.q = int(q)
        self.s = int(s)
        self.primes = primes
        self.n = len(primes)
        self.minpolys = tuple(tuple(int(c) % q for c in f) for f in minpolys)
        self.g = tuple(int(c) % q for c in g)
        self.ell = self.s * prod(primes)
        self.shape = (self.s,) + tuple(reversed(primes))
        # axis 0 is β, axis n - i + 1 is α_i
        mods = [self.g] + list(reversed(self.minpolys))
        self._factors = tuple(_Factor(m, self.q) for m in mods)
        self._one = self._unit_array()

    # -- identity ------------------------------------------------------
    def _key(self):
        return (self.q, self.s, self.primes, self.minpolys, self.g)

    def __eq__(self, other):
        return isinstance(other, TowerConfig) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"TowerConfig(q={self.q}, s={self.s}, primes={list(self.primes)}, ell={self.ell})"

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        """JSON-ready dict; polynomial coefficients are listed low-to-high."""
        return {
            "q": self.q,
            "s": self.s,
            "primes": list(self.primes),
            "f": [list(f) for f in self.minpolys],
            "g": list(self.g),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TowerConfig":
        return cls(d["q"], d["s"], d["primes"], d["f"], d["g"])

    @classmethod
    def from_json(cls, text: str) -> "TowerConfig":
        return cls.from_dict(json.loads(text))

    # -- axes and subfields --------------------------------------------
    def alpha_axis(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"generator index {i} outside [1, {self.n}]")
        return self.n - i + 1

    def subfield_axes(self, sub: SubfieldSpec) -> tuple[int, ...]:
        """Tensor axes whose generators generate ``sub`` over F_q."""
        kind = sub.kind
        if kind is SubfieldKind.BASE:
            return ()
        if kind is SubfieldKind.E_FULL:
            return tuple(range(self.n + 1))
        if kind is SubfieldKind.F_FULL:
            return tuple(range(1, self.n + 1))
        skip = self.alpha_axis(sub.index)
        return tuple(ax for ax in range(1, self.n + 1) if ax != skip)

    def subfield_degree(self, sub: SubfieldSpec) -> int:
        """[sub : F_q]."""
        return prod(self._factors[ax].deg for ax in self.subfield_axes(sub))

    # -- constructors --------------------------------------------------
    def _unit_array(self) -> np.ndarray:
        a = np.zeros(self.shape, dtype=np.int64)
        a[(0,) * a.ndim] = 1
        return a

    def _wrap(self, arr: np.ndarray) -> "FieldElement":
        return FieldElement(self, arr)

    def element(self, coeffs) -> "FieldElement":
        """Element from ``ell`` coefficients in canonical order (or a tensor)."""
        a = np.asarray(coeffs, dtype=np.int64)
        if a.size != self.ell:
            raise InvalidArguments(f"expected {self.ell} coefficients, got {a.size}")
        return self._wrap(a.reshape(self.shape) % self.q)

    def scalar(self, c: int) -> "FieldElement":
        return self._wrap(self._one * (int(c) % self.q))

    def zero(self) -> "FieldElement":
        return self._wrap(np.zeros(self.shape, dtype=np.int64))

    def one(self) -> "FieldElement":
        return self._wrap(self._one.copy())

    def monomial(self, alpha_exps: Sequence[int] = (), beta_exp: int = 0) -> "FieldElement":
        """α_1^{e_1}···α_n^{e_n}·β^{beta_exp}; exponents may exceed the degrees."""
        alpha_exps = list(alpha_exps) + [0] * (self.n - len(alpha_exps))
        if len(alpha_exps) != self.n:
            raise InvalidArguments("too many alpha exponents")
        arr = self._one.copy()
        for ax, e in zip(range(self.n + 1), [beta_exp] + alpha_exps[::-1]):
            if e:
                arr = self._apply(self._xpow_matrix(ax, e), arr, ax)
        return self._wrap(arr)

    def alpha(self, i: int) -> "FieldElement":
        """The generator α_i (1-based)."""
        self.alpha_axis(i)
        exps = [0] * self.n
        exps[i - 1] = 1
        return self.monomial(exps)

    def beta(self) -> "FieldElement":
        return self.monomial((), 1)

    def random_element(self, rng: np.random.Generator) -> "FieldElement":
        return self._wrap(rng.integers(0, self.q, size=self.shape, dtype=np.int64))

    def from_string(self, text: str) -> "FieldElement":
        """Inverse of :meth:`FieldElement.to_string`."""
        if len(text) != self.ell:
            raise InvalidArguments(f"expected {self.ell} digits, got {len(text)}")
        vals = [_DIGITS.index(ch) for ch in text.lower()]
        if max(vals, default=0) >= self.q:
            raise InvalidArguments(f"digit out of range for q={self.q}")
        return self.element(vals)

    # -- kernels -------------------------------------------------------
    def _apply(self, mat: np.ndarray, arr: np.ndarray, axis: int) -> np.ndarray:
        out = np.tensordot(mat, arr, axes=([1], [axis]))
        return np.moveaxis(out, 0, axis) % self.q

    def _xpow_matrix(self, axis: int, e: int) -> np.ndarray:
        fac = self._factors[axis]
        # x is a unit of order dividing q^d - 1
        e %= self.q**fac.deg - 1
        m = np.eye(fac.deg, dtype=np.int64)
        base = fac.powers[1]
        while e:
            if e & 1:
                m = base @ m % self.q
            base = base @ base % self.q
            e >>= 1
        return m

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # coefficients are < q and every convolution sum has at most ell terms,
        # so double precision FFT output rounds to the exact integer;
        # scipy.signal is imported here because it dominates CLI startup
        from scipy.signal import fftconvolve

        c = np.rint(fftconvolve(a, b)).astype(np.int64) % self.q
        for ax, fac in enumerate(self._factors):
            c = self._apply(fac.reduce, c, ax)
        return c

    def _frob(self, a: np.ndarray, j: int) -> np.ndarray:
        for ax, fac in enumerate(self._factors):
            r = j % fac.deg
            if r:
                a = self._apply(fac.frob[r], a, ax)
        return a

    def _expand(self, arrs: np.ndarray, axes: Iterable[int]) -> np.ndarray:
        """Multiply every element of a stack by every monomial in the given axes.

        Input shape ``(B, *shape)``; output ``(B * M, *shape)`` with the
        element index slowest and monomial exponents in ``axes`` order after it.
        """
        x = arrs
        for ax in axes:
            fac = self._factors[ax]
            y = np.tensordot(x, fac.powers, axes=([1 + ax], [2]))
            y = np.moveaxis(y, -1, 1 + ax)
            y = np.moveaxis(y, -1, 1)
            x = y.reshape((-1,) + self.shape) % self.q
        return x

    def _trace_form(self, arrs: np.ndarray, axes: Iterable[int], offset: int = 1) -> np.ndarray:
        for ax in axes:
            arrs = np.moveaxis(
                np.tensordot(self._factors[ax].trace_form, arrs, axes=([1], [offset + ax])), 0, offset + ax
            ) % self.q
        return arrs

    def _complement_axes(self, sub: SubfieldSpec) -> tuple[int, ...]:
        gens = set(self.subfield_axes(sub))
        return tuple(ax for ax in range(self.n + 1) if ax not in gens)

    def _restrict(self, arr: np.ndarray, gens: Sequence[int]) -> np.ndarray | None:
        """Coordinates in the complementary factor, or None if ``arr`` leaves it."""
        idx = tuple(0 if ax in gens else slice(None) for ax in range(arr.ndim))
        part = arr[idx]
        if np.count_nonzero(part) != np.count_nonzero(arr):
            return None
        return part


def _validate_parameters(q: int, s: int, primes: Sequence[int]) -> None:
    if not isprime(q):
        raise NotPrime(f"base field order q={q} is not prime")
    if s < 2:
        raise InvalidArguments(f"s must be at least 2, got {s}")
    seen = set()
    for p in primes:
        if not isprime(p):
            raise NotPrime(f"{p} is not prime")
        if p <= s:
            raise PrimeTooSmall(f"prime {p} is not greater than s={s}")
        if p in seen:
            raise DuplicatePrime(f"prime {p} listed twice")
        seen.add(p)


def _check_minpoly(f: Sequence[int], degree: int, q: int) -> None:
    f = [int(c) % q for c in f]
    if len(f) != degree + 1 or f[-1] != 1:
        raise InvalidArguments(f"expected a monic polynomial of degree {degree}, got {f}")
    if not gf_irreducible_p(f[::-1], q, ZZ):
        raise InvalidArguments(f"polynomial {f} is reducible over F_{q}")


def make_tower(q: int, s: int, primes: Sequence[int] | None = None, n: int | None = None) -> TowerConfig:
    """Build the tower for base field F_q, repair parameter s and primes p_i.

    When ``primes`` is omitted, the ``n`` smallest primes above ``s`` are
    used.  Minimal polynomials are the lowest irreducible ones of each
    degree, so the result is fully deterministic.

    >>> make_tower(2, 2, [3]).minpolys
    ((1, 1, 0, 1),)
    """
    if primes is None:
        if n is None:
            raise InvalidArguments("give either primes or n")
        primes = primes_above(s, n)
    primes = [int(p) for p in primes]
    _validate_parameters(q, s, primes)
    minpolys = [lowest_irreducible(q, p) for p in primes]
    return TowerConfig(q, s, primes, minpolys, lowest_irreducible(q, s))


class FieldElement:
    """An immutable element of E in the monomial tensor basis."""

    __slots__ = ("tower", "_c")

    def __init__(self, tower: TowerConfig, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        self.tower = tower
        self._c = arr

    @property
    def array(self) -> np.ndarray:
        """Read-only coefficient tensor of shape ``tower.shape``."""
        return self._c

    @property
    def coeffs(self) -> np.ndarray:
        """Flat coefficient vector in canonical order (a copy)."""
        return self._c.reshape(-1).copy()

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise ConfigMismatch("operands live in different towers")
            return other
        if isinstance(other, (int, np.integer)):
            return self.tower.scalar(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.tower, (self._c + o._c) % self.tower.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.tower, (self._c - o._c) % self.tower.q)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.tower, (-self._c) % self.tower.q)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.tower, (self._c * int(other)) % self.tower.q)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.tower, self.tower._mul(self._c, o._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.tower.scalar(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.tower == other.tower and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __bool__(self):
        return bool(self._c.any())

    def is_zero(self) -> bool:
        return not self._c.any()

    def __repr__(self):
        s = self.to_string()
        if len(s) > 24:
            s = s[:24] + "…"
        return f"FieldElement({s})"

    def to_string(self) -> str:
        """Canonical base-q digit string (e slowest, then e_n, …, e_1)."""
        return "".join(_DIGITS[int(c)] for c in self._c.reshape(-1))

    def frobenius(self, j: int = 1) -> "FieldElement":
        return frobenius(self, j)

    def trace_to(self, sub: SubfieldSpec) -> "FieldElement":
        return trace_to(self, sub)

    def inverse(self) -> "FieldElement":
        return inv(self)


def _check_same(x: FieldElement, y: FieldElement) -> None:
    if x.tower is not y.tower and x.tower != y.tower:
        raise ConfigMismatch("operands live in different towers")


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x, y)
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x, y)
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x, y)
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def frobenius(x: FieldElement, j: int) -> FieldElement:
    """x^(q^j)."""
    if j < 0:
        raise InvalidArguments("Frobenius power must be non-negative")
    return FieldElement(x.tower, x.tower._frob(x._c, j))


def inv(x: FieldElement) -> FieldElement:
    """Multiplicative inverse (Itoh–Tsujii).

    With r = (q^ℓ − 1)/(q − 1), x^r is the norm of x and lies in F_q, and
    x^(r−1) = x^(q + q² + … + q^(ℓ−1)) is assembled from O(log ℓ)
    multiplications and Frobenius maps.
    """
    if x.is_zero():
        raise DivisionByZero("zero has no inverse")
    tower = x.tower
    k = tower.ell - 1
    if k == 0:
        y = tower.one()
    else:
        # acc = x^(1 + q + … + q^(done-1))
        acc, done = x, 1
        for bit in bin(k)[3:]:
            acc = acc * frobenius(acc, done)
            done *= 2
            if bit == "1":
                acc = x * frobenius(acc, 1)
                done += 1
        y = frobenius(acc, 1)
    norm = x * y
    c = int(norm._c[(0,) * norm._c.ndim])
    if c == 0 or np.count_nonzero(norm._c) != 1:
        raise ArithmeticError("norm computation left F_q")
    return y * pow(c, -1, tower.q)


def power(x: FieldElement, e: int) -> FieldElement:
    tower = x.tower
    if e < 0:
        return power(inv(x), -e)
    if e == 0:
        return tower.one()
    if x.is_zero():
        return tower.zero()
    e %= tower.q**tower.ell - 1
    result = tower.one()
    base = x
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def trace_to(x: FieldElement, sub: SubfieldSpec) -> FieldElement:
    """tr_{E/sub}(x) = Σ_{j<D} x^(Q^j) with Q = |sub| and D = [E : sub]."""
    tower = x.tower
    step = tower.subfield_degree(sub)
    total = np.zeros(tower.shape, dtype=np.int64)
    for j in range(tower.ell // step):
        total += tower._frob(x._c, j * step)
    return FieldElement(tower, total % tower.q)


def is_in_subfield(x: FieldElement, sub: SubfieldSpec) -> bool:
    return frobenius(x, x.tower.subfield_degree(sub)) == x


def _stack(elems: Sequence[FieldElement]) -> tuple[TowerConfig, np.ndarray]:
    elems = list(elems)
    if not elems:
        raise InvalidArguments("need at least one element")
    tower = elems[0].tower
    for e in elems[1:]:
        _check_same(elems[0], e)
    return tower, np.stack([e._c for e in elems])


def rank_over_fq(elems: Sequence[FieldElement]) -> int:
    """Rank over F_q of the coordinate vectors of ``elems``."""
    tower, arrs = _stack(elems)
    return rank_mod(arrs.reshape(len(arrs), -1), tower.q)


def rank_over(elems: Sequence[FieldElement], sub: SubfieldSpec) -> int:
    """Dimension of the ``sub``-span of ``elems``.

    When every element lies in the complementary factor (the subalgebra
    generated by the generators *not* in ``sub``), an F_q-basis of that
    factor is also a ``sub``-basis of E and plain coordinates suffice.
    Otherwise each element is multiplied by an F_q-basis of ``sub`` and the
    F_q-rank is divided by [sub : F_q].
    """
    tower, arrs = _stack(elems)
    gens = tower.subfield_axes(sub)
    parts = [tower._restrict(a, gens) for a in arrs]
    if all(p is not None for p in parts):
        return rank_mod(np.stack(parts).reshape(len(parts), -1), tower.q)
    big = tower._expand(arrs, gens)
    r = rank_mod(big.reshape(len(big), -1), tower.q)
    return r // tower.subfield_degree(sub)


def dual_basis(basis: Sequence[FieldElement], sub: SubfieldSpec) -> list[FieldElement]:
    """Trace-dual basis of a ``sub``-basis of E.

    Returns μ_1..μ_D with tr_{E/sub}(ζ_a μ_b) = δ_ab.  Raises
    :class:`NotABasis` if ``basis`` does not have D = [E : sub] elements
    independent over ``sub``.

    The conditions are turned into F_q equations through the trace form
    Tr_{E/F_q}(xy), which is the Kronecker product of the per-factor
    Hankel matrices Tr(γ^{a+b}).
    """
    tower, arrs = _stack(basis)
    q = tower.q
    D = tower.ell // tower.subfield_degree(sub)
    if len(arrs) != D:
        raise NotABasis(f"need {D} elements for a basis over the subfield, got {len(arrs)}")
    gens = tower.subfield_axes(sub)
    comp = tower._complement_axes(sub)
    parts = [tower._restrict(a, gens) for a in arrs]

    if all(p is not None for p in parts):
        # everything lives in the complementary factor A; there
        # tr_{E/sub} restricts to Tr_{A/F_q}, a D x D problem
        local = np.stack(parts)
        for pos, ax in enumerate(comp):
            local = np.moveaxis(
                np.tensordot(tower._factors[ax].trace_form, local, axes=([1], [1 + pos])), 0, 1 + pos
            ) % q
        sol = solve_mod(local.reshape(D, -1), np.eye(D, dtype=np.int64), q, unique=True)
        if sol is None:
            raise NotABasis("elements are dependent over the subfield")
        out = []
        idx = tuple(0 if ax in gens else slice(None) for ax in range(len(tower.shape)))
        for b in range(D):
            full = np.zeros(tower.shape, dtype=np.int64)
            full[idx] = sol[:, b].reshape(full[idx].shape)
            out.append(FieldElement(tower, full))
        return out

    # general case: Tr_{E/F_q}(ζ_a w μ_b) = Tr_{sub/F_q}(w) δ_ab for every
    # monomial w of sub, with Tr_{sub/F_q}(w) the product of factor traces
    rows = tower._expand(arrs, gens)
    rows = tower._trace_form(rows, range(tower.n + 1))
    tvec = reduce(np.kron, [tower._factors[ax].trace[: tower._factors[ax].deg] for ax in gens],
                  np.ones(1, dtype=np.int64))
    target = np.kron(np.eye(D, dtype=np.int64), tvec.reshape(-1, 1)) % q
    sol = solve_mod(rows.reshape(len(rows), -1), target, q, unique=True)
    if sol is None:
        raise NotABasis("elements are dependent over the subfield")
    return [FieldElement(tower, sol[:, b].reshape(tower.shape)) for b in range(D)]
