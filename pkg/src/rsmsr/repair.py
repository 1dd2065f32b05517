"""Optimal single-node repair of RS(n, k) over E from d = s + k − 1 helpers.

For a failed node i, let F_i = F_q({α_j : j ≠ i}) and e_1..e_{p_i} a
basis of the subspace S_i produced by the basis transformation with
(p, s) = (p_i, s), α = α_i.  Each helper j sends tr_{E/F_i}(c_j u_j e_m)
for m = 1..p_i, that is p_i symbols of F_i.  Because α_j^t h(α_j) lies in
F_i for every helper, the traces of c_i against the basis
ζ_{t,m} = e_m u_i α_i^t h(α_i) follow by linearity, and c_i is expanded
in the trace-dual basis μ_{t,m}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

from sympy import nextprime

from .errors import (
    MissingResponse,
    NotAHelper,
    SubspaceRankFailure,
    TraceNotInSubfield,
    UnexpectedDependence,
)
from .field import (
    FieldElement,
    SubfieldSpec,
    dual_basis,
    inv,
    is_in_subfield,
    power,
    primes_above,
    rank_over,
    trace_to,
)
from .grs import CodeSpec, Codeword, _check_helpers, dual_multipliers, h_polynomial_values
from .transform import basis_transform, extract_S

__all__ = [
    "RepairPlan",
    "RepairTranscript",
    "plan_repair",
    "helper_response",
    "reconstruct",
    "repair_node",
    "measure_bandwidth",
    "compare_subpacketization",
]


@dataclass(frozen=True)
class RepairPlan:
    spec: CodeSpec
    node: int
    helpers: tuple[int, ...]
    sub: SubfieldSpec
    subspace: tuple[FieldElement, ...]          # e_1..e_p
    h_values: dict[int, FieldElement] = field(repr=False)
    u: tuple[FieldElement, ...] = field(repr=False)
    query: tuple[FieldElement, ...] = field(repr=False)  # ζ_{t,m}, index t * p + m
    dual: tuple[FieldElement, ...] = field(repr=False)   # μ_{t,m}
    helper_scalars: dict[int, tuple[FieldElement, ...]] = field(repr=False)  # u_j e_m
    coefficients: dict[int, tuple[FieldElement, ...]] = field(repr=False)    # α_j^t h(α_j)

    @property
    def p(self) -> int:
        return len(self.subspace)

    @property
    def symbols_per_helper(self) -> int:
        """F_i symbols sent by each helper."""
        return self.p

    @property
    def fq_per_symbol(self) -> int:
        """[F_i : F_q] = ℓ / (s p_i)."""
        return self.spec.tower.subfield_degree(self.sub)


@dataclass(frozen=True)
class RepairTranscript:
    node: int
    helpers: tuple[int, ...]
    responses: dict[int, tuple[FieldElement, ...]]
    downloaded_fi_symbols: int
    downloaded_fq_symbols: int
    symbol: FieldElement

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "helpers": list(self.helpers),
            "responses": {str(j): [x.to_string() for x in r] for j, r in self.responses.items()},
            "fiSymbols": self.downloaded_fi_symbols,
            "fqSymbols": self.downloaded_fq_symbols,
            "symbol": self.symbol.to_string(),
        }


def plan_repair(spec: CodeSpec, i: int, helpers: Sequence[int]) -> RepairPlan:
    """Precompute everything needed to repair node ``i`` from ``helpers``."""
    hs = _check_helpers(spec, i, helpers)
    tower = spec.tower
    s = tower.s
    p = tower.primes[i - 1]
    sub = SubfieldSpec.f_minus(i)
    alpha, beta = tower.alpha(i), tower.beta()

    *_, Rbar = basis_transform(p, s)
    try:
        basis = extract_S(Rbar, alpha, beta, sub).elements
    except UnexpectedDependence as exc:
        raise SubspaceRankFailure(str(exc)) from exc

    # ζ_{t,m} = λ α_i^t e_m with λ = u_i h(α_i); the α_i^t e_m live in
    # F_q(α_i, β), so their dual basis is cheap, and dual(λ ζ') = λ^{-1} dual(ζ')
    local = [power(alpha, t) * e for t in range(s) for e in basis]
    if rank_over(local, sub) != s * p:
        raise SubspaceRankFailure(f"S_{i} + α S_{i} + … does not fill E")
    u = dual_multipliers(spec)
    hv = h_polynomial_values(spec, i, hs)
    lam = u[i - 1] * hv[i]
    lam_inv = inv(lam)
    query = tuple(lam * z for z in local)
    dual = tuple(lam_inv * mu for mu in dual_basis(local, sub))

    scalars = {j: tuple(u[j - 1] * e for e in basis) for j in hs}
    coeffs = {j: tuple(power(spec.point(j), t) * hv[j] for t in range(s)) for j in hs}
    return RepairPlan(spec, i, hs, sub, tuple(basis), hv, u, query, dual, scalars, coeffs)


def helper_response(c_j: FieldElement, j: int, plan: RepairPlan) -> tuple[FieldElement, ...]:
    """What helper j sends: tr_{E/F_i}(c_j u_j e_m) for m = 1..p_i."""
    if j not in plan.helper_scalars:
        raise NotAHelper(f"node {j} is not a helper for node {plan.node}")
    return tuple(trace_to(c_j * v, plan.sub) for v in plan.helper_scalars[j])


def reconstruct(responses: Mapping[int, Sequence[FieldElement]], plan: RepairPlan) -> FieldElement:
    """Rebuild c_i from the helpers' trace symbols."""
    missing = [j for j in plan.helpers if j not in responses]
    if missing:
        raise MissingResponse(f"no response from helpers {missing}")
    tower = plan.spec.tower
    s, p = tower.s, plan.p
    out = tower.zero()
    for t in range(s):
        for m in range(p):
            acc = tower.zero()
            for j in plan.helpers:
                acc = acc - plan.coefficients[j][t] * responses[j][m]
            if not is_in_subfield(acc, plan.sub):
                raise TraceNotInSubfield(f"trace for (t={t}, m={m}) left F_{plan.node}")
            out = out + acc * plan.dual[t * p + m]
    return out


def repair_node(word: Codeword, plan: RepairPlan) -> RepairTranscript:
    """Run a full repair of ``plan.node`` against ``word`` and count downloads."""
    responses = {j: helper_response(word.symbol(j), j, plan) for j in plan.helpers}
    fi = sum(len(r) for r in responses.values())
    return RepairTranscript(
        plan.node, plan.helpers, responses, fi, fi * plan.fq_per_symbol,
        reconstruct(responses, plan),
    )


def measure_bandwidth(plan: RepairPlan) -> dict:
    """Repair traffic against the cut-set bound d ℓ / (d − k + 1) and naive k ℓ."""
    spec = plan.spec
    ell, d, k = spec.tower.ell, spec.d, spec.k
    fi = d * plan.symbols_per_helper
    fq = fi * plan.fq_per_symbol
    bound = Fraction(d * ell, d - k + 1)
    return {
        "node": plan.node,
        "p": plan.p,
        "fiSymbols": fi,
        "fqSymbols": fq,
        "cutsetBound": int(bound) if bound.denominator == 1 else float(bound),
        "naiveFqSymbols": k * ell,
        "optimal": fq == bound,
    }


def _primes_one_mod(s: int, n: int) -> list[int]:
    out = []
    p = 1
    while len(out) < n:
        p = int(nextprime(p))
        if p % s == 1:
            out.append(p)
    return out


def compare_subpacketization(s: int, n: int) -> dict:
    """ℓ with the n smallest primes above s versus the n smallest primes ≡ 1 mod s."""
    if s < 2 or n < 1:
        raise ValueError("need s >= 2 and n >= 1")
    new = primes_above(s, n)
    one_mod = _primes_one_mod(s, n)
    ell_new = s * prod(new)
    ell_one_mod = s * prod(one_mod)
    ratio = Fraction(ell_one_mod, ell_new)
    return {
        "s": s,
        "n": n,
        "primesNew": new,
        "primesTYB": one_mod,
        "ellNew": ell_new,
        "ellTYB": ell_one_mod,
        "ratio": float(ratio),
        "ratioExact": f"{ratio.numerator}/{ratio.denominator}",
    }
