"""Command-line entry point: ``rsmsr <subcommand> [options]``.

Every subcommand is deterministic given its flags and ``--seed``; random
messages and helper sets come from ``numpy.random.default_rng(seed)``
(PCG64).  JSON documents carry ``"schema": 1``.  Exit status is 0 on
success, 1 when an embedded check fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd

import numpy as np
from sympy import isprime

from .errors import RSMSRError
from .euclid import euclid_chain, square_partition
from .field import SubfieldSpec, make_tower
from .grs import encode, make_code
from .repair import (
    compare_subpacketization,
    measure_bandwidth,
    plan_repair,
    repair_node,
)
from .transform import basis_transform, format_grid, verify_lemma_main, verify_subspace_coordinates

SCHEMA = 1


class CheckFailed(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("error", "check failed"))
        self.report = report


@dataclass
class RunConfig:
    subcommand: str
    q: int | None = None
    s: int | None = None
    primes: list[int] | None = None
    n: int | None = None
    k: int | None = None
    seed: int = 0
    fmt: str | None = None
    output: str | None = None

    @property
    def d(self) -> int:
        return self.s + self.k - 1

    def validate_code(self) -> None:
        """k < d < n, d = s + k − 1 and one prime per node."""
        if self.primes is not None and self.n is not None and len(self.primes) != self.n:
            raise ValueError(f"--n {self.n} but {len(self.primes)} primes given")
        if self.primes is not None:
            self.n = len(self.primes)
        if self.n is None:
            raise ValueError("give --n or --primes")
        if self.k is None or self.k < 1:
            raise ValueError("--k must be a positive integer")
        if not self.k < self.d < self.n:
            raise ValueError(f"need k < d < n with d = s + k - 1; got k={self.k}, d={self.d}, n={self.n}")


def _primes_arg(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random messages and helper sets")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--q", type=int, default=2, help="prime base field order")
    code.add_argument("--s", type=int, required=True, help="s = d + 1 - k")
    code.add_argument("--primes", type=_primes_arg, help="comma-separated primes p_1..p_n (default: smallest above s)")
    code.add_argument("--n", type=int, help="code length (defaults to the number of primes)")
    code.add_argument("--k", type=int, required=True, help="code dimension")

    parser = argparse.ArgumentParser(prog="rsmsr", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("partition", parents=[common], help="Euclidean square partition of a p x s rectangle")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--ascii", action="store_true", help="also draw the partition as a letter grid")

    p = subs.add_parser("transform", parents=[common], help="print the arrays B, R and R-bar")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")

    p = subs.add_parser("verify-subspace", parents=[common], help="rank check of S and its alpha-shifts")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    subs.add_parser("build-code", parents=[common, code], help="code parameters and a sample codeword")

    p = subs.add_parser("repair-demo", parents=[common, code], help="repair one node and print the transcript")
    p.add_argument("--fail", type=int, required=True, help="failed node, 1-based")
    p.add_argument("--helpers", type=_primes_arg, help="comma-separated helper nodes (default: first d others)")

    p = subs.add_parser("bench", parents=[common, code], help="repair every node from several helper sets")
    p.add_argument("--helper-sets", type=int, default=3, help="helper sets tried per node (capped by how many exist)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")

    p = subs.add_parser("compare-subpack", parents=[common], help="subpacketization with and without p = 1 mod s")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    return parser


def _dump(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, ensure_ascii=False) + "\n"


def cmd_partition(args) -> str:
    part = square_partition(args.p, args.s)
    doc = {"p": args.p, "s": args.s, "squares": [list(q.as_tuple()) for q in part.squares]}
    if args.p > args.s >= 1:
        chain = euclid_chain(args.p, args.s)
        doc["chain"] = {"a": list(chain.a), "b": list(chain.b_rest)}
    out = _dump(doc)
    if args.ascii:
        out += "\n" + part.ascii() + "\n"
    return out


def cmd_transform(args) -> str:
    B, R, Rbar = basis_transform(args.p, args.s)
    if args.fmt == "json":
        def grid(a):
            return [[str(e) for e in row] for row in a.entries]
        return _dump({"p": args.p, "s": args.s, "B": grid(B), "R": grid(R), "Rbar": grid(Rbar)})
    blocks = [format_grid(B, "B"), format_grid(R, "R"), format_grid(Rbar, "Rbar")]
    return "\n\n".join(blocks) + "\n"


def cmd_verify_subspace(args) -> str:
    p, s, q = args.p, args.s, args.q
    if not isprime(q):
        raise ValueError(f"q={q} is not prime")
    if not p > s >= 1:
        raise ValueError("need p > s >= 1")
    reports = [verify_subspace_coordinates(p, s, q)]
    if isprime(p) and s >= 2 and gcd(p, s) == 1:
        tower = make_tower(q, s, [p])
        reports.append(verify_lemma_main(p, s, tower.alpha(1), tower.beta(), SubfieldSpec.base()))
    dims = {(r.dim_s, r.dim_k) for r in reports}
    r0 = reports[0]
    ok = all(r.ok for r in reports) and len(dims) == 1
    doc = {"p": p, "s": s, "q": q, "dimS": r0.dim_s, "dimK": r0.dim_k, "ok": ok,
           "routes": [r.route for r in reports]}
    if not ok:
        raise CheckFailed({**doc, "error": "rank check failed"})
    return _dump(doc)


def _code_from(cfg: RunConfig):
    tower = make_tower(cfg.q, cfg.s, cfg.primes, n=cfg.n)
    return make_code(tower, cfg.k)


def cmd_build_code(cfg: RunConfig) -> str:
    spec = _code_from(cfg)
    rng = np.random.default_rng(cfg.seed)
    msg = [spec.tower.random_element(rng) for _ in range(spec.k)]
    word = encode(spec, msg)
    return _dump({"code": spec.to_dict(), "message": [m.to_string() for m in msg],
                  "codeword": word.to_strings()})


def cmd_repair_demo(cfg: RunConfig, fail: int, helpers: list[int] | None) -> str:
    spec = _code_from(cfg)
    if helpers is None:
        helpers = [j for j in range(1, spec.n + 1) if j != fail][: spec.d]
    rng = np.random.default_rng(cfg.seed)
    word = encode(spec, [spec.tower.random_element(rng) for _ in range(spec.k)])
    plan = plan_repair(spec, fail, helpers)
    tr = repair_node(word, plan)
    bw = measure_bandwidth(plan)
    ok = tr.symbol == word.symbol(fail) and tr.downloaded_fq_symbols == bw["cutsetBound"]
    doc = {**tr.to_dict(), "original": word.symbol(fail).to_string(),
           "bound": bw["cutsetBound"], "naive": bw["naiveFqSymbols"], "ok": ok}
    if not ok:
        raise CheckFailed({**doc, "error": "repair mismatch"})
    return _dump(doc)


def _helper_sets(n: int, node: int, d: int, count: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    others = [j for j in range(1, n + 1) if j != node]
    combos = list(itertools.combinations(others, d))
    if len(combos) <= count:
        return combos
    picks = sorted(rng.choice(len(combos), size=count, replace=False).tolist())
    return [combos[c] for c in picks]


def bench_rows(cfg: RunConfig, helper_sets: int) -> list[dict]:
    """One row per (node, helper set); rows come back in node order."""
    spec = _code_from(cfg)
    rng = np.random.default_rng(cfg.seed)
    word = encode(spec, [spec.tower.random_element(rng) for _ in range(spec.k)])
    jobs = [(i, hs) for i in range(1, spec.n + 1)
            for hs in _helper_sets(spec.n, i, spec.d, helper_sets, rng)]

    def run(job):
        i, hs = job
        plan = plan_repair(spec, i, hs)
        tr = repair_node(word, plan)
        bw = measure_bandwidth(plan)
        return {
            "node": i,
            "p_i": plan.p,
            "helpers": " ".join(map(str, hs)),
            "fiSymbols": tr.downloaded_fi_symbols,
            "fqSymbols": tr.downloaded_fq_symbols,
            "bound": bw["cutsetBound"],
            "naive": bw["naiveFqSymbols"],
            "saving": round(1 - tr.downloaded_fq_symbols / bw["naiveFqSymbols"], 6),
            "ok": tr.symbol == word.symbol(i) and tr.downloaded_fq_symbols == bw["cutsetBound"],
        }

    workers = max(1, int(os.environ.get("RSMSR_THREADS", "1") or 1))
    if workers == 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def cmd_bench(cfg: RunConfig, helper_sets: int) -> str:
    rows = bench_rows(cfg, helper_sets)
    if cfg.fmt == "json":
        out = _dump({"rows": rows, "ok": all(r["ok"] for r in rows)})
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out = buf.getvalue()
    if not all(r["ok"] for r in rows):
        raise CheckFailed({"rows": rows, "error": "a repair failed"})
    return out


def cmd_compare_subpack(args) -> str:
    return _dump(compare_subpacketization(args.s, args.n))


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.subcommand, seed=args.seed, output=args.output, fmt=getattr(args, "fmt", None))
    try:
        if args.subcommand in ("build-code", "repair-demo", "bench"):
            cfg.q, cfg.s, cfg.primes, cfg.n, cfg.k = args.q, args.s, args.primes, args.n, args.k
            try:
                cfg.validate_code()
            except ValueError as exc:
                parser.error(str(exc))
        if args.subcommand == "partition":
            out = cmd_partition(args)
        elif args.subcommand == "transform":
            out = cmd_transform(args)
        elif args.subcommand == "verify-subspace":
            out = cmd_verify_subspace(args)
        elif args.subcommand == "build-code":
            out = cmd_build_code(cfg)
        elif args.subcommand == "repair-demo":
            out = cmd_repair_demo(cfg, args.fail, args.helpers)
        elif args.subcommand == "bench":
            out = cmd_bench(cfg, args.helper_sets)
        else:
            out = cmd_compare_subpack(args)
    except CheckFailed as exc:
        sys.stdout.write(_dump({"ok": False, **exc.report}))
        return 1
    except (RSMSRError, ValueError) as exc:
        sys.stdout.write(_dump({"ok": False, "error": f"{type(exc).__name__}: {exc}"}))
        return 1
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
