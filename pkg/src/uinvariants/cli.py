"""Command line entry point: ``uinv {gen,verify,canon,classify,bench}``.

Exit codes: 0 success, 1 failed verification, 2 size guard or usage error,
3 matrix outside Omega, 4 mixed matrix sizes.  Output is written only after
a command has fully succeeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import generators as gen
from .orbits import (
    canonicalize,
    classify,
    first_vanishing_minor,
    independence_check,
    invariant_fingerprint,
    slice_triangularity_check,
)
from .polycore import x
from .slices import block_formula, restricted_generator, tri_decompose
from .symmatrix import PolyMatrix, det, det_bareiss, det_cofactor

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_GUARD = 2
EXIT_NOT_IN_OMEGA = 3
EXIT_MIXED_SIZES = 4

# full expansion of J_{n,n-1} is ~6e5 terms at n=5 and out of reach at n=6
GEN_GUARD = 5
VERIFY_GUARD = 6
NUMERIC_GUARD = 12
SYMBOLIC_RHO_MAX = 3
SYMBOLIC_STRUCTURE_MAX = 4


@dataclass
class CliConfig:
    command: str
    n: int = 2
    seed: int = 0
    trials: int = 20
    format: str = "text"
    out: Optional[Path] = None
    input: Optional[str] = None
    force: bool = False
    tamper: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.trials < 1:
            raise ValueError("--trials must be >= 1")


class _Guard(Exception):
    pass


def _emit(cfg: CliConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out is not None:
        cfg.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _guard(cfg: CliConfig, n: int, limit: int) -> None:
    if n > limit and not cfg.force:
        raise _Guard(f"n={n} exceeds the default limit {limit} for '{cfg.command}'; pass --force to override")


# ------------------------------------------------------------------ gen


def cmd_gen(cfg: CliConfig) -> int:
    _guard(cfg, cfg.n, GEN_GUARD)
    gs = gen.generator_set(cfg.n)
    records = gs.dump()
    for rec in records:
        rec["restricted"] = restricted_generator(rec["k"], rec["i"], cfg.n).to_text()
    if cfg.format == "json":
        _emit(cfg, json.dumps(records, indent=1))
    else:
        lines = []
        for rec in records:
            head = f"J[{rec['k']}][{rec['i']}]"
            lines.append(f"{head}  degree={rec['degree']} terms={rec['terms']}")
            lines.append(f"  {head} = {rec['poly']}")
            lines.append(f"  pi({head}) = {rec['restricted']}")
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------------- verify


def _run_checks(cfg: CliConfig) -> List[dict]:
    n, seed = cfg.n, cfg.seed
    checks: List[dict] = []

    def add(name, passed, **detail):
        checks.append({"name": name, "passed": bool(passed), **detail})

    overrides = {}
    if cfg.tamper:
        if n < 2:
            raise _Guard("--tamper needs n >= 2")
        base = gen.generator_evaluator(2, 1, n)
        overrides[(2, 1)] = lambda A: base(A) + A[0][0]

    family = gen.check_family_invariance(n, cfg.trials, seed, overrides)
    for (k, i), v in sorted(family.items()):
        detail = {"k": k, "i": i, "trials": v.trials, "seed": seed}
        if v.witness:
            detail["witness"] = v.witness
        add("invariance/randomized", v.passed, **detail)

    if n <= SYMBOLIC_RHO_MAX:
        for k, i in gen.gen_indices(n):
            f = gen.build_J(k, i, n)
            if cfg.tamper and (k, i) == (2, 1):
                f = f + x(1, 1, n)
            bad = gen.symbolic_invariance_failures(f, n)
            add("invariance/symbolic", not bad, k=k, i=i, moved_by=[list(p) for p in bad])

    for k, i in gen.gen_indices(n):
        try:
            dec = tri_decompose(k, i, n)
            add("triangular/decomposition", True, k=k, i=i, phi=dec.phi.to_text())
        except Exception as exc:  # noqa: BLE001 - report, don't crash
            add("triangular/decomposition", False, k=k, i=i, error=str(exc))
        bf = block_formula(k, i, n)
        same = bf["product"] == restricted_generator(k, i, n)
        add("triangular/block-formula", same and bf["det_C_is_monomial"], k=k, i=i, det_C=bf["det_C"].to_text())

    mode = "symbolic" if n <= SYMBOLIC_STRUCTURE_MAX else "numeric"
    tri = slice_triangularity_check(n, seed, mode)
    add("triangular/slice-jacobian", tri.passed, mode=mode, problems=tri.problems)

    rank = independence_check(n, seed)
    add(
        "independence/jacobian-rank",
        rank.passed,
        rank=rank.rank,
        expected=rank.expected,
        attempts=rank.attempts,
        status=rank.status,
    )
    return checks


def _fmt_check(c: dict) -> str:
    status = "PASS" if c["passed"] else "FAIL"
    bits = [c["name"]]
    if "k" in c:
        bits.append(f"J[{c['k']}][{c['i']}]")
    if c["name"] == "independence/jacobian-rank":
        bits.append(f"rank {c['rank']} = {c['expected']} expected" if c["passed"] else f"rank {c['rank']} < {c['expected']} expected ({c['status']})")
    elif c["name"] == "invariance/randomized":
        bits.append(f"trials={c['trials']} seed={c['seed']}")
    elif c["name"] == "triangular/slice-jacobian":
        bits.append(f"mode={c['mode']}")
    line = f"{status} " + " ".join(bits)
    if not c["passed"]:
        for key in ("witness", "moved_by", "problems", "error"):
            if c.get(key):
                line += f"\n    {key}: {json.dumps(c[key])}"
    return line


def cmd_verify(cfg: CliConfig) -> int:
    _guard(cfg, cfg.n, VERIFY_GUARD)
    checks = _run_checks(cfg)
    ok = all(c["passed"] for c in checks)
    if cfg.format == "json":
        _emit(cfg, json.dumps({"n": cfg.n, "seed": cfg.seed, "trials": cfg.trials, "passed": ok, "checks": checks}, indent=1))
    else:
        lines = [f"verification report n={cfg.n} seed={cfg.seed} trials={cfg.trials}"]
        lines += [_fmt_check(c) for c in checks]
        failed = sum(not c["passed"] for c in checks)
        lines.append(f"{'ALL PASS' if ok else 'FAILED'}: {len(checks) - failed}/{len(checks)} checks passed")
        _emit(cfg, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# ------------------------------------------------------------ matrix input


def _read_source(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _matrix_from_obj(obj) -> List[List]:
    if isinstance(obj, dict):
        M = PolyMatrix.from_json_obj(obj)
        if not M.is_constant():
            raise ValueError("matrix entries must be constants")
        return M.to_rationals()
    if isinstance(obj, list):
        return [[Fraction(str(v)) for v in row] for row in obj]
    raise ValueError("unrecognised matrix object")


def _csv_blocks(text: str) -> List[List[List]]:
    blocks, cur = [], []
    for line in text.splitlines():
        if not line.strip():
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append([Fraction(c.strip()) for c in line.split(",")])
    if cur:
        blocks.append(cur)
    return blocks


def parse_matrices(text: str) -> List[List[List]]:
    """Matrices from JSON (one object, a list, or {"matrices": [...]}) or blank-line separated CSV."""
    stripped = text.strip()
    if not stripped:
        return []
    if stripped[0] in "[{":
        obj = json.loads(stripped)
        if isinstance(obj, dict) and "matrices" in obj:
            return [_matrix_from_obj(m) for m in obj["matrices"]]
        if isinstance(obj, dict):
            return [_matrix_from_obj(obj)]
        if obj and all(isinstance(m, dict) for m in obj):
            return [_matrix_from_obj(m) for m in obj]
        if obj and all(isinstance(r, list) and r and isinstance(r[0], list) for r in obj):
            return [_matrix_from_obj(m) for m in obj]
        return [_matrix_from_obj(obj)] if obj else []
    blocks = _csv_blocks(stripped)
    for b in blocks:
        if any(len(r) != len(b) for r in b):
            raise ValueError("CSV matrix must be square")
    return blocks


def cmd_canon(cfg: CliConfig) -> int:
    mats = parse_matrices(_read_source(cfg.input))
    if len(mats) != 1:
        raise ValueError(f"canon expects exactly one matrix, got {len(mats)}")
    A = mats[0]
    _guard(cfg, len(A), NUMERIC_GUARD)
    k = first_vanishing_minor(A)
    if k is not None:
        print(f"not in Omega: J_{k} = 0", file=sys.stderr)
        return EXIT_NOT_IN_OMEGA
    fp = invariant_fingerprint(A)
    point = canonicalize(A)
    if cfg.format == "json":
        _emit(cfg, json.dumps({"fingerprint": fp.to_json_obj(), "canonical": point.to_json_obj()}, indent=1))
    else:
        lines = ["fingerprint:"]
        lines += [f"  {name} = {v}" for name, v in fp.to_json_obj()["values"].items()]
        lines.append("canonical slice point:")
        lines += [f"  {name} = {v}" for name, v in point.to_json_obj()["coords"].items()]
        lines.append("canonical matrix:")
        lines += ["  [" + ", ".join(str(v) for v in row) + "]" for row in point.to_matrix()]
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


def cmd_classify(cfg: CliConfig) -> int:
    mats = parse_matrices(_read_source(cfg.input))
    sizes = {len(m) for m in mats}
    if len(sizes) > 1:
        print(f"mixed matrix sizes: {sorted(sizes)}", file=sys.stderr)
        return EXIT_MIXED_SIZES
    if sizes:
        _guard(cfg, sizes.pop(), NUMERIC_GUARD)
    report = classify(mats)
    if cfg.format == "json":
        _emit(cfg, json.dumps(report, indent=1))
    else:
        lines = [f"{len(report['classes'])} orbit classes, {len(report['unclassified'])} unclassified"]
        for c, cls in enumerate(report["classes"]):
            coords = ", ".join(f"{k}={v}" for k, v in cls["canonical"]["coords"].items())
            lines.append(f"class {c}: members {cls['members']}  {coords}")
        for u in report["unclassified"]:
            lines.append(f"unclassified: {u['index']} ({u['reason']})")
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------ bench


def cmd_bench(cfg: CliConfig) -> int:
    """Timings of the two determinant routes; wall times vary run to run."""
    _guard(cfg, cfg.n, VERIFY_GUARD + 2)
    rng = random.Random(f"{cfg.seed}/bench")
    mats = [gen.random_matrix(cfg.n, rng) for _ in range(cfg.trials)]
    t0 = time.perf_counter()
    cof = [det_cofactor(m) for m in mats]
    t1 = time.perf_counter()
    bar = [det_bareiss(m) for m in mats]
    t2 = time.perf_counter()
    X = gen.build_X(cfg.n)
    t3 = time.perf_counter()
    dX = det(X, "cofactor")
    t4 = time.perf_counter()
    rec = {
        "n": cfg.n,
        "matrices": cfg.trials,
        "numeric_cofactor_s": round(t1 - t0, 6),
        "numeric_bareiss_s": round(t2 - t1, 6),
        "paths_agree": cof == bar,
        "symbolic_det_terms": len(dX),
        "symbolic_det_s": round(t4 - t3, 6),
    }
    if cfg.n <= SYMBOLIC_STRUCTURE_MAX:
        terms = {}
        t5 = time.perf_counter()
        for k, i in gen.gen_indices(cfg.n):
            terms[f"J[{k}][{i}]"] = len(gen.build_J(k, i, cfg.n))
        rec["generator_terms"] = terms
        rec["generator_expand_s"] = round(time.perf_counter() - t5, 6)
    if cfg.format == "json":
        _emit(cfg, json.dumps(rec, indent=1))
    else:
        _emit(cfg, "\n".join(f"{k}: {v}" for k, v in rec.items()))
    return EXIT_OK if rec["paths_agree"] else EXIT_VERIFY_FAILED


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "canon": cmd_canon,
    "classify": cmd_classify,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="matrix order")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("--force", action="store_true", help="override the size guard")

    parser = argparse.ArgumentParser(prog="uinv", description="U-invariants of the adjoint action of GL(n)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="expand the generators J[k][i] and their slice restrictions")
    v = sub.add_parser("verify", parents=[common], help="run invariance, triangularity and independence checks")
    v.add_argument("--tamper", action="store_true", help=argparse.SUPPRESS)
    for name, text in (("canon", "canonical slice point of one matrix"), ("classify", "group matrices by U-orbit")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", nargs="?", default="-", help="JSON or CSV matrix file ('-' for stdin)")
    sub.add_parser("bench", parents=[common], help="time cofactor vs fraction-free determinants")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = CliConfig(
            command=args.command,
            n=args.n,
            seed=args.seed,
            trials=args.trials,
            format=args.format,
            out=args.out,
            input=getattr(args, "input", None),
            force=args.force,
            tamper=getattr(args, "tamper", False),
        )
        return COMMANDS[cfg.command](cfg)
    except _Guard as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    raise SystemExit(main())
