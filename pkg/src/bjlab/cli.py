"""Command-line front end.

Exit codes: 0 success (for ``check-ortho``: consistently orthogonal),
1 refuted or a failing suite, 2 inconclusive or oracle disagreement,
64 unparseable input or unknown theorem id, 65 dimension mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import orthogonality as orth
from .spaces import (
    DescriptorParseError,
    DimensionMismatch,
    SpaceError,
    SupSum,
    ZeroVectorError,
    directional_range,
    format_space,
    norm,
    parse_space,
)
from .symmetry import NonUnitInput, classify_point, search_left_counterexample, search_right_counterexample
from .theorems import SUITES, RunConfig, run_suite

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_DIM = 64, 65


class UsageError(Exception):
    pass


def parse_vector(text: str) -> np.ndarray:
    try:
        v = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"vector is not valid JSON: {e}") from None
    if not isinstance(v, list) or not v or not all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in v
    ):
        raise UsageError("vector must be a nonempty JSON array of numbers")
    return np.array(v, dtype=float)


def _space(text: str):
    try:
        return parse_space(text)
    except DescriptorParseError as e:
        raise UsageError(str(e)) from None


# --------------------------------------------------------------------------
# rendering


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], json.dumps(obj) if isinstance(obj, list) else obj


def _human(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_human(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: {len(v)} item(s)")
            for i, item in enumerate(v):
                lines.append(f"{pad}  [{i}]")
                lines.append(_human(item, indent + 2))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(line for line in lines if line)


def render(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(obj):
            w.writerow([k, v])
        return buf.getvalue().rstrip("\n")
    return _human(obj)


# --------------------------------------------------------------------------
# commands


def _directional_verdict(space, x, y, tau):
    lo, hi = (float(v) for v in directional_range(space, x, y, tau))
    ny = norm(space, y)
    ok = lo <= tau * ny and hi >= -tau * ny
    d = orth.Decision.ORTHOGONAL if ok else orth.Decision.NOT_ORTHOGONAL
    return orth.OrthoVerdict(d, "directional", interval=(lo, hi))


def cmd_check_ortho(args, cfg):
    space = _space(args.space)
    x, y = parse_vector(args.x), parse_vector(args.y)
    verdicts = [
        orth.is_bj_min(space, x, y, cfg.tol_rel),
        orth.is_bj_functional(space, x, y, cfg.tol_norm),
    ]
    if isinstance(space, SupSum):
        verdicts.append(orth.supsum_orthogonal(space, x, y, tau=cfg.tol_norm))
    else:
        verdicts.append(_directional_verdict(space, x, y, cfg.tol_norm))
    decided = {v.decision for v in verdicts if v.decision is not orth.Decision.INCONCLUSIVE}
    if len(decided) > 1:
        status, code = "disagreement", EXIT_INCONCLUSIVE
    elif not decided or any(v.decision is orth.Decision.INCONCLUSIVE for v in verdicts):
        status, code = "inconclusive", EXIT_INCONCLUSIVE
    elif orth.Decision.ORTHOGONAL in decided:
        status, code = "orthogonal", EXIT_OK
    else:
        status, code = "not_orthogonal", EXIT_REFUTED
    report = {
        "command": "check-ortho",
        "space": format_space(space),
        "x": x.tolist(),
        "y": y.tolist(),
        "status": status,
        "oracles": [v.to_dict() for v in verdicts],
    }
    if status == "disagreement":
        sys.stderr.write("bug report: " + json.dumps(report, sort_keys=True) + "\n")
    return report, code


def cmd_classify(args, cfg):
    space = _space(args.space)
    x = parse_vector(args.x)
    nx = norm(space, x)
    if nx == 0:
        raise ZeroVectorError("x must be nonzero")
    if args.normalize:
        x = x / nx
    elif abs(nx - 1) > 1e-8:
        raise NonUnitInput(f"x has norm {nx!r}; pass --normalize to rescale")
    out = classify_point(space, x, cfg.budget, cfg.seed)
    report = {"command": "classify", "space": format_space(space), "x": x.tolist(), **out}
    return report, EXIT_OK


def cmd_search(args, cfg):
    space = _space(args.space)
    x = parse_vector(args.x)
    search = search_left_counterexample if args.direction == "left" else search_right_counterexample
    w = search(space, x, cfg.budget, cfg.seed, cfg.tol_rel)
    report = {
        "command": "search-counterexample",
        "space": format_space(space),
        "x": x.tolist(),
        "direction": args.direction,
        "budget": cfg.budget,
        "result": "witness" if w else "none found in budget",
        "witness": w.to_dict() if w else None,
    }
    return report, EXIT_OK


def cmd_verify(args, cfg):
    if args.theorem_id not in SUITES:
        raise UsageError(f"unknown theorem id {args.theorem_id!r}; see list-theorems")
    rep = run_suite(args.theorem_id, cfg)
    return {"command": "verify-theorem", **rep.to_dict()}, EXIT_OK if rep.ok else EXIT_REFUTED


def cmd_list(args, cfg):
    items = [{"id": k, "description": d} for k, (_, d) in SUITES.items()]
    return {"command": "list-theorems", "theorems": items}, EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $BJLAB_SEED or 1729)")
    common.add_argument("--budget", type=int, default=None, help="search rounds")
    common.add_argument("--tol-rel", type=float, default=None)
    common.add_argument("--tol-norm", type=float, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--output", choices=("json", "csv", "human"), default=None)
    common.add_argument("--no-timestamp", action="store_true")

    p = argparse.ArgumentParser(prog="bjlab", description="Birkhoff-James orthogonality and symmetric points")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-ortho", parents=[common], help="decide x ⊥_B y with every oracle")
    c.add_argument("space")
    c.add_argument("x")
    c.add_argument("y")
    c.set_defaults(func=cmd_check_ortho)

    c = sub.add_parser("classify", parents=[common], help="left/right symmetry of a unit vector")
    c.add_argument("space")
    c.add_argument("x")
    c.add_argument("--normalize", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("verify-theorem", parents=[common], help="run a randomised property suite")
    c.add_argument("theorem_id")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("search-counterexample", parents=[common], help="look for an asymmetric pair")
    c.add_argument("space")
    c.add_argument("x")
    c.add_argument("direction", choices=("left", "right"))
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("list-theorems", parents=[common], help="list suite ids")
    c.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        cfg = RunConfig.from_env(
            seed=args.seed,
            budget=args.budget,
            tol_rel=args.tol_rel,
            tol_norm=args.tol_norm,
            output=args.output,
            trials=args.trials,
            no_timestamp=args.no_timestamp,
        )
        report, code = args.func(args, cfg)
    except DimensionMismatch as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DIM
    except (UsageError, SpaceError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    print(render(report, cfg.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
