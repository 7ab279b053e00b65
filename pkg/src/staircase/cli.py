"""Command-line front end.

    staircase regular --dim 3 --mu 2 --out r2.json
    staircase dilate --by 2,2 --in r2.json
    staircase delta --dir 1,-1 --in col3.json
    staircase sum --axis 2 --in a.json --in b.json
    staircase verify key-lemma --s 2..5 --d 2..5 --mu 1..4 --out run.jsonl
    staircase report --in run.jsonl

Exit codes: 0 all records pass, 1 some record failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from . import collision, limit, postulation
from .errors import MatrixTooLarge, ParseError, StaircaseError, UnsupportedCase
from .lattice import make_staircase, parse, regular_staircase, serialize
from .ops import delta_specialize, dilate, sum_along_axis

KINDS = ("key-lemma", "vanishing", "strict", "eight-points", "limit-ideal")
LIMIT_STAIRCASE_MAX = 200


def parse_range(text: str) -> list[int]:
    """'2..5' -> [2, 3, 4, 5]; '1,3' -> [1, 3]; '4' -> [4]."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    return out


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}") from None


def default_seed() -> int:
    env = os.environ.get("STAIRCASE_SEED")
    return int(env) if env else postulation.DEFAULT_SEED


# --- grid tasks ------------------------------------------------------------------


def _skipped(kind: str, params: dict, reason: str) -> dict:
    return {"claim": kind, **params, "pass": False, "status": f"skipped: {reason}"}


def run_task(task: tuple) -> dict:
    """Evaluate one grid point. Top-level so worker processes can pickle it."""
    kind, params, opts = task
    if "skip" in opts:
        return _skipped(kind, params, opts["skip"])
    try:
        if kind == "key-lemma":
            return collision.verify_key_lemma(params["s"], params["d"], params["mu"]).to_record()
        if kind == "vanishing":
            return postulation.verify_vanishing_theorem(
                params["s"], params["d"], params["mu"], params["delta"],
                oracle=opts["oracle"], seed=opts["seed"], modulus=opts["modulus"]).to_record()
        if kind == "strict":
            return postulation.verify_strict_theorem(
                params["s"], params["d"], params["mu"], params["delta"]).to_record()
        if kind == "eight-points":
            return postulation.verify_eight_points(
                params["mu"], params["delta"], seed=opts["seed"],
                modulus=opts["modulus"]).to_record()
        if kind == "limit-ideal":
            E = parse(params.pop("staircase"))
            rec = limit.verify_limit_ideal(E, params["dir"], opts["margin"]).to_record()
            rec["source"] = params["source"]
            return rec
    except UnsupportedCase:
        return _skipped(kind, params, "excluded case")
    except MatrixTooLarge:
        return _skipped(kind, params, "matrix too large")
    raise ValueError(f"unknown kind {kind!r}")


def build_tasks(args) -> list[tuple]:
    opts = {"seed": args.seed, "modulus": 0 if args.exact else args.modulus,
            "oracle": args.oracle, "margin": args.margin}
    kind = args.kind
    tasks = []
    if kind == "key-lemma":
        for s, d, mu in product(args.s or parse_range("2..5"), args.d or parse_range("2..5"),
                                args.mu or parse_range("1..4")):
            tasks.append((kind, {"s": s, "d": d, "mu": mu}, opts))
    elif kind in ("vanishing", "strict"):
        s_grid = args.s or parse_range("2..5" if kind == "vanishing" else "1..5")
        d_grid = args.d or parse_range("2..4")
        for s, d, mu in product(s_grid, d_grid, args.mu or parse_range("1..3")):
            top = s * mu if kind == "vanishing" else s * mu - 1
            deltas = args.delta if args.delta is not None else (
                [top] if kind == "vanishing" else list(range(0, top + 1)))
            for delta in deltas:
                params = {"s": s, "d": d, "mu": mu, "delta": delta}
                if delta > top or delta < 0:
                    tasks.append((kind, params, {"skip": f"delta outside 0..{top}"}))
                else:
                    tasks.append((kind, params, opts))
    elif kind == "eight-points":
        for mu in args.mu or parse_range("1..3"):
            for delta in args.delta if args.delta is not None else range(0, 2 * mu + 4):
                tasks.append((kind, {"mu": mu, "delta": delta}, opts))
    elif kind == "limit-ideal":
        staircases = []
        if args.infile:
            for path in args.infile:
                staircases.append((path, _read_staircase(path)))
        else:
            for d, mu in product(args.d or parse_range("2..3"), args.mu or parse_range("1..3")):
                R = regular_staircase(d, mu)
                staircases.append((f"R_{mu}(d={d})", R))
                D = dilate(2, R)
                if len(D) <= LIMIT_STAIRCASE_MAX:
                    staircases.append((f"2.R_{mu}(d={d})", D))
        for source, E in staircases:
            dirs = [args.dir] if args.dir else collision.strong_directions(E.dim, 3)
            for v in dirs:
                tasks.append((kind, {"source": source, "dir": list(v),
                                     "staircase": serialize(E)}, opts))
    return tasks


# --- file commands -----------------------------------------------------------------


def _read_staircase(path: str):
    if path == "-":
        return parse(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_regular(args) -> int:
    _write(serialize(regular_staircase(args.dim, args.mu)), args.out)
    return 0


def cmd_dilate(args) -> int:
    E = _read_staircase(args.infile[0])
    _write(serialize(dilate(args.by, E)), args.out)
    return 0


def cmd_delta(args) -> int:
    E = _read_staircase(args.infile[0])
    image = delta_specialize(args.dir, E)
    if not hasattr(image, "dim"):
        image = make_staircase(E.dim, image)  # weak directions may break closure
    _write(serialize(image), args.out)
    return 0


def cmd_sum(args) -> int:
    stairs = [_read_staircase(p) for p in args.infile]
    _write(serialize(sum_along_axis(args.axis, *stairs)), args.out)
    return 0


def cmd_verify(args) -> int:
    tasks = build_tasks(args)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    failed = 0
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                records = pool.map(run_task, tasks)  # map preserves grid order
                failed = _emit(records, out)
        else:
            failed = _emit(map(run_task, tasks), out)
    finally:
        if args.out:
            out.close()
    return 1 if failed else 0


def _emit(records, out) -> int:
    failed = 0
    for rec in records:
        out.write(json.dumps(rec, separators=(",", ":")) + "\n")
        out.flush()
        if rec["status"] == "fail":
            failed += 1
    return failed


def tally(lines) -> dict[str, dict[str, int]]:
    counts: dict[str, dict[str, int]] = {}
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            claim, status = rec["claim"], rec["status"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad record: {exc}", lineno) from None
        bucket = "skipped" if status.startswith("skipped") else status
        row = counts.setdefault(claim, {"pass": 0, "fail": 0, "inconclusive": 0, "skipped": 0})
        row[bucket] = row.get(bucket, 0) + 1
    return counts


def cmd_report(args) -> int:
    if args.infile and args.infile[0] != "-":
        with open(args.infile[0], encoding="utf-8") as fh:
            counts = tally(fh)
    else:
        counts = tally(sys.stdin)
    cols = ("pass", "fail", "inconclusive", "skipped")
    width = max([len("claim")] + [len(c) for c in counts])
    print(f"{'claim':<{width}}  " + "  ".join(f"{c:>12}" for c in cols))
    for claim in sorted(counts):
        print(f"{claim:<{width}}  " + "  ".join(f"{counts[claim][c]:>12}" for c in cols))
    return 1 if any(row["fail"] for row in counts.values()) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="staircase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regular", help="write R_mu in N^dim")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("dilate", help="anisotropic dilation (a_1,...,a_d).E")
    p.add_argument("--by", type=parse_vector, required=True)
    p.add_argument("--in", dest="infile", action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("delta", help="Delta-specialization of a staircase")
    p.add_argument("--dir", type=parse_vector, required=True)
    p.add_argument("--in", dest="infile", action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("sum", help="sum of staircases along an axis (1-based)")
    p.add_argument("--axis", type=int, default=1)
    p.add_argument("--in", dest="infile", action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("verify", help="run a verifier over a parameter grid, emit JSONL")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--s", type=parse_range)
    p.add_argument("--d", type=parse_range)
    p.add_argument("--mu", type=parse_range)
    p.add_argument("--delta", type=parse_range)
    p.add_argument("--dir", type=parse_vector)
    p.add_argument("--in", dest="infile", action="append")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--modulus", type=int, default=postulation.DEFAULT_MODULUS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="rational oracle instead of F_p")
    p.add_argument("--oracle", action="store_true", help="add the rank oracle to vanishing")
    p.add_argument("--margin", type=int, default=1, help="box margin for limit-ideal")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="tally a JSONL stream per claim")
    p.add_argument("--in", dest="infile", action="append")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except (StaircaseError, OSError) as exc:
        print(f"staircase: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
