"""``ptl`` command-line front end.

Exit codes: 0 computed, 2 undecided at the search limit, 1 error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import __version__, analytics
from .arith import MAX_LIMIT, SieveTable, tetration2
from .config import load_or_build_sieve, resolve_config
from .constructive import expand_tower, realize_in_progression, validate_realization, word_overlap_decompose
from .errors import PrimeTowerError, Undecided
from .parallel import map_partitions
from .patterns import (
    a_sequence,
    find_occurrences,
    kappa_bounded,
    pattern_from_integers,
)
from .tables import DEFAULT_CHUNK, STATS, compute_range, iter_ranges, run_lengths
from .trees import FLAVORS, NONPLANAR, PLANAR, decode, nonplanar_code, planar_code, to_json, tree_of, tree_stats

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2
CSV_HEADER = "n,omega,big_omega,E,H,planar,nonplanar"


class UsageError(PrimeTowerError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--sieve-limit", type=int, help="minimum sieve size (default 1000000)")
    p.add_argument("--cache", dest="cache_path", help="sieve cache file (PTWR format)")
    p.add_argument("--partitions", type=int, help="split range work into this many partitions")
    p.add_argument("--output", choices=("csv", "json", "table"))
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--no-build", action="store_true", default=None,
                   help="fail instead of building a missing or stale sieve cache")
    p.add_argument("--force-rebuild", action="store_true", default=None,
                   help="rebuild the sieve cache even if it is present or corrupt")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptl", description="Prime tower factorization trees and tree patterns.")
    parser.add_argument("--version", action="version", version=f"ptl {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("tree", help="tree, codes and statistics of one integer")
    p.add_argument("n", type=int)
    _add_common(p)

    p = sub.add_parser("scan", help="per-integer CSV rows over a range")
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    _add_common(p)

    p = sub.add_parser("find", help="occurrences of a pattern built from integers")
    p.add_argument("--pattern", required=True, help="comma-separated increasing integers, e.g. 2,3")
    p.add_argument("--flavor", choices=FLAVORS, default=PLANAR)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--max-positions", type=int, default=1000)
    _add_common(p)

    p = sub.add_parser("kappa", help="bounded kappa certificate for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--stat", choices=STATS, default=PLANAR)
    _add_common(p)

    p = sub.add_parser("runs", help="n <= limit whose run k(n) reaches --min-k")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--min-k", type=int, default=2)
    p.add_argument("--flavor", choices=FLAVORS, default=NONPLANAR)
    p.add_argument("--max-positions", type=int, default=1000)
    _add_common(p)

    p = sub.add_parser("aseq", help="least starts of runs of equal nonplanar trees")
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--limit", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("census", help="counting functions F, J, S, K, V and tails")
    p.add_argument("--fn", required=True, choices=("F", "J", "S", "K", "V", "edge-tail", "height-tail"))
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--y", type=int, default=0)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--flavor", choices=FLAVORS, default=NONPLANAR)
    _add_common(p)

    p = sub.add_parser("monitor", help="empirical bound monitors")
    p.add_argument("--bound", required=True, choices=("run", "height", "rho", "residual", "eps"))
    p.add_argument("--limit", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("realize", help="label a planar tree so its value lies in a progression")
    p.add_argument("--shape", required=True, help="planar code, e.g. 110010")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cap-bits", type=int, default=4096)
    _add_common(p)

    p = sub.add_parser("words", help="decompose overlapping words alpha·beta = beta·gamma")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", default="")
    p.add_argument("--gamma", required=True)
    _add_common(p)
    return parser


def _config(args):
    flags = {
        "sieve_limit": args.sieve_limit,
        "cache_path": args.cache_path,
        "partitions": args.partitions,
        "output": "json" if args.json else args.output,
        "config": args.config,
        "no_build": args.no_build,
        "force_rebuild": args.force_rebuild,
    }
    return resolve_config(flags)


def _sieve(cfg, need: int) -> SieveTable:
    need = max(cfg.sieve_limit, need, 2)
    if need > MAX_LIMIT:
        raise UsageError(f"required sieve size {need} exceeds the supported maximum {MAX_LIMIT}")
    return load_or_build_sieve(cfg, need)


def _emit(obj, cfg, out, text=None):
    if cfg.output == "json" or text is None:
        out.write(json.dumps(obj, separators=(", ", ": ")) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def cmd_tree(args, cfg, out):
    if args.n < 1:
        raise UsageError(f"tree needs n >= 1, got {args.n}")
    sieve = _sieve(cfg, args.n)
    t = tree_of(args.n, sieve)
    if cfg.output == "json":
        out.write(to_json(t) + "\n")
        return EXIT_OK
    s = tree_stats(args.n, sieve)
    rows = [
        ("n", s.n), ("tree", to_json(t)), ("planar", planar_code(t).bits or "-"),
        ("nonplanar", nonplanar_code(t).bits or "-"), ("omega", s.omega),
        ("big_omega", s.big_omega), ("E", s.E), ("H", s.H),
    ]
    out.write("".join(f"{k:<10} {v}\n" for k, v in rows))
    return EXIT_OK


def scan_rows(sieve: SieveTable, lo: int, hi: int, partitions: int = 1, chunk: int = DEFAULT_CHUNK) -> str:
    """CSV body (no header) for n in [lo, hi]; identical for every partition count."""

    def part(a, b):
        blocks = []
        for start, stop, _ in iter_ranges(a, b, chunk):
            t = compute_range(sieve, start, stop)
            cols = zip(
                t.n.tolist(), t.omega.tolist(), t.big_omega.tolist(), t.E.tolist(), t.H.tolist(),
                t.codes(PLANAR), t.codes(NONPLANAR),
            )
            blocks.append("".join(f"{n},{w},{W},{e},{h},{p},{q}\n" for n, w, W, e, h, p, q in cols))
        return "".join(blocks)

    return "".join(map_partitions(part, lo, hi, partitions))


def cmd_scan(args, cfg, out):
    if args.lo < 1 or args.hi < args.lo:
        raise UsageError(f"scan needs 1 <= --from <= --to, got {args.lo}, {args.hi}")
    sieve = _sieve(cfg, args.hi)
    body = CSV_HEADER + "\n" + scan_rows(sieve, args.lo, args.hi, cfg.partitions)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(body)
    else:
        out.write(body)
    return EXIT_OK


def _int_list(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {s!r}") from exc


def cmd_find(args, cfg, out):
    ns = _int_list(args.pattern)
    sieve = _sieve(cfg, max([args.limit] + ns))
    p = pattern_from_integers(ns, args.flavor, sieve)
    rep = find_occurrences(p, args.limit, sieve, partitions=cfg.partitions)
    d = rep.to_dict(args.max_positions)
    text = f"{rep.status} search_limit={rep.search_limit} count={rep.count}\n" + " ".join(
        map(str, d["positions"]))
    _emit(d, cfg, out, text)
    return EXIT_OK


def cmd_kappa(args, cfg, out):
    sieve = _sieve(cfg, args.limit)
    d = {"n": args.n, "statistic": args.stat, "search_limit": args.limit}
    try:
        k = kappa_bounded(args.n, args.limit, args.stat, sieve)
    except Undecided as exc:
        d.update(status="UNDECIDED", kappa_lower_bound=exc.best_k, message=str(exc))
        _emit(d, cfg, out, f"UNDECIDED search_limit={args.limit} best_k={exc.best_k}")
        return EXIT_UNDECIDED
    d.update(status="DECIDED", kappa=k)
    _emit(d, cfg, out, f"kappa({args.n}) = {k} (window unique up to {args.limit})")
    return EXIT_OK


def cmd_runs(args, cfg, out):
    if args.min_k < 1:
        raise UsageError("--min-k must be >= 1")
    sieve = _sieve(cfg, args.limit + args.min_k)
    hits = []
    for start, stop, ext in iter_ranges(2, args.limit + 1, DEFAULT_CHUNK, args.min_k - 1):
        t = compute_range(sieve, start, min(ext, args.limit + args.min_k))
        r = run_lengths(t.values(args.flavor))[: stop - start + 1]
        hits.append(np.flatnonzero(r >= args.min_k) + start - 1)
    pos = np.concatenate(hits).tolist() if hits else []
    d = {
        "status": "COMPUTED", "search_limit": args.limit, "flavor": args.flavor,
        "min_k": args.min_k, "count": len(pos), "positions": pos[: args.max_positions],
    }
    _emit(d, cfg, out, f"count={len(pos)} search_limit={args.limit}\n" + "\n".join(map(str, d["positions"])))
    return EXIT_OK


def cmd_aseq(args, cfg, out):
    sieve = _sieve(cfg, args.limit + args.max_index - 1)
    vals = a_sequence(args.max_index, args.limit, sieve, partitions=cfg.partitions)
    status = "COMPLETE" if all(v is not None for v in vals.values()) else "PARTIAL"
    d = {"status": status, "search_limit": args.limit, "values": {str(i): v for i, v in vals.items()}}
    text = "\n".join(f"a_{i} = {'absent' if v is None else v}" for i, v in vals.items())
    _emit(d, cfg, out, text)
    return EXIT_OK


def cmd_census(args, cfg, out):
    fn, x = args.fn, args.x
    need = {"J": x + args.k, "V": x + args.k, "K": x + args.g, "S": x + args.y}.get(fn, x)
    sieve = _sieve(cfg, need)
    d = {"fn": fn, "x": x, "search_limit": need}
    if fn == "F":
        d["value"] = analytics.F_sum(x, sieve, cfg.partitions)
    elif fn == "J":
        d.update(k=args.k, value=analytics.J_count(x, args.k, sieve), threshold=analytics.edge_threshold(x))
        d["ratio"] = d["value"] / x
    elif fn == "S":
        d.update(y=args.y, l=args.l, value=analytics.height_tail(x, args.y, args.l, sieve))
    elif fn == "K":
        d.update(g=args.g, flavor=args.flavor, value=analytics.big_run_census(x, args.g, args.flavor, sieve))
    elif fn == "V":
        d.update(k=args.k, a=args.a, value=analytics.smooth_omega_census(x, args.k, args.a, sieve))
    elif fn == "edge-tail":
        v = analytics.edge_tail(x, sieve)
        d.update(value=v, threshold=analytics.edge_threshold(x), ratio=analytics.edge_tail_ratio(x, v))
    else:
        v = analytics.height_tail_global(x, args.k, sieve)
        d.update(k=args.k, value=v)
        if 0 <= args.k <= 4:
            d["ratio"] = v * tetration2(args.k) / x
    d["status"] = "COMPUTED"
    _emit(d, cfg, out, f"{fn}({x}) = {d['value']}")
    return EXIT_OK


def cmd_monitor(args, cfg, out):
    b, lim = args.bound, args.limit
    if b == "rho":
        rep = analytics.rho_monitor(lim)
    elif b == "run":
        rep = analytics.run_bound_monitor(lim, _sieve(cfg, lim + 64))
    elif b == "eps":
        rep = analytics.eps_monitor(lim, _sieve(cfg, lim + 64))
    elif b == "height":
        xs = [x for x in (10**4, 10**5, 10**6, 10**7) if x <= lim] or [lim]
        rep = analytics.height_monitor(_sieve(cfg, lim), xs=xs)
    else:
        rep = analytics.residual_monitor(_sieve(cfg, lim), fit_at=lim)
    d = rep.to_dict()
    d.update(status="PASS" if rep.passed else "FAIL", search_limit=lim)
    _emit(d, cfg, out, f"{rep.bound_id}: max ratio {rep.observed_max_ratio:.6g} at n={rep.witness_n} "
                       f"({'pass' if rep.passed else 'FAIL'} vs {rep.threshold})")
    return EXIT_OK if rep.passed else EXIT_ERROR


def cmd_realize(args, cfg, out):
    shape = decode(args.shape)
    tower = realize_in_progression(shape, args.a, args.q)
    problems = validate_realization(tower, shape, args.a, args.q)
    value = expand_tower(tower, args.cap_bits)
    d = {
        "labels": tower.to_lists(),
        "value": None if value is None else str(value),
        "a": args.a,
        "q": args.q,
        "valid": not problems,
        "status": "COMPUTED" if not problems else "INVALID",
        "search_limit": None,
    }
    _emit(d, cfg, out, f"labels {json.dumps(d['labels'])}\nvalue  {d['value']}")
    return EXIT_OK if not problems else EXIT_ERROR


def cmd_words(args, cfg, out):
    n, delta = word_overlap_decompose(args.alpha, args.beta, args.gamma)
    _emit({"n": n, "delta": delta, "status": "COMPUTED", "search_limit": None}, cfg, out, f"n={n} delta={delta!r}")
    return EXIT_OK


COMMANDS = {
    "tree": cmd_tree, "scan": cmd_scan, "find": cmd_find, "kappa": cmd_kappa, "runs": cmd_runs,
    "aseq": cmd_aseq, "census": cmd_census, "monitor": cmd_monitor, "realize": cmd_realize,
    "words": cmd_words,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(out)
            return EXIT_ERROR
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=err)
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except Undecided as exc:
        err.write(f"ptl: undecided: {exc}\n")
        return EXIT_UNDECIDED
    except (PrimeTowerError, OSError) as exc:
        err.write(f"ptl: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
