"""Command-line interface: index sweeps, verification suites and partition tables."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from filelock import FileLock

from . import nilpotency as nil
from . import partitions as part
from . import suites
from .basis import DEFAULT_SLACK
from .errors import BoundViolated, CeilingExceeded, HypothesisError, ResidualNonzero
from .reports import NilpotencyReport, sanitize

log = logging.getLogger("heckenil")

CACHE_VERSION = 1
CSV_HEADER = ["p", "ell", "space", "k", "index", "bound", "slack_observed"]
THEOREM_SUITES = {"thm1_3", "prop1_5", "thm1_6", "thm1_8", "basis", "crossover", "oracles"}
CONJECTURE_SUITES = {"table2", "conj1_7", "mod7", "mod3_level4"}
SUITES = sorted(THEOREM_SUITES | CONJECTURE_SUITES)


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_int_list(text: str | None) -> list:
    """'1..100', '1,5,7', '3' or a mix such as '1..10,20'; empty gives []."""
    if text is None or not text.strip():
        return []
    out = []
    for part_ in text.split(","):
        part_ = part_.strip()
        if not part_:
            continue
        if ".." in part_:
            lo, hi = part_.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part_))
    return out


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    ell: list = field(default_factory=list)
    ks: list = field(default_factory=list)
    space: str = "delta"
    precision: int | None = None
    slack: int = DEFAULT_SLACK
    fmt: str = "csv"
    cache: str | None = None
    workers: int = 1
    seed: int = 0

    def validate(self):
        if self.command == "index":
            if self.p is None or len(self.ell) != 1:
                raise HypothesisError("index needs --p and a single --ell")
            nil.check_admissible(self.p, self.ell[0], self.space)
        if self.workers < 1:
            raise HypothesisError("--workers must be positive")
        if self.slack < 0:
            raise HypothesisError("--slack must be nonnegative")


# ---------------------------------------------------------------------------
# result cache


class ResultCache:
    """Append-only JSON-lines store of nilpotency reports."""

    def __init__(self, path: str):
        self.path = path
        self.lock = FileLock(path + ".lock")
        self.records = {}
        if os.path.exists(path):
            with self.lock, open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    if rec.get("v") != CACHE_VERSION:
                        continue
                    rep = NilpotencyReport.from_dict(rec["report"])
                    self.records[rep.key()] = rep

    def get(self, key):
        return self.records.get(key)

    def append(self, reports):
        if not reports:
            return
        with self.lock, open(self.path, "a", encoding="utf-8") as fh:
            for rep in reports:
                fh.write(json.dumps({"v": CACHE_VERSION, "report": sanitize(rep.to_dict())},
                                    sort_keys=True) + "\n")
                self.records[rep.key()] = rep


# ---------------------------------------------------------------------------
# index sweeps


def _sweep_chunk(args):
    ks, p, ell, space, slack = args
    return [r.to_dict() for r in nil.index_sweep(ks, p, ell, space, slack=slack)]


def run_sweep(ks, p, ell, space, slack, workers) -> list:
    ks = sorted(set(ks))
    if not ks:
        return []
    if workers == 1 or len(ks) < 2 * workers:
        return nil.index_sweep(ks, p, ell, space, slack=slack)
    # interleave so every chunk needs a matrix of similar size
    chunks = [ks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_sweep_chunk, [(c, p, ell, space, slack) for c in chunks if c])
        out = [NilpotencyReport.from_dict(d) for chunk in parts for d in chunk]
    return sorted(out, key=lambda r: r.k)


def _resolved_bound(p, ell, space, k, index_of):
    if p == 2:
        return nil.ns_formula(k) if k % 2 else None
    sp = "d2" if space in ("f", "d2") else "delta"
    cands = []
    lin = nil.linear_bound(p, ell, k, sp)
    if lin is not None:
        cands.append(lin)
    for rsp, rk in nil.reductions(p, k, sp):
        cands.append(index_of(rsp, rk))
    return min(cands) if cands else None


def index_rows(cfg: RunConfig) -> list:
    p, ell, space = cfg.p, cfg.ell[0], cfg.space
    ks = cfg.ks
    if space in ("f", "d2"):
        ks = [k for k in ks if math.gcd(k, 6) == 1]
    ks = sorted(set(ks))
    if ks and ks[0] < 1:
        raise HypothesisError("k must be positive")
    cache = ResultCache(cfg.cache) if cfg.cache else None
    sp = "d2" if space in ("f", "d2") else "delta"

    need = set((space, k) for k in ks)
    if p != 2:
        for k in ks:
            need.update(nil.reductions(p, k, sp))
    found = {}
    missing = {}
    for s, k in need:
        rep = cache.get((p, ell, s, k, cfg.slack)) if cache else None
        if rep is not None:
            found[(s, k)] = rep
        else:
            missing.setdefault(s, []).append(k)
    fresh = []
    for s, kk in sorted(missing.items()):
        fresh.extend(run_sweep(kk, p, ell, s, cfg.slack, cfg.workers))
    for rep in fresh:
        found[(rep.space, rep.k)] = rep
    if cache:
        cache.append(sorted(fresh, key=lambda r: (r.space, r.k)))

    rows = []
    for k in ks:
        rep = found[(space, k)]
        bound = _resolved_bound(p, ell, space, k, lambda s, kk: found[(s, kk)].index)
        rows.append({
            "p": p, "ell": ell, "space": space, "k": k, "index": rep.index,
            "bound": bound, "slack_observed": None if bound is None else bound - rep.index,
            "trajectory": rep.trajectory,
        })
    return rows


def format_rows(rows, fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(sanitize(r), sort_keys=True) + "\n" for r in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(["" if r[c] is None else r[c] for c in CSV_HEADER])
    return buf.getvalue()


def parse_csv_rows(text: str) -> list:
    """Inverse of the CSV format (without trajectories)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for c in CSV_HEADER:
            v = rec[c]
            row[c] = v if c == "space" else (None if v == "" else int(v))
        out.append(row)
    return out


def cmd_index(cfg: RunConfig, out) -> int:
    cfg.validate()
    rows = index_rows(cfg)
    out.write(format_rows(rows, cfg.fmt))
    bad = [r for r in rows if r["bound"] is not None and r["index"] > r["bound"]]
    if bad:
        log.error("index exceeds bound at k=%s", [r["k"] for r in bad])
        return 1
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _suite_reports(args) -> list:
    s = args.suite
    ells = parse_int_list(args.ell)
    if s == "thm1_3":
        p = args.p or 5
        ells = ells or {3: [2, 5, 7, 13], 5: [11, 19, 29, 31], 7: [13, 29, 41, 43]}.get(p, [])
        space = args.space
        ks = list(range(1, args.kmax + 1))
        if space in ("f", "d2"):
            ks = [k for k in ks if math.gcd(k, 6) == 1]
        reps = []
        for ell in ells:
            reps += nil.verify_thm13(ks, p, ell, space, slack=args.slack)
        return reps
    if s == "table2":
        return [nil.verify_table2(args.kmax, args.slack)]
    if s == "conj1_7":
        return nil.verify_conjectures(args.kmax, "S19_PRIME", args.slack)
    if s == "mod7":
        return nil.verify_conjectures(args.kmax, "S29_DOUBLE", args.slack)
    if s == "mod3_level4":
        reps = []
        for ell in ells or [7, 11]:
            reps += nil.verify_conjectures(args.kmax, f"S_TRIPLE_{ell}", args.slack)
        return reps
    if s == "crossover":
        return [nil.crossover_check()]
    if s == "prop1_5":
        ms = parse_int_list(args.m) or [1]
        return [part.check_prop15(args.case, args.p, ells[0], m, args.precision or 10_000, f=args.f)
                for m in ms]
    if s == "thm1_6":
        ell = ells if len(ells) > 1 else ells[0]
        return [part.check_thm16(args.p, args.t, args.variant, ell, args.r, args.n_max)]
    if s == "thm1_8":
        ell = ells if len(ells) > 1 else ells[0]
        return [part.check_thm18(args.r, args.variant, ell, args.j, args.n_max)]
    if s == "basis":
        return suites.basis_suite(args.seed)
    if s == "oracles":
        return suites.oracle_suite(args.seed)
    raise ValueError(f"unknown suite {s!r}")


def cmd_verify(args, out) -> int:
    reps = _suite_reports(args)
    failed = [r for r in reps if not r.passed]
    if args.format == "json":
        for r in reps:
            out.write(r.to_json() + "\n")
    else:
        for r in reps:
            out.write(r.summary() + "\n")
            for w in r.failures[:10]:
                out.write(f"  witness {json.dumps(sanitize(w), sort_keys=True)}\n")
    if not failed:
        return 0
    if args.suite in CONJECTURE_SUITES:
        log.warning("%d conjecture checks reported mismatches", len(failed))
        return 0
    return 1


# ---------------------------------------------------------------------------
# partition tables


def cmd_partition(args, out) -> int:
    mod = None if args.exact else args.mod
    if not args.exact and mod is None:
        raise HypothesisError("pass --mod P or --exact")
    if args.kind == "tcore" and args.exact and args.max_n > 5000:
        raise HypothesisError("exact t-core counts are limited to --max-n 5000")
    rows = part.partition_table(args.kind, args.max_n, mod, t=args.t, r=args.r, exact=args.exact)
    if args.brute:
        if args.kind != "tcore":
            raise HypothesisError("--brute applies to t-core counts")
        rows = [(n, v, part.brute_force_tcore(args.t, n)) for n, v in rows]
    if args.format == "json":
        keys = ("n", "value", "brute")
        for row in rows:
            out.write(json.dumps(dict(zip(keys, row))) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "value"] + (["brute"] if args.brute else []))
        w.writerows(rows)
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heckenil", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--slack", type=int, default=DEFAULT_SLACK)
        sp.add_argument("--precision", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--cache", default=None)

    ix = sub.add_parser("index", help="nilpotency indices for a range of k")
    ix.add_argument("--p", type=int, required=True)
    ix.add_argument("--ell", required=True)
    ix.add_argument("--k", default="", help="'1..100' or '1,5,7'")
    ix.add_argument("--space", choices=nil.SPACES, default="delta")
    common(ix)

    vf = sub.add_parser("verify", help="run a verification suite")
    vf.add_argument("--suite", choices=SUITES, required=True)
    vf.add_argument("--p", type=int, default=None)
    vf.add_argument("--ell", default="")
    vf.add_argument("--kmax", type=int, default=500)
    vf.add_argument("--space", choices=nil.SPACES, default="delta")
    vf.add_argument("--case", default="1a")
    vf.add_argument("--m", default="1")
    vf.add_argument("--f", default=None, help="Delta or D3 for part 2 of the vanishing suite")
    vf.add_argument("--t", type=int, default=1)
    vf.add_argument("--r", type=int, default=1)
    vf.add_argument("--j", type=int, default=1)
    vf.add_argument("--variant", type=int, default=1)
    vf.add_argument("--n-max", type=int, default=1000)
    common(vf)

    pt = sub.add_parser("partition", help="t-core and p_r coefficient tables")
    pt.add_argument("--kind", choices=("tcore", "power"), required=True)
    pt.add_argument("--t", type=int, default=None)
    pt.add_argument("--r", type=int, default=None)
    pt.add_argument("--mod", type=int, default=None)
    pt.add_argument("--exact", action="store_true")
    pt.add_argument("--brute", action="store_true", help="add the hook-length count (n <= 40)")
    pt.add_argument("--max-n", type=int, default=100)
    common(pt)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "index":
            cfg = RunConfig(
                "index", p=args.p, ell=parse_int_list(args.ell), ks=parse_int_list(args.k),
                space=args.space, precision=args.precision, slack=args.slack, fmt=args.format,
                cache=args.cache, workers=args.workers, seed=args.seed,
            )
            return cmd_index(cfg, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        return cmd_partition(args, out)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BoundViolated, ResidualNonzero, CeilingExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
