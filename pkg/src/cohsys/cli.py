"""cohsys command line.

    cohsys classify 6 7 4
    cohsys sweep --n 2:6 --a 2:3 --t all --k n:a*n-1 --format csv
    cohsys certify 5 7 9 empty
    cohsys sample 2 3 3 9/10 --budget 1000 --seed 1
    cohsys extdim 1 1 2 1 2 0
    cohsys beta 6 7 4
    cohsys conjectures 5 6 8

Exit codes: classify returns 0 on EXACT/EMPTY_ALL, 10 on PARTIAL, 11 on
UNKNOWN; certify returns 0 on success, 1 on failure; malformed input is 2.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import operator
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import certify as cert
from . import knowledge as kn
from . import lab
from .core import SystemType, alpha_c, beta, c21, decompose, ext1_dim, fmt_ext, parse_rat

CSV_COLUMNS = (
    "n", "d", "k", "a", "t", "l", "m", "beta", "alpha_c",
    "status", "lo", "hi", "citations", "flags",
)
MODES = ("classify", "certify", "conjectures")
EXIT_CODES = {
    kn.Status.EXACT: 0,
    kn.Status.EMPTY_ALL: 0,
    kn.Status.PARTIAL: 10,
    kn.Status.UNKNOWN: 11,
}
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


# ------------------------------------------------------------ records

@dataclass(frozen=True)
class ResultRecord:
    """One classified lattice point. Rationals are kept as their exact
    strings ("5/4", "inf"); empty string means undefined."""

    n: int
    d: int
    k: int
    a: int
    t: int
    l: Optional[int]
    m: Optional[int]
    beta: int
    alpha_c: str
    status: str
    lo: str
    hi: str
    citations: Tuple[str, ...] = ()
    flags: Tuple[str, ...] = ()

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.n, self.d, self.k)

    def to_json_obj(self) -> dict:
        out = asdict(self)
        out["citations"] = list(self.citations)
        out["flags"] = list(self.flags)
        return out

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ResultRecord":
        vals = {c: obj[c] for c in CSV_COLUMNS}
        vals["citations"] = tuple(vals["citations"])
        vals["flags"] = tuple(vals["flags"])
        return cls(**vals)

    def to_csv_row(self) -> List[str]:
        row = []
        for c in CSV_COLUMNS:
            v = getattr(self, c)
            if isinstance(v, tuple):
                row.append(";".join(v))
            elif v is None:
                row.append("")
            else:
                row.append(str(v))
        return row

    @classmethod
    def from_csv_row(cls, row: Dict[str, str]) -> "ResultRecord":
        def opt(s):
            return int(s) if s != "" else None

        def tup(s):
            return tuple(s.split(";")) if s else ()

        return cls(
            int(row["n"]), int(row["d"]), int(row["k"]), int(row["a"]), int(row["t"]),
            opt(row["l"]), opt(row["m"]), int(row["beta"]), row["alpha_c"],
            row["status"], row["lo"], row["hi"], tup(row["citations"]), tup(row["flags"]),
        )


def _alpha_c_str(st: SystemType) -> str:
    try:
        return fmt_ext(alpha_c(st))
    except ValueError:
        return ""


def _endpoints(know: kn.AlphaKnowledge) -> Tuple[str, str]:
    # EXACT: the interval; PARTIAL: the certified nonempty hull
    iv = know.interval or know.nonempty_hull
    if iv is None or know.status is kn.Status.EMPTY_ALL:
        return "", ""
    return fmt_ext(iv.lo), fmt_ext(iv.hi)


def _mode_flags(st: SystemType, know: kn.AlphaKnowledge, mode: str) -> Tuple[str, ...]:
    if mode == "conjectures":
        try:
            return kn.conjecture_scan(st).flags
        except ValueError:
            return ()
    if mode == "certify":
        flags = []
        try:
            if cert.certify_large_alpha(st).ok:
                flags.append("large_alpha_certified")
        except ValueError:
            pass
        ce = cert.certify_empty(st)
        if ce.ok:
            flags.append(f"empty_certified:{ce.citation}")
        return tuple(flags)
    return ()


def make_record(n: int, d: int, k: int, mode: str = "classify") -> ResultRecord:
    st = SystemType(n, d, k)
    know = kn.classify(st)
    a, t = decompose(n, d)
    l, m = st.lm if st.lm is not None else (None, None)
    lo, hi = _endpoints(know)
    return ResultRecord(
        n, d, k, a, t, l, m, beta(st), _alpha_c_str(st), know.status.value, lo, hi,
        tuple(know.citations), _mode_flags(st, know, mode),
    )


def _record_task(args) -> ResultRecord:
    return make_record(*args)


# ----------------------------------------------------------- output

def render(records: Sequence[ResultRecord], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_json_obj() for r in records], indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.to_csv_row())
        return buf.getvalue()
    if fmt == "table":
        rows = [list(CSV_COLUMNS)] + [r.to_csv_row() for r in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_COLUMNS))]
        return "".join(
            "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n"
            for row in rows
        )
    raise UsageError(f"unknown format {fmt!r}")


def parse_records(text: str, fmt: str) -> List[ResultRecord]:
    if fmt == "json":
        return [ResultRecord.from_json_obj(o) for o in json.loads(text)]
    if fmt == "csv":
        return [ResultRecord.from_csv_row(r) for r in csv.DictReader(io.StringIO(text))]
    raise UsageError(f"cannot parse format {fmt!r}")


# ------------------------------------------------------------- sweep

_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
}


def eval_bound(expr: str, env: Dict[str, int]) -> int:
    """Integer arithmetic over the sweep variables (+, -, *, //)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise UsageError(f"unknown variable {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise UsageError(f"unsupported expression {expr!r}")

    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"bad expression {expr!r}") from exc
    return ev(tree)


def eval_range(spec: str, env: Dict[str, int]) -> range:
    """'lo:hi' (inclusive) or a single expression."""
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return range(eval_bound(lo, env), eval_bound(hi, env) + 1)
    v = eval_bound(spec, env)
    return range(v, v + 1)


@dataclass
class SweepSpec:
    n: str
    k: str
    d: Optional[str] = None
    a: Optional[str] = None
    t: Optional[str] = None
    mode: str = "classify"
    fmt: str = "csv"
    cache: Optional[Path] = None
    jobs: int = 1
    out: Optional[Path] = None

    def __post_init__(self):
        if (self.d is None) == (self.a is None):
            raise UsageError("give exactly one of --d or --a")
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")

    def points(self) -> List[Tuple[int, int, int]]:
        seen = set()
        for n in eval_range(self.n, {}):
            if n < 1:
                continue
            env = {"n": n}
            if self.d is not None:
                pairs = [(d, *decompose(n, d)) for d in eval_range(self.d, env)]
            else:
                pairs = []
                for a in eval_range(self.a, env):
                    env_a = {"n": n, "a": a}
                    ts = range(0, n) if self.t in (None, "all") else eval_range(self.t, env_a)
                    pairs += [(a * n - t, a, t) for t in ts if 0 <= t < n]
            for d, a, t in pairs:
                for k in eval_range(self.k, {"n": n, "d": d, "a": a, "t": t}):
                    if k >= 1:
                        seen.add((n, d, k))
        if not seen:
            raise UsageError("sweep ranges are empty")
        return sorted(seen)


class SweepCache:
    """JSON-lines cache; the first line carries the engine version and a
    mismatch discards the whole file."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.records: Dict[Tuple[str, int, int, int], ResultRecord] = {}
        self._load()

    def _header(self) -> dict:
        return {"cohsys_cache": 1, "engine_version": kn.ENGINE_VERSION}

    def _load(self):
        if not self.path.exists():
            return
        lines = self.path.read_text(encoding="utf-8").splitlines()
        if not lines or json.loads(lines[0]) != self._header():
            return
        for line in lines[1:]:
            if line.strip():
                obj = json.loads(line)
                self.records[(obj["mode"], obj["n"], obj["d"], obj["k"])] = \
                    ResultRecord.from_json_obj(obj)

    def get(self, mode: str, key) -> Optional[ResultRecord]:
        return self.records.get((mode, *key))

    def put(self, mode: str, rec: ResultRecord):
        self.records[(mode, *rec.key)] = rec

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        lines = [json.dumps(self._header(), sort_keys=True)]
        for (mode, *_), rec in sorted(self.records.items()):
            lines.append(json.dumps({"mode": mode, **rec.to_json_obj()}, sort_keys=True))
        self.path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_sweep(spec: SweepSpec) -> Tuple[List[ResultRecord], Dict[str, int], int]:
    """Returns (records sorted by (n,d,k), status counts, cache hits)."""
    points = spec.points()
    cache = SweepCache(spec.cache) if spec.cache else None
    done: Dict[Tuple[int, int, int], ResultRecord] = {}
    todo = []
    for p in points:
        hit = cache.get(spec.mode, p) if cache else None
        if hit is not None:
            done[p] = hit
        else:
            todo.append(p)
    hits = len(done)
    tasks = [(*p, spec.mode) for p in todo]
    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            fresh = list(pool.map(_record_task, tasks, chunksize=max(1, len(tasks) // (4 * spec.jobs))))
    else:
        fresh = [_record_task(tk) for tk in tasks]
    for rec in fresh:
        done[rec.key] = rec
        if cache:
            cache.put(spec.mode, rec)
    if cache and fresh:
        cache.save()
    records = [done[p] for p in points]
    counts: Dict[str, int] = {s.value: 0 for s in kn.Status}
    for r in records:
        counts[r.status] += 1
    return records, counts, hits


# ------------------------------------------------------------ commands

def _write(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_classify(args) -> int:
    rec = make_record(args.n, args.d, args.k)
    _write(render([rec], args.format), None)
    if args.explain:
        for ev in kn.classify(SystemType(args.n, args.d, args.k)).evidence:
            print(f"  {ev}", file=sys.stderr)
    return EXIT_CODES[kn.Status(rec.status)]


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        n=args.n, k=args.k, d=args.d, a=args.a, t=args.t, mode=args.mode,
        fmt=args.format, cache=args.cache, jobs=args.jobs, out=args.out,
    )
    records, counts, hits = run_sweep(spec)
    try:
        _write(render(records, spec.fmt), spec.out)
    except OSError as exc:
        print(f"error: cannot write {spec.out}: {exc}", file=sys.stderr)
        return 1
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    print(f"summary: points={len(records)} cached={hits} {summary}", file=sys.stderr)
    return 0


def cmd_certify(args) -> int:
    st = SystemType(args.n, args.d, args.k)
    if args.which == "large-alpha":
        c = cert.certify_large_alpha(st)
    else:
        c = cert.certify_empty(st)
    print(json.dumps(c.to_dict(), indent=1))
    return 0 if c.ok else 1


def cmd_sample(args) -> int:
    alpha = parse_rat(args.alpha)
    if alpha <= 0:
        raise UsageError("alpha must be positive")
    budget = args.budget_pos if args.budget_pos is not None else args.budget
    seed = args.seed_pos if args.seed_pos is not None else args.seed
    if args.construct == "quotient":
        system = lab.quotient_construct(args.n, args.d, args.k, seed)
    else:
        system = lab.sample_system(args.n, args.d, args.k, seed)
    report = lab.violation_search(system, alpha, budget, seed, exact=args.exact)
    print(json.dumps(report.to_dict(), indent=1, sort_keys=True))
    return 0


def cmd_extdim(args) -> int:
    t2 = (args.n2, args.d2, args.k2)
    t1 = (args.n1, args.d1, args.k1)
    out = {"c21": c21(t2, t1), "ext1": ext1_dim(t2, t1, args.hom)}
    print(json.dumps(out))
    return 0


def cmd_beta(args) -> int:
    print(beta(SystemType(args.n, args.d, args.k)))
    return 0


def cmd_conjectures(args) -> int:
    rep = kn.conjecture_scan(SystemType(args.n, args.d, args.k))
    print(json.dumps(rep.to_dict(), indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohsys", description="coherent systems on P^1")
    sub = p.add_subparsers(dest="cmd", required=True)

    def triple(sp):
        sp.add_argument("n", type=int)
        sp.add_argument("d", type=int)
        sp.add_argument("k", type=int)

    fmt = dict(choices=("json", "csv", "table"))

    sp = sub.add_parser("classify", help="decide I(n,d,k)")
    triple(sp)
    sp.add_argument("--format", default="table", **fmt)
    sp.add_argument("--explain", action="store_true", help="list evidence on stderr")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("sweep", help="classify a lattice of types")
    sp.add_argument("--n", required=True, help="range lo:hi, inclusive")
    sp.add_argument("--d", help="range in n")
    sp.add_argument("--a", help="range in n (use with --t)")
    sp.add_argument("--t", default="all", help="range in n, a, or 'all'")
    sp.add_argument("--k", required=True, help="range in n, d, a, t")
    sp.add_argument("--mode", default="classify", choices=MODES)
    sp.add_argument("--format", default="csv", **fmt)
    sp.add_argument("--cache", type=Path)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", type=Path)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("certify", help="parameter-count or Ext certificate")
    triple(sp)
    sp.add_argument("which", choices=("large-alpha", "empty"))
    sp.set_defaults(fn=cmd_certify)

    sp = sub.add_parser("sample", help="Monte-Carlo destabiliser search")
    triple(sp)
    sp.add_argument("alpha", help="exact rational, e.g. 9/10")
    sp.add_argument("budget_pos", nargs="?", type=int, metavar="budget")
    sp.add_argument("seed_pos", nargs="?", type=int, metavar="seed")
    sp.add_argument("--budget", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--exact", action="store_true",
                    help="rational-only linear algebra (slow)")
    sp.add_argument("--construct", choices=("generic", "quotient"), default="generic")
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("extdim", help="C21 and dim Ext^1 between two types")
    for name in ("n2", "d2", "k2", "n1", "d1", "k1"):
        sp.add_argument(name, type=int)
    sp.add_argument("--hom", type=int, default=0, help="dim Hom, if known")
    sp.set_defaults(fn=cmd_extdim)

    sp = sub.add_parser("beta", help="expected dimension")
    triple(sp)
    sp.set_defaults(fn=cmd_beta)

    sp = sub.add_parser("conjectures", help="conjecture scan at one type")
    triple(sp)
    sp.set_defaults(fn=cmd_conjectures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ValueError, TypeError, lab.LabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
