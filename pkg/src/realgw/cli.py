"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error.  The cache path
comes from ``--cache`` or, failing that, the ``RGW_CACHE`` environment
variable; computing commands load it first and write it back afterwards.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, List, Optional, Sequence, Tuple

from .complex_engine import complex_invariant
from .core import CacheFormatError, ComplexKey, MemoStore, RealKey, cache_export, cache_import
from .gluing import InconclusiveError, sign_grid
from .real_engine import real_bracket, sign_factor
from .verifier import run_verification_suite

CACHE_ENV = "RGW_CACHE"
DEFAULT_K_MAX = 10


@dataclass
class InvariantRecord:
    kind: str
    target: int                 # m for complex records, n for real ones
    d: int
    insertions: Tuple[int, ...]
    bracket: int
    involution: Optional[str] = None
    N: Optional[int] = None

    def to_dict(self) -> dict:
        if self.kind == "complex":
            return {"kind": "complex", "m": self.target, "d": self.d,
                    "insertions": list(self.insertions), "value": self.bracket}
        return {"kind": "real", "n": self.target, "d": self.d, "involution": self.involution,
                "insertions": list(self.insertions), "bracket": self.bracket, "N": self.N}

    def to_human(self) -> str:
        ins = ",".join(map(str, self.insertions))
        if self.kind == "complex":
            return f"P^{self.target} d={self.d} <{ins}> = {self.bracket}"
        return (f"P^{2 * self.target - 1} d={self.d} {self.involution} <{ins}> "
                f"bracket = {self.bracket}  N = {self.N}")


def _insertions(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"insertions must be comma-separated integers: {text!r}")
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("insertions must be >= 0")
    return tuple(sorted(values, reverse=True))


def table_keys(n: int, d_max: int, k_max: int = DEFAULT_K_MAX,
               involution: str = "tau") -> Iterator[RealKey]:
    """Dimension-valid all-odd keys, ordered by d, then k, then insertions."""
    odd = list(range(1, 2 * n, 2))
    for d in range(1, d_max + 1, 2):
        for k in range(1, k_max + 1):
            target = n * (d + 1) - 2 + k
            found = [c for c in combinations_with_replacement(reversed(odd), k)
                     if sum(c) == target]
            for ins in sorted(found):
                yield RealKey(n, d, involution, ins)


def real_record(key: RealKey, store: MemoStore) -> InvariantRecord:
    bracket = real_bracket(key, store)
    count = sign_factor(key.n, key.d) * bracket if key.d % 2 else 0
    return InvariantRecord("real", key.n, key.d, key.insertions, bracket, key.involution, count)


def build_table(n: int, d_max: int, k_max: int = DEFAULT_K_MAX, involution: str = "tau",
                store: Optional[MemoStore] = None) -> List[InvariantRecord]:
    store = store if store is not None else MemoStore()
    return [real_record(key, store) for key in table_keys(n, d_max, k_max, involution)]


def render_table(records: Sequence[InvariantRecord], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "d", "involution", "insertions", "bracket", "N"])
        for r in records:
            writer.writerow([r.target, r.d, r.involution, ",".join(map(str, r.insertions)),
                             r.bracket, r.N])
        return buf.getvalue()
    rows = [("d", "k", "insertions", "bracket", "N")]
    rows += [(str(r.d), str(len(r.insertions)), ",".join(map(str, r.insertions)),
              str(r.bracket), str(r.N)) for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() + "\n"
                   for row in rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realgw",
        description="Exact complex and real genus-0 Gromov-Witten invariants of projective spaces.")
    parser.add_argument("--cache", default=None,
                        help=f"cache file to load and update (default: ${CACHE_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", help="complex invariant <c_1,...,c_k>_d of P^m")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-c", type=_insertions, default=(), help="comma-separated codimensions")
    p.add_argument("--format", choices=("human", "json"), default="human")

    p = sub.add_parser("real", help="real invariant of P^(2n-1)")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--phi", choices=("tau", "eta"), default="tau")
    p.add_argument("-c", type=_insertions, default=(), help="comma-separated codimensions")
    p.add_argument("--format", choices=("human", "json"), default="human")

    p = sub.add_parser("table", help="all nonvanishing-candidate real invariants up to a degree")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX,
                   help=f"largest number of insertions (default {DEFAULT_K_MAX})")
    p.add_argument("--phi", choices=("tau", "eta"), default="tau")
    p.add_argument("--format", choices=("human", "csv", "jsonl"), default="human")

    p = sub.add_parser("verify", help="run the identity suites")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--d-max", type=int, default=5)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("signcheck", help="orientation sign of the gluing map")
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--d1-max", type=int, default=2)
    p.add_argument("--d2-max", type=int, default=3)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cache", help="import or export cache files")
    p.add_argument("action", choices=("export", "import"))
    p.add_argument("path")
    return parser


def _load_store(path: Optional[str]) -> MemoStore:
    if path and os.path.exists(path):
        return cache_import(path)
    return MemoStore()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache_path = args.cache or os.environ.get(CACHE_ENV) or None
    out = sys.stdout
    try:
        store = _load_store(cache_path)
    except CacheFormatError as exc:
        parser.error(f"cannot read cache {cache_path}: {exc}")

    status = 0
    try:
        if args.command == "complex":
            key = ComplexKey(args.m, args.d, args.c)
            record = InvariantRecord("complex", key.m, key.d, key.insertions,
                                     complex_invariant(key, store))
            out.write((json.dumps(record.to_dict(), sort_keys=True) if args.format == "json"
                       else record.to_human()) + "\n")
        elif args.command == "real":
            record = real_record(RealKey(args.n, args.d, args.phi, args.c), store)
            out.write((json.dumps(record.to_dict(), sort_keys=True) if args.format == "json"
                       else record.to_human()) + "\n")
        elif args.command == "table":
            if args.n < 1 or args.k_max < 0:
                parser.error("table needs n >= 1 and k-max >= 0")
            out.write(render_table(build_table(args.n, args.d_max, args.k_max, args.phi, store),
                                   args.format))
        elif args.command == "verify":
            report = run_verification_suite(args.n_max, args.d_max, args.k_max, args.samples,
                                            args.seed, n_min=args.n_min)
            out.write((report.to_json() if args.json else report.to_text()) + "\n")
            status = 0 if report.passed else 1
        elif args.command == "signcheck":
            try:
                grid = sign_grid(args.n_max, args.d1_max, args.d2_max, args.samples, args.seed)
            except InconclusiveError as exc:
                print(f"inconclusive: {exc}", file=sys.stderr)
                return 1
            out.write((json.dumps(grid.to_dict(), sort_keys=True) if args.json
                       else grid.to_text()) + "\n")
            status = 0 if grid.passed else 1
        elif args.command == "cache":
            if args.action == "export":
                cache_export(store, args.path)
                return 0
            if not cache_path:
                parser.error(f"cache import needs --cache or ${CACHE_ENV}")
            try:
                cache_import(args.path, store)
            except (CacheFormatError, OSError) as exc:
                print(f"import failed: {exc}", file=sys.stderr)
                return 2
    except ValueError as exc:
        parser.error(str(exc))

    if cache_path:
        cache_export(store, cache_path)
    return status


if __name__ == "__main__":
    sys.exit(main())
