"""Command-line front end.

Subcommands: kl, pkl, sigma0, mseg, expand, verify.  Permutations are
comma-separated one-line notation; bi-sequences are two comma-separated
lists or a JSON object {"a": [...], "b": [...]}.  Polynomial output is
either a human-readable table form like 1+q or the JSON wire form.

The Kazhdan-Lusztig memo table can persist to an append-only JSON-lines
file given by --cache or the KLFORGE_CACHE environment variable; --no-cache
bypasses persistence.  KLFORGE_THREADS (or --threads) sets the verification
work-pool size.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .kl import KLTable, kl_poly, parabolic_kl_neg1, parabolic_kl_q
from .poly import LaurentPoly
from .segcomb import BiSequence, multisegment_of, replicate, sigma0
from .symgroup import NotComparable, Perm
from .transition import transition_matrix
from .verify import summarize, sweep


@dataclass
class Config:
    cache_path: str | None
    output_format: str
    parallelism: int
    kmax: int = 3
    mmax: int = 3

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.cache_path is not None:
            parent = os.path.dirname(os.path.abspath(self.cache_path))
            if not os.path.isdir(parent):
                raise ValueError(f"cache directory {parent} does not exist")
        if self.output_format not in ("table", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def _parse_perm(text: str) -> Perm:
    try:
        word = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a permutation: {text!r}")
    if sorted(word) != list(range(1, len(word) + 1)):
        raise argparse.ArgumentTypeError(
            f"{text!r} is not one-line notation for a permutation")
    return word


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _poly_out(p: LaurentPoly, cfg: Config, var: str) -> str:
    if cfg.output_format == "json":
        return json.dumps(p.to_json(var), sort_keys=True)
    return p.format(var)


def _build_config(args) -> Config:
    cache = None
    if not args.no_cache:
        cache = args.cache or os.environ.get("KLFORGE_CACHE") or None
    threads = args.threads or int(os.environ.get("KLFORGE_THREADS", "1"))
    return Config(cache, args.format, threads,
                  getattr(args, "kmax", 3), getattr(args, "mmax", 3))


def _table(cfg: Config) -> KLTable:
    return KLTable(cfg.cache_path)


def cmd_kl(args) -> int:
    cfg = _build_config(args)
    s, w = args.s, args.w
    if len(s) != len(w):
        print("error: permutations must have the same size", file=sys.stderr)
        return 2
    print(_poly_out(kl_poly(_table(cfg), s, w), cfg, "q"))
    return 0


def cmd_pkl(args) -> int:
    cfg = _build_config(args)
    fn = parabolic_kl_q if args.variant == "q" else parabolic_kl_neg1
    try:
        p = fn(_table(cfg), args.s, args.w, args.m)
    except NotComparable as exc:
        print(f"not comparable: {exc}", file=sys.stderr)
        return 1
    print(_poly_out(p, cfg, "q"))
    return 0


def _bisequence_from_args(args) -> BiSequence:
    if args.family:
        return BiSequence.from_json(json.loads(args.family))
    return BiSequence(args.a, args.b)


def cmd_sigma0(args) -> int:
    cfg = _build_config(args)
    s0 = sigma0(BiSequence(args.a, args.b))
    if cfg.output_format == "json":
        print(json.dumps(list(s0)))
    else:
        print(",".join(map(str, s0)))
    return 0


def cmd_mseg(args) -> int:
    cfg = _build_config(args)
    A = BiSequence(args.a, args.b)
    mseg = multisegment_of(A, args.perm)
    if cfg.output_format == "json":
        print(json.dumps(mseg.to_json(), sort_keys=True))
        return 0
    # construction order a_i, b_{perm(i)}, empty pairs dropped
    parts = []
    for i in range(A.k):
        a, b = A.a[i], A.b[args.perm[i] - 1]
        if a <= b:
            parts.append(f"[{a},{b}]")
    print("+".join(parts) if parts else "0")
    return 0


def cmd_expand(args) -> int:
    cfg = _build_config(args)
    A = _bisequence_from_args(args)
    if args.m > 1:
        A = replicate(A, args.m)
    table = _table(cfg)
    matrix = transition_matrix(table, A, args.direction)
    entries = []
    for (row, col), coeff in sorted(matrix.entries.items()):
        if args.w is not None and col != tuple(args.w):
            continue
        entries.append({"row": list(row), "col": list(col),
                        "coeff": coeff.to_json("v")})
    print(json.dumps({
        "family": A.to_json(),
        "direction": matrix.direction,
        "index": [list(w) for w in matrix.index],
        "entries": entries,
    }, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    cfg = _build_config(args)
    table = _table(cfg)
    reports = sweep(table, cfg.kmax, cfg.mmax, parallelism=cfg.parallelism)
    for rep in reports:
        print(json.dumps(rep.to_json(), sort_keys=True))
    counts = summarize(reports)
    print(f"pass={counts['pass']} fail={counts['fail']} "
          f"skipped={counts['skipped']}", file=sys.stderr)
    return 1 if counts["fail"] else 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", help="path of the persistent memo file")
    p.add_argument("--no-cache", action="store_true",
                   help="never read or write a memo file")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--threads", type=int, default=0,
                   help="work-pool size (default: KLFORGE_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klforge",
        description="Kazhdan-Lusztig combinatorics and verification sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kl", help="ordinary polynomial of a pair")
    p.add_argument("--s", type=_parse_perm, required=True)
    p.add_argument("--w", type=_parse_perm, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("pkl", help="parabolic polynomial of a coset pair")
    p.add_argument("--s", type=_parse_perm, required=True)
    p.add_argument("--w", type=_parse_perm, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--variant", choices=("q", "neg1"), default="q")
    _add_common(p)
    p.set_defaults(func=cmd_pkl)

    p = sub.add_parser("sigma0", help="minimal permutation of a bi-sequence")
    p.add_argument("--a", type=_parse_ints, required=True)
    p.add_argument("--b", type=_parse_ints, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sigma0)

    p = sub.add_parser("mseg", help="family member at a permutation")
    p.add_argument("--a", type=_parse_ints, required=True)
    p.add_argument("--b", type=_parse_ints, required=True)
    p.add_argument("--perm", type=_parse_perm, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_mseg)

    p = sub.add_parser("expand", help="transition matrix of a family")
    p.add_argument("--family", help='bi-sequence JSON {"a": [...], "b": [...]}')
    p.add_argument("--a", type=_parse_ints)
    p.add_argument("--b", type=_parse_ints)
    p.add_argument("--m", type=int, default=1,
                   help="replicate the family this many times")
    p.add_argument("--direction", choices=("e2g", "g2e"), required=True)
    p.add_argument("--w", type=_parse_perm,
                   help="emit only the expansion of this element")
    _add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", help="run the verification sweep")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--mmax", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
