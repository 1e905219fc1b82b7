"""``semicirc`` command line: synth, eval, verify, bench, matmul, graph, graph-eval.

Exit status is 0 on success, 1 on malformed input or a failed check, and 2
on usage errors.  Diagnostics and report lines go to standard error.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .circuit import evaluate, find_mismatch, parse, serialize
from .errors import SemicircError
from .graphs import build_dense_graph_expr, eval_graph_expr, format_graph_expr, parse_graph_expr
from .matrix import parse_matrix
from .permute import seeded_matrix
from .semigroups import CLI_NAMES, get_instance
from .semirings import SEMIRINGS, format_dense, get_semiring, matmul_complement_sparse, parse_dense
from .synth import MODES, SynthParams, synthesize


@dataclass
class BenchRecord:
    n: int
    m: int
    z: int
    mode: str
    wires: int
    gates: int
    short_total: int
    fallback_count: int
    retries: int
    build_millis: float


BENCH_FIELDS = list(BenchRecord.__dataclass_fields__)


class CommandFailed(Exception):
    """Expected failure with a message for standard error (exit status 1)."""


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return values


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# -- subcommands ------------------------------------------------------------------------

def cmd_synth(args) -> int:
    a = parse_matrix(_read(args.matrix))
    params = SynthParams(mode=args.mode, seed=args.seed, allow_empty_rows=args.allow_empty_rows)
    c, report = synthesize(a, params)
    _write(args.out, serialize(c))
    print(report.summary(), file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    c = parse(_read(args.circuit))
    s = get_instance(args.semigroup)
    lines = [ln.strip() for ln in _read(args.input).splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != c.n_inputs:
        raise CommandFailed(f"circuit has {c.n_inputs} inputs but {args.input} holds {len(lines)} values")
    values = []
    for k, text in enumerate(lines):
        try:
            values.append(s.parse(text))
        except SemicircError as exc:
            raise CommandFailed(f"{args.input}: value {k}: {exc}") from None
    out = evaluate(c, s, values)
    for label in sorted(out):
        print(f"{label} {s.format(out[label])}")
    return 0


def cmd_verify(args) -> int:
    a = parse_matrix(_read(args.matrix))
    c = parse(_read(args.circuit))
    bad = find_mismatch(c, a)
    if bad is None:
        print(f"ok: {a.m} rows verified, wires={c.wires}", file=sys.stderr)
        return 0
    print(f"mismatch: row {bad.row} column {bad.column} multiplicity {bad.multiplicity} "
          f"(expected {bad.expected})")
    return 1


def _open_csv(path: str):
    """Append handle for ``path``; writes the header only if the file is new or empty."""
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    if exists:
        with open(path, newline="") as fh:
            header = next(csv.reader(fh), None)
        if header != BENCH_FIELDS:
            raise CommandFailed(f"{path} has header {header}, expected {BENCH_FIELDS}")
    fh = open(path, "a", newline="")
    writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
    if not exists:
        writer.writeheader()
    return fh, writer


def cmd_bench(args) -> int:
    fh, writer = _open_csv(args.csv)
    with fh:
        for n in args.n:
            for s in range(args.seeds):
                seed = args.seed + s
                a = seeded_matrix(n, n, args.zeros_per_row, seed)
                for mode in args.mode:
                    _, r = synthesize(a, SynthParams(mode=mode, seed=seed), check=False)
                    rec = BenchRecord(r.n, r.m, r.z, r.mode, r.wires, r.gates, r.short_total,
                                      r.fallback_count, r.retries, round(r.build_millis, 3))
                    writer.writerow(asdict(rec))
                    print(r.summary(), file=sys.stderr)
    return 0


def cmd_matmul(args) -> int:
    a = parse_matrix(_read(args.matrix))
    s = get_semiring(args.semiring)
    b = parse_dense(_read(args.dense), s)
    if len(b) != a.n:
        raise CommandFailed(f"matrix is {a.m}x{a.n} but dense factor has {len(b)} rows")
    result = matmul_complement_sparse(a, b, s)
    _write(args.out, format_dense(result, s))
    print(f"matmul: {a.m}x{a.n} times {len(b)}x{len(b[0])} over {s.name}", file=sys.stderr)
    return 0


def cmd_graph(args) -> int:
    a = parse_matrix(_read(args.matrix))
    g, report = build_dense_graph_expr(a)
    _write(args.out, format_graph_expr(g))
    note = f" isolated_rows={report.isolated_rows}" if report.isolated_rows else ""
    print(f"graph: n={report.n} z={report.z} wires={report.wires} "
          f"nodes={report.node_count}{note}", file=sys.stderr)
    return 0


def cmd_graph_eval(args) -> int:
    value = eval_graph_expr(parse_graph_expr(_read(args.expr)))
    out = [f"V: {v}" for v in sorted(value.vertices)]
    out += [f"E: {u} {v}" for u, v in sorted(value.edges)]
    if out:
        print("\n".join(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semicirc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="synthesize a circuit for a 0/1 matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--mode", choices=MODES, default="det")
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--allow-empty-rows", action="store_true")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("eval", help="evaluate a circuit over a semigroup")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--input", required=True, help="one value per line, one line per input")
    sp.add_argument("--semigroup", required=True, choices=CLI_NAMES)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", help="check a circuit against a matrix with the multiset oracle")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--circuit", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="synthesize random instances and append CSV records")
    sp.add_argument("--n", type=_int_list, required=True, help="sizes, e.g. 256,512,1024")
    sp.add_argument("--zeros-per-row", type=int, required=True)
    sp.add_argument("--mode", choices=MODES, nargs="+", default=["det"])
    sp.add_argument("--seeds", type=int, default=1, help="instances per size")
    sp.add_argument("--seed", type=_u64, default=0, help="first seed")
    sp.add_argument("--csv", required=True)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("matmul", help="multiply a 0/1 matrix by a dense semiring matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--dense", required=True)
    sp.add_argument("--semiring", required=True, choices=sorted(SEMIRINGS))
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_matmul)

    sp = sub.add_parser("graph", help="build the algebraic graph expression of a square matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("graph-eval", help="print the vertices and edges of a graph expression")
    sp.add_argument("--expr", required=True)
    sp.set_defaults(func=cmd_graph_eval)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "seeds", 1) < 1 or getattr(args, "zeros_per_row", 0) < 0:
        print("semicirc: error: --seeds must be >= 1 and --zeros-per-row >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (SemicircError, CommandFailed, OSError, ValueError, KeyError) as exc:
        print(f"semicirc {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
