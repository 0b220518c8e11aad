"""Command-line front end.

Basis syntax::

    poly:K                 K-gonal numbers, K >= 3 (0 included)
    set:A,B,C              explicit finite set; ``A..B`` expands to a range
    aug:<spec>+set:A,B     union of a poly: or set: basis with a finite set

Structured reports start with ``format: 1`` followed by ``key: value`` lines.
CSV columns per subcommand:

    enum        value
    sumset      n                      (members of the sumset)
    order       h,covered,smallest_gap,largest_gap,gap_count
    obstruct    residue,attainable,in_certificate
    density     n,count,ratio
    stability   which,order,h_max
    legendre    m,bound,cutoff,terms,passed,counterexample

Exit status: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import engine
from .analysis import EVIDENCE_NOTE, density_profile, modular_obstruction
from .basis import enumerate_basis, parse_spec, to_bitmap
from .errors import InvalidParameterError
from .order import default_h_max, empirical_order, stability_experiment, verify_legendre
from .verify import format_result, verify_paper

FORMAT_VERSION = 1


def _basis(text: str):
    try:
        return parse_spec(text)
    except InvalidParameterError as err:
        raise argparse.ArgumentTypeError(f"{text!r}: {err}") from None


def _grid(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _none(value):
    return "none" if value is None else value


def _structured(pairs: list[tuple[str, object]]) -> str:
    lines = [f"format: {FORMAT_VERSION}"]
    for key, value in pairs:
        if isinstance(value, bool):
            value = str(value).lower()
        elif value is None:
            value = "none"
        elif isinstance(value, (list, tuple, set, frozenset)):
            value = ",".join(map(str, sorted(value) if isinstance(value, (set, frozenset)) else value))
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["none" if v is None else str(v).lower() if isinstance(v, bool) else v for v in row])
    return buf.getvalue()


def cmd_enum(args) -> tuple[str, int]:
    values = enumerate_basis(args.basis, args.bound)
    if args.format == "csv":
        return _csv(["value"], ([v] for v in values)), 0
    return _structured([
        ("report", "enum"), ("basis", args.basis), ("bound", args.bound),
        ("count", len(values)), ("members", values),
    ]), 0


def cmd_sumset(args) -> tuple[str, int]:
    bound = args.bound
    left = to_bitmap(args.basis, bound)
    if args.other is not None:
        result = engine.sumset(left, to_bitmap(args.other, bound), args.threads)
        label = f"{args.basis} + {args.other}"
    else:
        result = engine.hfold(left, args.h, workers=args.threads)
        label = f"{args.h}*{args.basis}"
    if args.out:
        result.save(args.out)
    if args.format == "csv":
        return _csv(["n"], ([m] for m in result.members())), 0
    gaps = engine.complement_members(result, 0, bound)
    return _structured([
        ("report", "sumset"), ("set", label), ("bound", bound),
        ("popcount", result.popcount()), ("counting", engine.counting(result, bound)),
        ("gap_count", len(gaps)), ("first_gaps", gaps[:20]),
        ("bitmap_file", args.out),
    ]), 0


def cmd_order(args) -> tuple[str, int]:
    h_max = args.hmax or default_h_max(args.basis)
    rep = empirical_order(args.basis, args.bound, h_max, args.threads)
    if args.format == "csv":
        rows = ([lv.h, lv.covered, lv.smallest_gap, lv.largest_gap, lv.gap_count] for lv in rep.levels)
        return _csv(["h", "covered", "smallest_gap", "largest_gap", "gap_count"], rows), 0
    pairs = [
        ("report", "order"), ("basis", rep.spec), ("bound", rep.bound), ("h_max", rep.h_max),
        ("zero_in_basis", rep.zero_in_basis),
        ("empirical_order", rep.empirical_order if rep.empirical_order else "exceeds h_max"),
        ("witness", rep.witness), ("witnesses", rep.witnesses()),
    ]
    for lv in rep.levels:
        pairs.append((
            f"level.{lv.h}",
            f"covered={str(lv.covered).lower()} smallest_gap={_none(lv.smallest_gap)} "
            f"largest_gap={_none(lv.largest_gap)} gap_count={lv.gap_count} covered_from={lv.covered_from}",
        ))
    return _structured(pairs), 0


def cmd_obstruct(args) -> tuple[str, int]:
    rep = modular_obstruction(args.basis, args.h, args.mod)
    if args.format == "csv":
        rows = ([r, r in rep.attainable, r in rep.certificate] for r in range(rep.modulus))
        return _csv(["residue", "attainable", "in_certificate"], rows), 0
    return _structured([
        ("report", "obstruct"), ("basis", args.basis), ("h", rep.h), ("modulus", rep.modulus),
        ("certificate", rep.certificate), ("attainable", rep.attainable), ("missing", rep.missing),
    ]), 0


def cmd_density(args) -> tuple[str, int]:
    prof = density_profile(args.basis, args.h, args.bound, args.grid, args.threads)
    if args.format == "csv":
        return _csv(["n", "count", "ratio"], ([s.n, s.count, repr(s.ratio)] for s in prof.samples)), 0
    pairs = [
        ("report", "density"), ("set", prof.set_label), ("bound", prof.bound),
        ("note", EVIDENCE_NOTE), ("tail_max_ratio", repr(prof.tail_max_ratio)),
    ]
    pairs += [(f"sample.{s.n}", f"count={s.count} ratio={s.ratio!r}") for s in prof.samples]
    return _structured(pairs), 0


def cmd_stability(args) -> tuple[str, int]:
    rep = stability_experiment(args.basis, args.cutoff, args.bound, args.hmax, args.threads)
    h_max = rep.base_report.h_max
    if args.format == "csv":
        rows = [["base", rep.order_base, h_max], ["augmented", rep.order_augmented, h_max]]
        return _csv(["which", "order", "h_max"], rows), 0
    return _structured([
        ("report", "stability"), ("basis", rep.spec), ("cutoff", rep.cutoff), ("bound", rep.bound),
        ("h_max", h_max), ("order_base", rep.order_base), ("order_augmented", rep.order_augmented),
        ("stable", rep.stable), ("note", "empirical orders on [0, bound]"),
    ]), 0


def cmd_legendre(args) -> tuple[str, int]:
    res = verify_legendre(args.m, args.bound, args.threads)
    code = 0 if res.passed else 1
    if args.format == "csv":
        row = [res.m, res.bound, res.cutoff, res.terms, res.passed, res.counterexample]
        return _csv(["m", "bound", "cutoff", "terms", "passed", "counterexample"], [row]), code
    return _structured([
        ("report", "legendre"), ("m", res.m), ("bound", res.bound), ("cutoff", res.cutoff),
        ("terms", res.terms), ("passed", res.passed), ("counterexample", res.counterexample),
    ]), code


def cmd_verify(args) -> tuple[str, int]:
    lines: list[str] = []
    results = verify_paper(args.scale, args.threads, emit=lambda line: print(line, flush=True))
    lines = [format_result(r) for r in results]
    ok = all(r.passed for r in results)
    summary = f"{sum(r.passed for r in results)}/{len(results)} checks passed"
    if args.output:
        return "\n".join(lines + [summary]) + "\n", 0 if ok else 1
    print(summary)
    return "", 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumsetlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=["structured", "csv"], default="structured")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--threads", type=_positive, default=None,
                       help="worker threads (default: $SUMSETLAB_THREADS or 1)")
        p.set_defaults(func=func)
        return p

    p = add("enum", cmd_enum, "list basis elements up to a bound")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--bound", type=_positive, required=True)

    p = add("sumset", cmd_sumset, "truncated h-fold sumset or A+B")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--with", dest="other", type=_basis, help="second operand for A+B")
    p.add_argument("--h", type=_positive, default=2)
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--out", help="write the result bitmap (SSL1 format)")

    p = add("order", cmd_order, "empirical order on [0, N]")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--hmax", type=_positive)

    p = add("obstruct", cmd_obstruct, "residue obstructions for h-fold sums")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--h", type=_positive, required=True)
    p.add_argument("--mod", type=int, required=True)

    p = add("density", cmd_density, "counting profile of an h-fold sumset")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--h", type=_positive, default=1)
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--grid", type=_grid, help="comma-separated sample points")

    p = add("stability", cmd_stability, "order of A versus A with [0, C) added")
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--hmax", type=_positive)

    p = add("legendre", cmd_legendre, "check the four/five-term theorem above 28m^3")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--bound", type=_positive, required=True)

    p = add("verify-paper", cmd_verify, "run every reproduction check")
    p.add_argument("--scale", choices=["quick", "full"], default="quick")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = engine.default_workers()
    try:
        text, code = args.func(args)
    except InvalidParameterError as err:
        print(f"sumsetlab {args.command}: error: {err}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif text:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
