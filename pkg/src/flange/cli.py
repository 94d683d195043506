"""Command-line front end.

Exit status is 0 on success, 1 for input or structural errors and 2 for bad
rank queries.  Errors are reported on standard error as ``flange: <label>: <detail>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import oracle
from .cech import flange_presentation
from .core import check_field
from .errors import FlangeError, FormatError, QueryError, RangeError
from .gmatrix import graded_transpose, is_anti_valid, is_minimal
from .scc_io import (
    FlatInjectivePresentation,
    FreeResolution,
    example_resolution,
    load,
    save,
    validate_resolution,
)

EXIT_OK, EXIT_INPUT, EXIT_QUERY = 0, 1, 2
SELFTEST_SEEDS = 20


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors; exit 2 is reserved for rank queries
    def error(self, message):
        raise _Usage(message)


@dataclass
class CliConfig:
    command: str
    inputs: list
    output: str | None = None
    p: int = 2
    strategy: str = "contraction"
    box: tuple | None = None
    one_based: bool = False


def default_field(explicit: int | None = None) -> int:
    if explicit is not None:
        return check_field(explicit)
    env = os.environ.get("FLANGE_FIELD")
    if env is None or not env.strip():
        return 2
    try:
        p = int(env)
    except ValueError:
        raise FormatError(f"FLANGE_FIELD={env!r} is not an integer") from None
    return check_field(p)


def parse_query_grade(text: str) -> tuple:
    """Comma-separated finite integers; anything else is a query error."""
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise QueryError(f"grade {text!r} must be comma-separated integers") from None


def parse_box(text: str) -> tuple[tuple, tuple]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise RangeError(f"box {text!r} must look like lo:hi")
    try:
        a = tuple(int(t) for t in lo.split(","))
        b = tuple(int(t) for t in hi.split(","))
    except ValueError:
        raise RangeError(f"box {text!r} must use comma-separated integers") from None
    if len(a) != len(b) or not all(x <= y for x, y in zip(a, b)):
        raise RangeError(f"box needs lo <= hi, got {a} and {b}")
    return a, b


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _load_resolution(path: str, p: int, one_based: bool = False) -> FreeResolution:
    obj = load(path, p=p, one_based=one_based)
    if not isinstance(obj, FreeResolution):
        raise FormatError(f"{path}: expected an scc2020 resolution, found a fip file")
    return obj


def _load_any(path: str, p: int):
    with open(path, encoding="utf-8") as fh:
        head = fh.readline().strip()
    return load(path, p=p) if head == "scc2020" else load(path)


def cmd_convert(cfg: CliConfig, out: list) -> int:
    res = _load_resolution(cfg.inputs[0], cfg.p, cfg.one_based)
    pres = flange_presentation(res, strategy=cfg.strategy)
    save(pres, cfg.output)
    U = pres.matrix
    zero_rows = int(np.count_nonzero(~U.entries.any(axis=1)))
    zero_cols = int(np.count_nonzero(~U.entries.any(axis=0)))
    out += [
        f"rows: {U.shape[0]}",
        f"cols: {U.shape[1]}",
        f"input minimal: {_yn(all(is_minimal(D) for D in res.matrices))}",
        f"zero rows: {zero_rows}",
        f"zero cols: {zero_cols}",
    ]
    return EXIT_OK


def cmd_rank(path: str, kind: str, z, z2, p: int, out: list) -> int:
    obj = _load_any(path, p)
    if kind == "fip":
        if not isinstance(obj, FlatInjectivePresentation):
            raise FormatError(f"{path}: --kind fip needs a fip file")
        r = oracle.rank_fip(obj, z, z2)
    else:
        if not isinstance(obj, FreeResolution) or obj.length < 1:
            raise FormatError(f"{path}: --kind {kind} needs an scc2020 file with at least one matrix")
        fn = oracle.rank_free if kind == "free" else oracle.rank_injective
        r = fn(obj.boundary(1), z, z2)
    out.append(str(r))
    return EXIT_OK


def cmd_check(path: str, p: int, out: list) -> int:
    obj = _load_any(path, p)
    if isinstance(obj, FreeResolution):
        report = validate_resolution(obj)
        out.append(report.format())
        return EXIT_OK if report.ok else EXIT_INPUT
    U = obj.matrix
    ok = is_anti_valid(U)
    out += [
        f"parameters: {U.n}",
        f"field: {U.p}",
        f"rows: {U.shape[0]}",
        f"cols: {U.shape[1]}",
        f"anti-valid: {_yn(ok)}, zero rows: {int(np.count_nonzero(~U.entries.any(axis=1)))}, "
        f"zero cols: {int(np.count_nonzero(~U.entries.any(axis=0)))}",
    ]
    return EXIT_OK if ok else EXIT_INPUT


def cmd_hilbert(path: str, box, p: int, out: list) -> int:
    obj = _load_any(path, p)
    if isinstance(obj, FreeResolution) and obj.length < 1:
        raise FormatError(f"{path}: resolution has no presentation matrix")
    values = oracle.hilbert_function(obj, box)
    n = obj.n
    out.append(oracle.hilbert_csv(values, n).rstrip("\n"))
    return EXIT_OK


def cmd_dualize(path: str, target: str, out: list) -> int:
    obj = load(path)
    if not isinstance(obj, FlatInjectivePresentation):
        raise FormatError(f"{path}: dualize needs a fip file")
    dual = FlatInjectivePresentation(graded_transpose(obj.matrix))
    save(dual, target)
    out.append(f"rows: {dual.matrix.shape[0]}")
    out.append(f"cols: {dual.matrix.shape[1]}")
    return EXIT_OK


def selftest(out: list, seeds: int = SELFTEST_SEEDS) -> int:
    """Bundled-example regression plus the master property on random box sums."""
    failures = 0

    def record(name: str, ok: bool):
        nonlocal failures
        failures += not ok
        out.append(f"{'PASS' if ok else 'FAIL'} {name}")

    res = example_resolution(32003)
    want = np.array([[-1, 0], [-1, -1]]) % 32003
    for strategy in ("contraction", "preimage"):
        U = flange_presentation(res, strategy=strategy).matrix
        ok = (
            np.array_equal(U.entries, want)
            and U.row_grade_list() == [(1, 1), (2, 2)]
            and U.col_grade_list() == [(0, 1), (1, 0)]
        )
        record(f"example presentation ({strategy})", ok)
    for p in (2, 32003):
        bad = 0
        for seed in range(seeds):
            boxes = oracle.random_boxes(seed, 1 + seed % 20)
            res = oracle.box_resolution(boxes, p)
            Phi = flange_presentation(res).matrix
            D1 = res.boundary(1)
            box = oracle.default_box(D1, Phi)
            ref = oracle.box_count_table(boxes, box)
            tables = (
                oracle.rank_table_free(D1, box),
                oracle.rank_table_fip(Phi, box),
                oracle.rank_table_oracle(oracle.expand_free(D1, box)),
            )
            bad += any(t != ref for t in tables)
        record(f"rank invariants agree on {seeds} random box sums (p={p})", bad == 0)
    return EXIT_OK if failures == 0 else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="flange", description="Flat-injective presentations of multiparameter modules.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("convert", help="free resolution (scc2020) -> flat-injective presentation (fip)")
    c.add_argument("-i", dest="input", required=True)
    c.add_argument("-o", dest="output", required=True)
    c.add_argument("--field", type=int, default=None)
    c.add_argument("--strategy", choices=["contraction", "preimage"], default="contraction")
    c.add_argument("--one-based", action="store_true", help="boundary indices in the input start at 1")

    r = sub.add_parser("rank", help="rank of a structure map z -> z'")
    r.add_argument("-p", dest="path", required=True)
    r.add_argument("--kind", choices=["free", "fip", "inj"], required=True)
    r.add_argument("--from", dest="z", required=True)
    r.add_argument("--to", dest="z2", required=True)

    k = sub.add_parser("check", help="validate an scc2020 or fip file")
    k.add_argument("-i", dest="input", required=True)

    h = sub.add_parser("hilbert", help="CSV of dimensions over a box")
    h.add_argument("-i", dest="input", required=True)
    h.add_argument("--box", default=None, help="lo:hi, e.g. 0,0:3,3")

    d = sub.add_parser("dualize", help="graded transpose of a fip file")
    d.add_argument("-i", dest="input", required=True)
    d.add_argument("-o", dest="output", required=True)

    sub.add_parser("selftest", help="built-in regression and random consistency checks")
    return ap


def _run(args, out: list) -> int:
    if args.command == "convert":
        cfg = CliConfig(
            "convert", [args.input], args.output, default_field(args.field), args.strategy, one_based=args.one_based
        )
        return cmd_convert(cfg, out)
    if args.command == "rank":
        z, z2 = parse_query_grade(args.z), parse_query_grade(args.z2)
        return cmd_rank(args.path, args.kind, z, z2, default_field(), out)
    if args.command == "check":
        return cmd_check(args.input, default_field(), out)
    if args.command == "hilbert":
        box = parse_box(args.box) if args.box else None
        return cmd_hilbert(args.input, box, default_field(), out)
    if args.command == "dualize":
        return cmd_dualize(args.input, args.output, out)
    return selftest(out)


def main(argv: list[str] | None = None) -> int:
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        code = _run(args, out)
    except _Usage as exc:
        print(f"flange: usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QueryError as exc:
        print(f"flange: {exc.label}: {exc}", file=sys.stderr)
        return EXIT_QUERY
    except FlangeError as exc:
        print(f"flange: {exc.label}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"flange: io error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if out:
        sys.stdout.write("\n".join(out) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
