"""``kstab`` command-line front end.

Exit codes: 0 ok, 2 usage or schema error, 3 inapplicable (non-Fano input),
4 indeterminate certificate, 5 certificate failure, 6 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .certify import (
    lemma37_certificate,
    lemma38_certificate,
    prop42_tail_certificate,
)
from .errors import BoundaryError, DatumError, GeometryError, KStabError
from .geometry import Cone2, minkowski_sum_with_cone, weyl_orbit_hull
from .rational import decimal_str, fmt_q, parse_q
from .report import certificate_dict, dumps, make_report, record_dict, write_atomic
from .root_datum import SymmetricDatum, load_datum, restricted_weyl_group
from .stability import (
    Family,
    Outcome,
    SweepRecord,
    evaluate,
    family_datum,
    greatest_ricci_lower_bound,
    kstability_verdict,
    polytope_from_datum,
    sweep,
)
from .svg import FigureSpec, render

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INAPPLICABLE = 3
EXIT_INDETERMINATE = 4
EXIT_CERT_FAIL = 5
EXIT_IO = 6


class UsageError(Exception):
    pass


def _jobs_default() -> int:
    raw = os.environ.get("KSTAB_JOBS", "")
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise UsageError(f"KSTAB_JOBS must be a positive integer, got {raw!r}") from None
    if jobs < 1:
        raise UsageError(f"KSTAB_JOBS must be a positive integer, got {raw!r}")
    return jobs


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kstab",
        description="Exact K-stability verdicts for AIII(2, m) wonderful compactifications and their blow-ups.",
    )
    parser.add_argument("--version", action="version", version=f"kstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    families = [f.value for f in Family]

    p = sub.add_parser("check", help="verdict for a single m")
    p.add_argument("family", choices=families)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ricci", action="store_true", help="also compute the greatest Ricci lower bound")
    p.add_argument("--json", action="store_true", help="accepted for compatibility; JSON is always printed")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")

    p = sub.add_parser("sweep", help="verdicts for a range of m")
    p.add_argument("family", choices=families)
    p.add_argument("--from", dest="m_from", type=int, required=True)
    p.add_argument("--to", dest="m_to", type=int, required=True)
    p.add_argument("--jobs", type=_positive_int, default=None, help="worker processes (default: $KSTAB_JOBS or 1)")
    p.add_argument("--out", required=True, help="report path")
    p.add_argument("--ricci", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.add_argument("--figure", help="also render a slack plot with matplotlib (.png, .svg or .pdf)")

    p = sub.add_parser("certify", help="replay a closed-form inequality certificate")
    p.add_argument("target", choices=["lemma37", "lemma38", "prop42tail"])
    p.add_argument("--horizon", type=_positive_int, default=10**6)
    p.add_argument("--m-lo", type=int, default=42)
    p.add_argument("--width", default="1/1000000", help="enclosure width for e^(5/2) and e^(-2/19)")

    p = sub.add_parser("plot", help="SVG figure of the moment polytope")
    p.add_argument("family", choices=families)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ricci", action="store_true", help="overlay the toric hull, the Minkowski body and Q")
    p.add_argument("--no-grid", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("datum", help="run the pipeline on a datum JSON file")
    p.add_argument("--file", required=True)
    p.add_argument("--ricci", action="store_true")
    p.add_argument("--timing", action="store_true")
    return parser


def _summary(rec: SweepRecord, label: str) -> str:
    v = rec.verdict
    if v.outcome is Outcome.INAPPLICABLE:
        return f"{label}: Inapplicable ({v.note})"
    bar = ", ".join(decimal_str(c) for c in v.barycenter)
    text = f"{label}: {v.outcome.value}, barycenter ~ ({bar}), min slack ~ {decimal_str(min(v.slacks))}"
    if rec.ricci is not None:
        text += f", R = {fmt_q(rec.ricci.r)} ~ {decimal_str(rec.ricci.r)}"
    return text


def _with_ricci(rec: SweepRecord, d: SymmetricDatum) -> tuple[SweepRecord, str | None]:
    if rec.verdict.outcome is Outcome.INAPPLICABLE:
        return rec, None
    try:
        rec.ricci = greatest_ricci_lower_bound(d, rec.polytope, rec.verdict)
    except BoundaryError as exc:
        return rec, str(exc)
    return rec, None


def _emit(report: dict) -> None:
    sys.stdout.write(dumps(report))
    sys.stdout.flush()


def cmd_check(args, argv) -> int:
    start = time.perf_counter()
    family = Family(args.family)
    if args.m < 4:
        raise UsageError(f"m must be at least 4, got {args.m}")
    rec = evaluate(family, args.m)
    d = family_datum(family, args.m)
    note = None
    if args.ricci:
        rec, note = _with_ricci(rec, d)
    body = {"records": [record_dict(rec, datum=d.name, timing=args.timing, ricci_note=note if args.ricci else None)]}
    if args.timing:
        body["timing"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    _emit(make_report(argv, **body))
    print(_summary(rec, f"{family.value} m={args.m}"), file=sys.stderr)
    if rec.verdict.outcome is Outcome.INAPPLICABLE:
        print(f"error: {rec.verdict.note}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    return EXIT_OK


def cmd_sweep(args, argv) -> int:
    start = time.perf_counter()
    family = Family(args.family)
    if not 4 <= args.m_from <= args.m_to:
        raise UsageError(f"invalid range {args.m_from}..{args.m_to}; need 4 <= from <= to")
    jobs = args.jobs if args.jobs is not None else _jobs_default()
    records = sweep(family, args.m_from, args.m_to, jobs=jobs, with_ricci=args.ricci)
    rows = []
    for rec in records:
        datum = family_datum(family, rec.m).name
        rows.append(record_dict(rec, datum=datum, timing=args.timing))
    counts: dict[str, int] = {}
    for rec in records:
        counts[rec.verdict.outcome.value] = counts.get(rec.verdict.outcome.value, 0) + 1
    body = {"records": rows, "counts": counts}
    if args.timing:
        body["timing"] = {"total_seconds": round(time.perf_counter() - start, 6), "jobs": jobs}
    write_atomic(args.out, dumps(make_report(argv, **body)))
    if args.figure:
        from .figures import render_sweep_figure

        render_sweep_figure(records, args.figure)
    tally = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"{family.value} m={args.m_from}..{args.m_to}: {tally} -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_certify(args, argv) -> int:
    if args.target == "lemma37":
        cert = lemma37_certificate()
    elif args.target == "lemma38":
        cert = lemma38_certificate()
    else:
        try:
            width = parse_q(args.width)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if width <= 0:
            raise UsageError("--width must be positive")
        if args.m_lo < 42:
            raise UsageError("--m-lo must be at least 42")
        if args.horizon < args.m_lo:
            raise UsageError("--horizon must be at least --m-lo")
        cert = prop42_tail_certificate(args.m_lo, args.horizon, width)
    _emit(make_report(argv, certificate=certificate_dict(cert)))
    for c in cert.claims:
        print(f"{'pass' if c.passed else 'FAIL'}  {c.name}", file=sys.stderr)
    return EXIT_OK if cert.passed else EXIT_CERT_FAIL


def cmd_plot(args, argv) -> int:
    family = Family(args.family)
    if args.m < 4:
        raise UsageError(f"m must be at least 4, got {args.m}")
    rec = evaluate(family, args.m)
    if rec.verdict.outcome is Outcome.INAPPLICABLE:
        print(f"error: {rec.verdict.note}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    d = family_datum(family, args.m)
    toric = body = q = None
    if args.ricci:
        toric = weyl_orbit_hull(rec.polytope, restricted_weyl_group(d))
        body = minkowski_sum_with_cone(toric, -Cone2(d.cone_generators))
        rec, _ = _with_ricci(rec, d)
        q = rec.ricci.Q if rec.ricci is not None else None
    spec = FigureSpec(
        polytope=rec.polytope,
        apex=d.two_rho,
        generators=d.cone_generators,
        barycenter=rec.barycenter,
        roots=[r.vec for r in d.positive_roots],
        toric=toric,
        minkowski=body,
        q=q,
        grid=not args.no_grid,
        title=f"{d.name} moment polytope",
    )
    write_atomic(args.out, render(spec))
    print(_summary(rec, f"{family.value} m={args.m}") + f" -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_datum(args, argv) -> int:
    start = time.perf_counter()
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatumError(f"invalid JSON ({exc.msg} at line {exc.lineno})", "$") from None
    d = load_datum(doc)
    P = polytope_from_datum(d)
    verdict = kstability_verdict(d, P)
    rec = SweepRecord(None, None, P, verdict.mass, verdict, None, time.perf_counter() - start)
    note = None
    if args.ricci:
        rec, note = _with_ricci(rec, d)
    body = {"records": [record_dict(rec, datum=d.name, timing=args.timing, ricci_note=note if args.ricci else None)]}
    if args.timing:
        body["timing"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    _emit(make_report(argv, **body))
    print(_summary(rec, d.name), file=sys.stderr)
    if verdict.outcome is Outcome.INAPPLICABLE:
        print(f"error: {verdict.note}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "sweep": cmd_sweep,
    "certify": cmd_certify,
    "plot": cmd_plot,
    "datum": cmd_datum,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatumError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
