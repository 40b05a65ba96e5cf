"""Canonical JSON reports.

Exact rationals are always strings; a decimal rendering, when present, sits
next to the exact value under a ``decimal`` key or a ``*_decimal`` sibling.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from . import __version__
from .certify import Certificate
from .rational import DECIMAL_DIGITS, decimal_str, fmt_q
from .stability import Outcome, RicciResult, SweepRecord, Verdict

SCHEMA = "kstab-report/1"


def _pair(v) -> list[str] | None:
    return None if v is None else [fmt_q(v[0]), fmt_q(v[1])]


def _pair_decimal(v) -> list[str] | None:
    return None if v is None else [decimal_str(v[0]), decimal_str(v[1])]


def _plain(value: Any) -> Any:
    """JSON-safe view of certificate witnesses: rationals become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return fmt_q(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


def ricci_dict(res: RicciResult) -> dict[str, Any]:
    return {
        "r": fmt_q(res.r),
        "decimal": decimal_str(res.r),
        "A": _pair(res.A),
        "C": _pair(res.C),
        "Q": _pair(res.Q),
        "Q_decimal": _pair_decimal(res.Q),
        "t_exit": None if res.t_exit is None else fmt_q(res.t_exit),
        "methods_agree": res.methods_agree,
        "exit_facets": res.exit_facets,
    }


def verdict_fields(v: Verdict) -> dict[str, Any]:
    out: dict[str, Any] = {"verdict": v.outcome.value}
    if v.outcome is Outcome.INAPPLICABLE:
        out.update(mass=None, barycenter=None, slacks=None, note=v.note)
        return out
    out.update(
        mass=fmt_q(v.mass),
        mass_decimal=decimal_str(v.mass),
        barycenter=_pair(v.barycenter),
        barycenter_decimal=_pair_decimal(v.barycenter),
        slacks=_pair(v.slacks),
        slacks_decimal=_pair_decimal(v.slacks),
    )
    if v.note:
        out["note"] = v.note
    return out


def record_dict(
    rec: SweepRecord, *, datum: str, timing: bool = False, ricci_note: str | None = None
) -> dict[str, Any]:
    out: dict[str, Any] = {
        "datum": datum,
        "family": rec.family.value if rec.family is not None else None,
        "m": rec.m,
        "vertices": None if rec.polytope is None else str(rec.polytope),
    }
    out.update(verdict_fields(rec.verdict))
    if rec.ricci is not None:
        out["ricci"] = ricci_dict(rec.ricci)
    elif ricci_note is not None:
        out["ricci"] = {"r": None, "note": ricci_note}
    if timing:
        out["duration_seconds"] = round(rec.duration, 6)
    return out


def certificate_dict(cert: Certificate) -> dict[str, Any]:
    return {
        "target": cert.target,
        "passed": cert.passed,
        "claims": [
            {"name": c.name, "passed": c.passed, "witness": _plain(c.witness)} for c in cert.claims
        ],
    }


def make_report(command: Iterable[str], **body: Any) -> dict[str, Any]:
    report = {
        "schema": SCHEMA,
        "tool": "kstab",
        "version": __version__,
        "decimal_digits": DECIMAL_DIGITS,
        "command": list(command),
    }
    report.update(body)
    return report


def dumps(report: dict[str, Any]) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partial output."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
