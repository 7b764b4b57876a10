"""CSV/JSON serialization of sweep records."""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path
from typing import IO, Sequence

from .protocols import SweepRecord


def fmt(x: float) -> str:
    """Round-trip-exact decimal with at least 15 significant digits."""
    text = format(float(x), ".17g")
    return "0" if text == "-0" else text


def _pair_key(pair) -> str:
    return f"{pair[0]}-{pair[1]}"


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    block_fields = sorted(records[0].blocks) if records else []
    out = io.StringIO()
    out.write(",".join(["tau", "pair", "log_negativity", *block_fields]) + "\n")
    for rec in records:
        tail = [fmt(rec.blocks[k]) for k in block_fields]
        for pair, value in rec.entries.items():
            out.write(",".join([fmt(rec.tau), _pair_key(pair), fmt(value), *tail]) + "\n")
    return out.getvalue()


def records_to_json(records: Sequence[SweepRecord]) -> str:
    rows = []
    for rec in records:
        row = {
            "tau": rec.tau,
            "log_negativity": {_pair_key(p): v for p, v in rec.entries.items()},
        }
        if rec.blocks:
            row["blocks"] = dict(sorted(rec.blocks.items()))
        if rec.purity_error is not None:
            row["purity_error"] = rec.purity_error
        if rec.symplectic_error is not None:
            row["symplectic_error"] = rec.symplectic_error
        rows.append(row)
    return json.dumps(rows, indent=1) + "\n"


def emit_records(records: Sequence[SweepRecord], format: str, destination: str | Path | IO[str] | None) -> None:
    """Write records as ``csv`` or ``json`` to a path, a stream, or stdout (``None``)."""
    if format == "csv":
        text = records_to_csv(records)
    elif format == "json":
        text = records_to_json(records)
    else:
        raise ValueError(f"unknown format {format!r}")
    write_text(text, destination)


def write_text(text: str, destination: str | Path | IO[str] | None) -> None:
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        path = Path(destination)
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
