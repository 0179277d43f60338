"""Session trace records and their CSV / JSONL serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import astuple, dataclass, field, fields
from typing import Any, Literal

TraceFormat = Literal["csv", "jsonl"]


@dataclass(frozen=True, slots=True)
class TraceRow:
    tick: int
    h: float
    s: float
    m: float
    v: float
    r: float
    symbol: str
    state_before: str
    state_after: str
    emitted: str
    wait: bool


COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(TraceRow))
_FLOATS = {"h", "s", "m", "v", "r"}


@dataclass(frozen=True)
class SessionTrace:
    header: dict[str, Any] = field(default_factory=dict)
    rows: tuple[TraceRow, ...] = ()
    reached_rs: bool = False
    accepted: bool = False

    @property
    def final_state(self) -> str:
        return self.rows[-1].state_after if self.rows else "S"


def _cell(name: str, value: Any) -> str:
    if name == "wait":
        return "true" if value else "false"
    if name in _FLOATS:
        return repr(float(value))
    return str(value)


def write_trace(trace: SessionTrace, fmt: TraceFormat = "csv") -> bytes:
    """Serialise ``trace``. Output is byte-for-byte deterministic.

    CSV carries the rows only; JSONL starts with one ``{"header": ...}``
    object followed by one object per row.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(COLUMNS)
        for row in trace.rows:
            writer.writerow([_cell(n, v) for n, v in zip(COLUMNS, astuple(row))])
        return buf.getvalue().encode("utf-8")
    if fmt == "jsonl":
        lines = [json.dumps({"header": trace.header}, sort_keys=True, ensure_ascii=False)]
        for row in trace.rows:
            obj = dict(zip(COLUMNS, astuple(row)))
            for k in _FLOATS:
                obj[k] = float(obj[k])
            lines.append(json.dumps(obj, ensure_ascii=False))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown trace format {fmt!r}")


def _row_from_strings(rec: dict[str, str]) -> TraceRow:
    return TraceRow(
        tick=int(rec["tick"]),
        h=float(rec["h"]), s=float(rec["s"]), m=float(rec["m"]),
        v=float(rec["v"]), r=float(rec["r"]),
        symbol=rec["symbol"], state_before=rec["state_before"],
        state_after=rec["state_after"], emitted=rec["emitted"],
        wait={"true": True, "false": False}[rec["wait"]],
    )


def read_trace(data: bytes, fmt: TraceFormat = "csv") -> tuple[dict[str, Any], list[TraceRow]]:
    """Parse bytes produced by :func:`write_trace`; CSV yields an empty header."""
    text = data.decode("utf-8")
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
        return {}, [_row_from_strings(rec) for rec in reader]
    if fmt == "jsonl":
        lines = [ln for ln in text.split("\n") if ln]
        if not lines:
            raise ValueError("empty JSONL trace")
        header = json.loads(lines[0])["header"]
        rows = []
        for ln in lines[1:]:
            obj = json.loads(ln)
            if tuple(obj) != COLUMNS:
                raise ValueError(f"unexpected JSONL keys {list(obj)}")
            rows.append(TraceRow(**obj))
        return header, rows
    raise ValueError(f"unknown trace format {fmt!r}")
