"""
TreeSpectra — Artifact rendering.

Every command renders its artifact to a string first; the same string is
written out and hashed into the run ledger, so identical invocations give
byte-identical files and identical ledger hashes.

CSV column orders are fixed in common.config.CSV_COLUMNS and floats are
printed with 17 significant digits.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Any, Iterable, List, Optional

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "packages"))

import pandas as pd
from pydantic import BaseModel

from common.config import CSV_COLUMNS, CSV_FLOAT_FORMAT
from common.logging_util import get_logger
from common.types import EndpointRecord, SpectrumReport

log = get_logger("cli.artifacts")

ENDPOINT_COLUMNS = ["m", "a", "left", "right", "width", "tail_bound"]


def render_json(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, indent=2) + "\n"


def _render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def render_spectrum(report: SpectrumReport, fmt: str) -> str:
    if fmt == "json":
        return render_json(report.to_payload())
    rows = report.to_payload()["entries"]
    return _render_csv(pd.DataFrame(rows, columns=CSV_COLUMNS["spectrum"]))


def render_staircase(cdf, fmt: str) -> str:
    if fmt == "json":
        return render_json({
            "kind":       cdf.kind.value,
            "scheme":     cdf.scheme.value,
            "depth":      cdf.depth,
            "truncation": cdf.truncation,
            "tail_bound": cdf.tail_bound,
            "points": [
                {"x": x, "weight": str(w), "cumulative": c}
                for x, w, c in zip(cdf.xs, cdf.weights, cdf.cumulative)
            ],
        })
    return _render_csv(cdf.to_frame()[CSV_COLUMNS["staircase"]])


def render_endpoints(records: Iterable[EndpointRecord], fmt: str) -> str:
    rows = [r.model_dump(mode="json") for r in records]
    if fmt == "json":
        return render_json(rows)
    return _render_csv(pd.DataFrame(rows, columns=ENDPOINT_COLUMNS))


def render_rows(rows: List[dict], columns: List[str], fmt: str) -> str:
    if fmt == "json":
        return render_json(rows)
    return _render_csv(pd.DataFrame(rows, columns=columns))


def emit(text: str, out: Optional[str]) -> None:
    """Write to the --out path, or stdout when no path is given."""
    if not out or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    log.info("Artifact written: %s", out)


def read_spectrum_csv(path: str) -> pd.DataFrame:
    """Load a spectrum CSV back (used to check the format round-trips)."""
    return pd.read_csv(path, dtype={"mult": int, "first_index": int}, float_precision="round_trip")
