"""
TreeSpectra — Run ledger.

Every CLI invocation records one RunRecord through `record_run()`: the
command, the parameters that determine its output (family, k, d, alphas,
depth, operator, format, tolerances) and the SHA-256 of the artifact it
emitted.  Two identical invocations share params_hash and artifact_hash;
only run_id and created_at differ.

Records go to an in-memory list and, when TREESPECTRA_AUDIT_LOG is set, are
appended to that file as JSON lines.
"""

from __future__ import annotations

import hashlib
import json
import os
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel

from common.config import AUDIT_LOG_PATH

# Arguments that choose where an artifact goes, not what it contains.
_LOCATION_KEYS = frozenset({"command", "out"})


class RunRecord(BaseModel):
    run_id:         str
    command:        str
    params:         Dict[str, Any]
    params_hash:    str
    artifact_hash:  str
    artifact_bytes: int
    created_at:     str

    model_config = {"frozen": True}


def _canonical(payload: Any) -> bytes:
    if isinstance(payload, (bytes, bytearray)):
        return bytes(payload)
    if isinstance(payload, str):
        return payload.encode()
    return json.dumps(payload, default=str, sort_keys=True).encode()


def _sha256(payload: Any) -> str:
    """SHA-256 hex digest of the canonical bytes of payload."""
    return hashlib.sha256(_canonical(payload)).hexdigest()


def new_run_id() -> uuid.UUID:
    return uuid.uuid4()


def run_params(values: Mapping[str, Any]) -> Dict[str, Any]:
    """Parameters that determine a run's artifact: unset and location keys dropped."""
    return {
        key: value
        for key, value in sorted(values.items())
        if value is not None and key not in _LOCATION_KEYS
    }


# ── In-memory ledger (always on) ─────────────────────────────────────────────

_IN_MEMORY_LOG: list[dict] = []


def record_run(
    *,
    run_id:   uuid.UUID,
    command:  str,
    params:   Mapping[str, Any],
    artifact: Any,
    path:     Optional[str] = None,
) -> dict:
    """
    Record one run in memory and, if a ledger path is configured, append it
    as one JSON line to that file.  Returns the record as a dict.
    """
    params = run_params(params)
    record = RunRecord(
        run_id=str(run_id),
        command=command,
        params=params,
        params_hash=_sha256(params),
        artifact_hash=_sha256(artifact),
        artifact_bytes=len(_canonical(artifact)),
        created_at=datetime.now(tz=timezone.utc).isoformat(),
    )
    entry = record.model_dump(mode="json")
    _IN_MEMORY_LOG.append(entry)

    target = path if path is not None else AUDIT_LOG_PATH
    if target:
        parent = os.path.dirname(target)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(target, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True, default=str) + "\n")
    return entry


def get_memory_log() -> list[dict]:
    """Return a copy of the in-memory ledger."""
    return list(_IN_MEMORY_LOG)


def clear_memory_log() -> None:
    """Clear the in-memory ledger (test teardown only)."""
    _IN_MEMORY_LOG.clear()
