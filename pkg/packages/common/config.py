"""
TreeSpectra — Environment-based configuration and numeric tolerances.

All settings are read from environment variables (12-factor style).
Every tolerance used by the library is defined here once; defaults are the
values the acceptance suite is calibrated against.
"""

import os
from typing import Dict, List

# ── Root finding ─────────────────────────────────────────────────────────────
ROOT_TOL:  float = float(os.getenv("TREESPECTRA_ROOT_TOL",  "1e-13"))
DEDUP_TOL: float = float(os.getenv("TREESPECTRA_DEDUP_TOL", "1e-9"))

# ── Oracle ───────────────────────────────────────────────────────────────────
CLUSTER_TOL: float = float(os.getenv("TREESPECTRA_CLUSTER_TOL", "1e-6"))
COMPARE_TOL: float = float(os.getenv("TREESPECTRA_COMPARE_TOL", "1e-8"))
ORACLE_NATIVE_MAX_N: int = int(os.getenv("TREESPECTRA_ORACLE_NATIVE_MAX_N", "400"))
ORACLE_MAX_NODES:    int = int(os.getenv("TREESPECTRA_ORACLE_MAX_NODES", "6000"))
QL_MAX_ITER:         int = int(os.getenv("TREESPECTRA_QL_MAX_ITER", "60"))

# ── Certificates ─────────────────────────────────────────────────────────────
CERT_TOL: float = float(os.getenv("TREESPECTRA_CERT_TOL", "1e-9"))

# ── Measure ──────────────────────────────────────────────────────────────────
LIMIT_TRUNCATION: int = int(os.getenv("TREESPECTRA_LIMIT_TRUNCATION", "60"))
DEFAULT_SCHEME:   str = os.getenv("TREESPECTRA_NORMALIZATION", "support").lower()

# ── Artifacts ────────────────────────────────────────────────────────────────
REPORTS_DIR:    str = os.getenv("REPORTS_DIR", "./reports")
AUDIT_LOG_PATH: str = os.getenv("TREESPECTRA_AUDIT_LOG", "")

# ── Operator support ─────────────────────────────────────────────────────────
# Which operators assemble_spectrum accepts for each branching kind.
SUPPORTED_OPERATORS: Dict[str, List[str]] = {
    "constant":  ["adjacency", "laplacian", "random_walk"],
    "hat":       ["adjacency", "laplacian", "random_walk"],
    "periodic":  ["adjacency"],
    "sequence":  ["adjacency"],
    "fan":       ["adjacency"],
}

# Fixed CSV column orders for emitted artifacts.
CSV_COLUMNS: Dict[str, List[str]] = {
    "spectrum":    ["value", "mult", "first_index"],
    "staircase":   ["x", "cumulative"],
    "eigenvalues": ["index", "value"],
}

CSV_FLOAT_FORMAT: str = "%.17g"
