"""
Tests for the TreeSpectra command-line surface.

Tests call main.run(argv) in-process and read stdout with capsys or the
--out file from tmp_path; nothing is spawned.

Verifies:
1. Each subcommand succeeds on a small instance with exit code 0.
2. Bad arguments exit 2; failed comparisons exit 1.
3. Repeated invocations give byte-identical artifacts and ledger hashes.
4. CSV artifacts round-trip through read_spectrum_csv.
5. The discrepancy report flags the star walk closing roots.
"""

from __future__ import annotations

import io
import json
import os
import sys

import pandas as pd
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "..", "packages"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import commands
import reporter
from artifacts import read_spectrum_csv
from common.audit import clear_memory_log, get_memory_log
from common.config import COMPARE_TOL
from common.types import BranchingSpec, SpectrumComparison
from main import build_parser, run
from oracle.compare import compare_spectra
from spectra.assemble import assemble_spectrum


@pytest.fixture(autouse=True)
def _fresh_ledger():
    clear_memory_log()
    yield
    clear_memory_log()


def _json(capsys):
    return json.loads(capsys.readouterr().out)


# ── Subcommands ──────────────────────────────────────────────────────────────

class TestSubcommands:
    def test_spectrum_json(self, capsys):
        """Binary tree at depth 4: total_dim 31, multiplicities summing to it."""
        code = run(["spectrum", "--family", "constant", "--k", "2", "--depth", "4",
                    "--format", "json"])
        payload = _json(capsys)
        assert code == 0
        assert payload["total_dim"] == 31
        assert sum(e["mult"] for e in payload["entries"]) == 31
        assert payload["spec"] == {"kind": "constant", "k": 2}

    def test_spectrum_csv_columns(self, capsys):
        """CSV spectrum has value, mult, first_index columns."""
        assert run(["spectrum", "--k", "3", "--depth", "2"]) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert list(frame.columns) == ["value", "mult", "first_index"]
        assert frame["mult"].sum() == 13

    def test_spectrum_laplacian(self, capsys):
        """--operator laplacian on the star K_{1,3}."""
        assert run(["spectrum", "--k", "3", "--depth", "1", "--operator", "laplacian",
                    "--format", "json"]) == 0
        values = [e["value"] for e in _json(capsys)["entries"]]
        assert values == pytest.approx([0.0, 1.0, 4.0], abs=1e-12)

    def test_oracle_compare_hat(self, capsys):
        """Hat tree k=3 at depth 2 matches the oracle."""
        code = run(["oracle-compare", "--family", "hat", "--k", "3", "--depth", "2",
                    "--format", "json"])
        assert code == 0
        assert _json(capsys)["matched"] is True

    def test_oracle_compare_periodic(self, capsys):
        """Periodic alphas parse from a comma list."""
        assert run(["oracle-compare", "--family", "periodic", "--alphas", "3,2",
                    "--depth", "4"]) == 0

    def test_identities(self, capsys):
        """Raw Lambert sum for k=2 is about 2."""
        assert run(["identities", "--k", "2", "--trunc", "60"]) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        raw = frame[frame["form"] == "raw"].iloc[0]
        norm = frame[frame["form"] == "normalized"].iloc[0]
        assert raw["value"] == pytest.approx(2.0, abs=1e-12)
        assert norm["value"] == pytest.approx(1.0, abs=1e-12)

    def test_verify_hat(self, capsys):
        """Every eigenvector of the degree-3 hat tree at depth 3 is certified."""
        assert run(["verify", "--family", "hat", "--k", "3", "--depth", "3",
                    "--format", "json"]) == 0
        row = _json(capsys)[0]
        assert row["count"] == row["n_nodes"] == 22
        assert row["complete"] is True

    def test_verify_fan(self, capsys):
        """Fans certify their isotropic closing roots."""
        assert run(["verify", "--family", "fan", "--k", "2", "--d", "3", "--depth", "2",
                    "--format", "json"]) == 0
        assert _json(capsys)[0]["count"] == 3

    def test_fan(self, capsys):
        """Fan (k=2, d=3) at depth 2 has 21 nodes."""
        assert run(["fan", "--k", "2", "--d", "3", "--depth", "2", "--format", "json"]) == 0
        payload = _json(capsys)
        assert payload["n_nodes"] == 21
        assert payload["unmatched_roots"] == []
        assert payload["spectrum"]["total_dim"] == 21

    def test_endpoints_single(self, capsys):
        """The zero plateau of the binary tree is [1/3, 2/3]."""
        assert run(["endpoints", "--k", "2", "--m", "2", "--a", "1", "--format", "json"]) == 0
        (rec,) = _json(capsys)
        assert rec["left"] == pytest.approx(1 / 3, abs=1e-9)
        assert rec["right"] == pytest.approx(2 / 3, abs=1e-9)

    def test_endpoints_default_grid(self, capsys):
        """Without --m every coprime a/m with m <= 6 is listed."""
        assert run(["endpoints", "--k", "3"]) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert len(frame) == 1 + 2 + 2 + 4 + 2

    def test_staircase_limit(self, capsys):
        """Truncated limiting CDF as JSON."""
        assert run(["staircase", "--k", "2", "--limit", "--trunc", "20", "--format", "json"]) == 0
        payload = _json(capsys)
        assert payload["kind"] == "limiting"
        assert payload["truncation"] == 20

    def test_staircase_empirical(self, capsys):
        """Depth-2 CDF of the binary tree has five steps."""
        assert run(["staircase", "--k", "2", "--depth", "2"]) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert list(frame.columns) == ["x", "cumulative"]
        assert len(frame) == 5

    def test_help_exits_zero(self, capsys):
        """--help is not an error."""
        assert run(["--help"]) == 0

    def test_parser_lists_commands(self):
        """All eight subcommands are registered."""
        parser = build_parser()
        args = parser.parse_args(["report"])
        assert args.command == "report"
        assert set(commands.COMMANDS) == {
            "spectrum", "verify", "staircase", "endpoints",
            "oracle-compare", "identities", "fan", "report"}


# ── Exit codes ───────────────────────────────────────────────────────────────

class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["spectrum", "--k", "1", "--depth", "2"],
        ["spectrum", "--family", "hat", "--k", "2", "--depth", "2"],
        ["spectrum", "--family", "periodic", "--alphas", "3,2", "--depth", "3"],
        ["spectrum", "--family", "periodic", "--alphas", "3,x", "--depth", "2"],
        ["spectrum", "--depth", "2"],
        ["spectrum", "--k", "2"],
        ["spectrum", "--family", "sequence", "--alphas", "2,3", "--depth", "3"],
        ["spectrum", "--family", "periodic", "--alphas", "3,2", "--depth", "2",
         "--operator", "laplacian"],
        ["identities"],
        ["nonsense"],
    ])
    def test_bad_arguments_exit_two(self, argv, capsys):
        """Invalid specs and missing arguments exit 2 before computing."""
        assert run(argv) == 2
        assert get_memory_log() == []

    def test_failed_comparison_exits_one(self, monkeypatch, capsys):
        """A mismatching comparison is reported with exit 1."""
        def fake_compare(a, b, tol):
            return SpectrumComparison(matched=False, worst_value_gap=1.0,
                                      mult_mismatches=[(0.0, 3, 2)],
                                      n_clusters_a=1, n_clusters_b=1)
        monkeypatch.setattr(commands, "compare_spectra", fake_compare)
        assert run(["oracle-compare", "--k", "2", "--depth", "2"]) == 1


# ── Artifacts and ledger ─────────────────────────────────────────────────────

class TestArtifacts:
    def test_repeat_runs_identical(self, tmp_path):
        """Two runs write byte-identical files with identical ledger hashes."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["spectrum", "--family", "hat", "--k", "4", "--depth", "3"]
        assert run(argv + ["--out", str(first)]) == 0
        assert run(argv + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        first_run, second_run = get_memory_log()
        assert first_run["artifact_hash"] == second_run["artifact_hash"]
        assert first_run["params_hash"] == second_run["params_hash"]
        assert first_run["command"] == "spectrum"
        assert first_run["params"]["family"] == "hat"
        assert (first_run["params"]["depth"], first_run["params"]["operator"]) == (3, "adjacency")
        assert "out" not in first_run["params"]

    def test_csv_round_trip(self, tmp_path):
        """Values written with 17 digits read back exactly."""
        out = tmp_path / "spec" / "binary.csv"
        assert run(["spectrum", "--k", "2", "--depth", "5", "--out", str(out)]) == 0
        frame = read_spectrum_csv(str(out))
        report = assemble_spectrum(BranchingSpec.constant(2), 5)
        assert frame["value"].tolist() == report.values()
        assert frame["mult"].tolist() == [e.multiplicity for e in report.entries]

    def test_report_markdown(self, tmp_path):
        """The report flags the printed star walk roots and renders every section."""
        out = tmp_path / "discrepancies.md"
        assert run(["report", "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith("# TreeSpectra Discrepancy Report")
        assert "**Star walk closing roots flagged:** ✅" in text
        assert "**Derived families failing the oracle:** 0" in text
        assert "## Cumulative multiplicity" in text

    def test_report_uses_configured_tolerance(self, monkeypatch):
        """The report compares with the configured tolerance, like oracle-compare."""
        seen = []

        def spy(a, b, tol):
            seen.append(tol)
            return compare_spectra(a, b, tol)

        monkeypatch.setattr(reporter, "compare_spectra", spy)
        reporter.family_rows()
        assert seen and set(seen) == {COMPARE_TOL}
        assert reporter.COMPARE_TOL is commands.COMPARE_TOL

    def test_report_json(self, tmp_path):
        """JSON report carries one list per section."""
        out = tmp_path / "discrepancies.json"
        assert run(["report", "--format", "json", "--out", str(out)]) == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert set(data) == {"operator_families", "star_walk", "cumulative_closed_form",
                             "anchor_exponent", "endpoint_direction", "degree_normalization",
                             "root_numerators"}
        assert all(row["flagged"] for row in data["star_walk"])
        assert all(row["summed"] != 0 for row in data["cumulative_closed_form"])
