# Root conftest.py — lets pytest collect the package and CLI test folders
# without __init__.py files, and gates the slow oracle runs.
import os
import sys

import pytest

ROOT = os.path.dirname(__file__)

# CLI modules import their siblings directly (from commands import ...)
cli_path = os.path.join(ROOT, "services", "cli")
if cli_path not in sys.path:
    sys.path.insert(0, cli_path)

packages_path = os.path.join(ROOT, "packages")
if packages_path not in sys.path:
    sys.path.insert(0, packages_path)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: large dense-oracle solves; run with TREESPECTRA_SLOW=1"
    )


def pytest_collection_modifyitems(config, items):
    if os.getenv("TREESPECTRA_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set TREESPECTRA_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
