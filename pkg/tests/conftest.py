"""Replay acceptance verdict lines after the run summary.

pytest captures test output at the file-descriptor level, so the
``acceptance: ...`` lines printed by test_acceptance.py would otherwise
only surface for failing tests.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "_VERDICTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)
