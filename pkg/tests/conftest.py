import numpy as np
import pytest

CRITERIA = {
    "c01": "GHZ reduction spectrum and support",
    "c02": "W reduction spectrum and dominant eigenvector",
    "c03": "three-element POVM completeness, positivity, probabilities on |1>",
    "c04": "partial trace equals unread measurement then trace",
    "c05": "erasure by channel and by measure-rotate",
    "c06": "entropy never drops under unread projective measurement",
    "c07": "entropy reference values",
    "c08": "Landauer cost of one bit at 300 K",
    "c09": "demon ledger obeys the second law",
    "c10": "exact energy bookkeeping of the absorbing atom",
    "c11": "Jacobi eigensolver reconstruction and runtime",
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def _criterion(nodeid: str) -> str | None:
    if "test_acceptance.py::" not in nodeid:
        return None
    name = nodeid.split("::")[-1]
    key = name[len("test_"):len("test_") + 3]
    return key if key in CRITERIA else None


def pytest_terminal_summary(terminalreporter):
    outcome = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call" and status == "passed":
                continue
            key = _criterion(rep.nodeid)
            if key is None:
                continue
            ok = status == "passed"
            outcome[key] = outcome.get(key, True) and ok
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for key, text in CRITERIA.items():
        if key not in outcome:
            continue
        mark = "PASS" if outcome[key] else "FAIL"
        terminalreporter.write_line(f"{mark}  {key[1:]:>2}  {text}")
