import pytest

from dslab.psifun import PsiFunction

# criterion number -> [(clause, ok, detail)], filled by test_acceptance.py
ACCEPTANCE = {}


def record(k, clause, ok, detail=""):
    ACCEPTANCE.setdefault(k, []).append((clause, bool(ok), detail))
    return ok


@pytest.fixture
def half():
    return PsiFunction.constant("1/2")


@pytest.fixture
def recip():
    return PsiFunction.reciprocal(1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        clauses = ACCEPTANCE[k]
        status = "PASS" if all(ok for _, ok, _ in clauses) else "FAIL"
        parts = [f"{name}={'ok' if ok else 'FAILED'}" + (f" ({detail})" if detail else "")
                 for name, ok, detail in clauses]
        terminalreporter.write_line(f"CRITERION {k}: {status} | " + "; ".join(parts))
