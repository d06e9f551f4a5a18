"""Shared pytest plumbing: the acceptance-criterion reporter."""

ACCEPTANCE_RESULTS = []


def record_criterion(name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"ACCEPTANCE {status} - {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
