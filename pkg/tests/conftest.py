from collections import OrderedDict

# criterion number -> list of (label, ok, detail); filled by test_acceptance
ACCEPTANCE: "OrderedDict[int, list]" = OrderedDict()


def record(criterion: int, label: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {criterion} {label}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        failed = [f"{label} ({detail})" for label, good, detail in parts if not good]
        summary = "; ".join(failed) if failed else "; ".join(f"{label}: {detail}" for label, _, detail in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {summary}")
