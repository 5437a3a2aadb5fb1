import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = re.search(r"test_criterion_(\d+)", getattr(report, "nodeid", ""))
            if not match:
                continue
            number = int(match.group(1))
            if outcome == "passed" and report.when != "call":
                continue
            verdict = "PASS" if outcome == "passed" else "FAIL"
            if lines.get(number) != f"criterion {number:02d}: FAIL":
                lines[number] = f"criterion {number:02d}: {verdict}"
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
