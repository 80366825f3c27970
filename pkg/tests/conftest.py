import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    found = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if getattr(report, "when", "call") != "call" and outcome != "error":
                continue
            m = re.search(r"test_acceptance\.py::test_(P\d+)_(\w+)", nodeid)
            if m:
                label = "PASS" if outcome == "passed" else "FAIL"
                found[m.group(1)] = (label, m.group(2).replace("_", " "))
    if found:
        terminalreporter.write_sep("-", "acceptance criteria")
        for key in sorted(found, key=lambda k: int(k[1:])):
            label, desc = found[key]
            terminalreporter.write_line(f"{key} {label}  {desc}")
