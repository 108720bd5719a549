def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            nid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nid:
                continue
            if rep.when != "call":
                continue
            label = nid.split("::")[-1]
            lines[label] = "PASS" if rep.passed else "FAIL"
    if lines:
        terminalreporter.section("acceptance criteria")
        for label in sorted(lines):
            terminalreporter.write_line(f"{lines[label]}  {label}")
