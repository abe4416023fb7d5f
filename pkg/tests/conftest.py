def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance-criteria pass/fail lines after the test run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
