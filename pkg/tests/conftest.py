def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance")
        for i in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[i])
