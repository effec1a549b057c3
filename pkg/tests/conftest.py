def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, _ in test_acceptance.CRITERIA:
        if number in test_acceptance.RESULTS:
            terminalreporter.write_line(test_acceptance.summary_line(number, title))
