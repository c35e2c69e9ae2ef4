from hypothesis import settings

settings.register_profile("repo", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repo")

_ACCEPTANCE: list[tuple[int, str, bool]] = []
OUTCOMES: dict[str, str] = {}


def record_criterion(number: int, title: str, passed: bool):
    _ACCEPTANCE.append((number, title, passed))


def pytest_collection_modifyitems(items):
    # acceptance last, so it can reuse the outcomes of the property suites
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if report.when == "call" or report.outcome != "passed":
        OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {title}")
