"""Prints one line per acceptance criterion at the end of the run."""

_results: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if call.excinfo is None:
        _results[number] = (title, "PASS", detail)
    else:
        _results[number] = (title, "FAIL", call.excinfo.exconly().splitlines()[0][:160])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, status, detail = _results[number]
        line = f"criterion {number:2d} [{status}] {title}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
