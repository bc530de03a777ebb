import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


class Recorder:
    def __init__(self, lines: list):
        self.lines = lines

    def __call__(self, number: int, title: str, ok: bool, detail: str = "") -> None:
        verdict = "PASS" if ok else "FAIL"
        line = f"criterion {number:>2}: {verdict}  {title}"
        if detail:
            line += f"  [{detail}]"
        self.lines.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def criterion(request):
    return Recorder(request.config.stash[_LINES_KEY])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
