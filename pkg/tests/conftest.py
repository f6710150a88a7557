import pytest

_RESULTS = []


class Recorder:
    """Collects one pass/fail line per acceptance criterion."""

    def __call__(self, cid: str, passed: bool, detail: str) -> bool:
        _RESULTS.append((cid, bool(passed), detail))
        return bool(passed)


@pytest.fixture
def criterion():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, detail in sorted(_RESULTS, key=lambda r: [int(t) if t.isdigit() else t for t in _split(r[0])]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {cid:<4} {detail}")
    n_ok = sum(ok for _, ok, _ in _RESULTS)
    terminalreporter.write_line(f"{n_ok}/{len(_RESULTS)} criteria passed")


def _split(cid):
    head = cid.rstrip("abcdefghijklmnopqrstuvwxyz")
    return [head, cid[len(head):]]
