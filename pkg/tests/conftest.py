import pytest


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line outside pytest's capture, then assert."""

    def _report(label: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
        assert ok, detail

    return _report
