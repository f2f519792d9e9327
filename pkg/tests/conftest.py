import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str) -> None:
    CRITERIA[number] = (passed, detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
