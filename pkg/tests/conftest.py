from __future__ import annotations

import pytest

from adjoint_sections.rootsys import all_types, build_root_system


def _ids(types):
    return [f"{f}{n}" for f, n in types]


ALL_TYPES = all_types()
SMALL_TYPES = [t for t in ALL_TYPES if t[1] <= 6]


@pytest.fixture(params=ALL_TYPES, ids=_ids(ALL_TYPES))
def any_rs(request):
    return build_root_system(*request.param)


@pytest.fixture(params=SMALL_TYPES, ids=_ids(SMALL_TYPES))
def small_rs(request):
    return build_root_system(*request.param)


# acceptance criteria record one line each; they are echoed in the terminal summary
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def criterion():
    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
        ACCEPTANCE_LINES[line] = k
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line, _ in sorted(ACCEPTANCE_LINES.items(), key=lambda kv: kv[1]):
            terminalreporter.write_line(line)
