"""Acceptance battery: one test per criterion on the full-size battery.

Each test prints its verdict line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import pytest

from finspan import battery

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number,name", [(n, fn.__name__) for n, fn in battery.CRITERIA],
                         ids=[fn.__name__ for _, fn in battery.CRITERIA])
def test_criterion(number, name):
    result = battery.run(number, "full")
    line = f"{result.line()}  [{result.seconds:.1f}s]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, result.detail
