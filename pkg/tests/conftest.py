import pytest

from orderspec import expr as ex
from orderspec.perm import Permutation, generate


_groups = {}


def group(text, cap=2_000_000):
    """Enumerate an expression once per test session."""
    if text not in _groups:
        _groups[text] = ex.evaluate_concrete(ex.parse_expr(text), cap=cap)
    return _groups[text]


@pytest.fixture(scope="session")
def get_group():
    return group


def quaternion_group():
    """Q8 in its regular representation on 8 points.

    Points 0..7 stand for 1, i, j, k, -1, -i, -j, -k; the generators are
    right multiplication by i and by j.
    """
    table = {  # unit * unit for 1, i, j, k
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }

    def mul(a, b):
        u, s = table[(a % 4, b % 4)]
        sign = s * (-1 if a >= 4 else 1) * (-1 if b >= 4 else 1)
        return u if sign == 1 else u + 4

    gens = [Permutation(tuple(mul(x, g) for x in range(8))) for g in (1, 2)]
    return generate(gens, label="Q8")


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
