import numpy as np
import pytest

from howemoore.lie import build_root_system

# every supported (series, rank) with a Weyl group small enough for exhaustive tests
SMALL_SYSTEMS = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("C", 2), ("C", 3),
    ("D", 3), ("D", 4), ("G", 2),
]
RANK_LE_3 = [s for s in SMALL_SYSTEMS if s[1] <= 3]


def system_id(s):
    return f"{s[0]}{s[1]}"


@pytest.fixture(params=SMALL_SYSTEMS, ids=system_id)
def small_rs(request):
    return build_root_system(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def regular_angles(rs, rng, count, denominator=997):
    """Seeded rational angle vectors whose points are regular (no root value equal to 1)."""
    from fractions import Fraction

    from howemoore.lie import angle_point, stabilizer_data

    out = []
    while len(out) < count:
        theta = [Fraction(int(k), denominator) for k in rng.integers(1, denominator, rs.rank)]
        t = angle_point(rs, theta)
        if stabilizer_data(rs, t).regular:
            out.append(t)
    return out


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
