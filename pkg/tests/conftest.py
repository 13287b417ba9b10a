import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from asbpir.field import field_of_order
from asbpir.linalg import GeneratorMatrix, Matrix

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def gm(rows, q=2) -> GeneratorMatrix:
    return GeneratorMatrix(rows, field_of_order(q))


def span_set(m: Matrix) -> set[tuple[int, ...]]:
    """Every linear combination of the rows of ``m``, by direct enumeration."""
    F = m.field
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=m.rows):
        acc = np.zeros(m.cols, dtype=np.int64)
        for c, row in zip(coeffs, m.entries):
            acc = F.add_table[acc, F.mul_table[c, row]]
        out.add(tuple(int(x) for x in acc))
    return out


@pytest.fixture
def gf2():
    return field_of_order(2)


@pytest.fixture
def gf3():
    return field_of_order(3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
