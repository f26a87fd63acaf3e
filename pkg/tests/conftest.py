"""Independent oracles shared by the test modules.

Nothing here imports the construction it is used to check.
"""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def brute_eta24(order):
    """prod_{l<=order} (1 - t^l)^-24 expanded with binomial series, integer lists."""
    out = [1] + [0] * order
    for l in range(1, order + 1):
        factor = [0] * (order + 1)
        for k in range(order // l + 1):
            factor[l * k] = comb(k + 23, 23)
        out = [sum(out[i] * factor[n - i] for i in range(n + 1)) for n in range(order + 1)]
    return out


def brute_sigma(d):
    return sum(k for k in range(1, d + 1) if d % k == 0)


def partitions_by_enumeration(n, max_part=None):
    """Number of partitions of n, by recursion over the largest part."""
    if max_part is None:
        max_part = n
    if n == 0:
        return 1
    return sum(partitions_by_enumeration(n - k, k) for k in range(1, min(n, max_part) + 1))


def conv(a, b, n):
    """Single coefficient of a plain-list Cauchy product."""
    return sum(a[i] * b[n - i] for i in range(n + 1) if i < len(a) and n - i < len(b))


@pytest.fixture(scope="session")
def eta_oracle():
    return brute_eta24(40)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and getattr(mod, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
