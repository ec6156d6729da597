from fractions import Fraction as F
from itertools import permutations, product

import pytest
from hypothesis import strategies as st

from probderange.moments import MomentProfile
from probderange.verify import SAMPLE_CATALOG

CATALOG = SAMPLE_CATALOG + (
    MomentProfile.constant(F(5, 2)),
    MomentProfile.gamma(1, 1),
    MomentProfile.poisson(1),
)


def rationals(lo=-2, hi=2, max_den=12, nonzero=False):
    s = st.builds(
        lambda num, den: F(num, den),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    ).filter(lambda q: lo <= q <= hi)
    return s.filter(bool) if nonzero else s


def derangements(n):
    return sum(1 for p in permutations(range(n)) if all(p[i] != i for i in range(n)))


def set_partitions(items):
    # yields each partition of `items` as a list of blocks
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def ordered_partitions(n):
    # surjections [n] -> [k] counted over every k
    total = 0
    for k in range(n + 1):
        total += sum(1 for f in product(range(k), repeat=n) if len(set(f)) == k)
    return total


def interpolate(xs, ys):
    """Coefficients (low degree first) of the polynomial through the points."""
    n = len(xs)
    coeffs = [F(0)] * n
    for i in range(n):
        basis = [F(1)]
        denom = F(1)
        for j in range(n):
            if j == i:
                continue
            basis = [F(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xs[j] * basis[d + 1]
            denom *= xs[i] - xs[j]
        for d in range(n):
            coeffs[d] += ys[i] * basis[d] / denom
    return coeffs


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
        ACCEPTANCE[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
