import time

import pytest
from hypothesis import HealthCheck, settings

from higherdirac.dirac import classify
from higherdirac.sampling import random_isotropic, rng_from

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERIA_LINES = []


def report(number, ok, detail=""):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    CRITERIA_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES):
            terminalreporter.write_line(line)


STANDARD_PER_PAIR = 1000


@pytest.fixture(scope="session")
def standard_corpus():
    """1000 seeded random standard isotropic subspaces for every (n, k), 2 ≤ n ≤ 6, with their flags."""
    start = time.perf_counter()
    out = {}
    for n in range(2, 7):
        for k in range(1, n):
            rng = rng_from(1000 * n + k)
            items = []
            for _ in range(STANDARD_PER_PAIR):
                L = random_isotropic(rng, n, k, "standard")
                items.append((L, classify(L)))
            out[(n, k)] = items
    out_time = time.perf_counter() - start
    return out, out_time


@pytest.fixture(scope="session")
def nonstandard_corpus():
    """At least 1000 random non-standard isotropic subspaces spread over (n, k) with n ≤ 6."""
    pairs = [(n, k) for n in range(3, 7) for k in range(2, n)]
    per = -(-1000 // len(pairs)) + 20
    out = []
    for n, k in pairs:
        rng = rng_from(7000 + 10 * n + k)
        for _ in range(per):
            L = random_isotropic(rng, n, k, "nonstandard")
            out.append((L, classify(L)))
    return out
