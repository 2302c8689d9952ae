import os

from hypothesis import HealthCheck, settings, strategies as st

from hotkit.boolfn import BoolFn
from hotkit.typeterm import type_catalog

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def functions(min_n=1, max_n=5):
    """Arbitrary elements of F_n."""
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.integers(0, (1 << ((1 << n) - 1)) - 1).map(lambda r: BoolFn(n, (r << 1) | 1)))


def functions_n(n):
    return st.integers(0, (1 << ((1 << n) - 1)) - 1).map(lambda r: BoolFn(n, (r << 1) | 1))


def types(min_n=1, max_n=5):
    """Elements of T_n."""
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.sampled_from(type_catalog(n).functions()))


def permutations(n):
    return st.permutations(list(range(1, n + 1))).map(tuple)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
