from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from potentia.exactla import RatMatrix, rank

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def square(n, elems=small_ints):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


def invertible(n, elems=small_ints):
    return square(n, elems).filter(lambda m: rank(RatMatrix.from_dense(m)) == n)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
