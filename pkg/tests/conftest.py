import hypothesis.strategies as st
from hypothesis import settings

from signpotent.sign_algebra import SignMatrix

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


def proper_matrices(min_n=1, max_n=5):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.sampled_from([0, 1, 2]), min_size=n, max_size=n), min_size=n, max_size=n
        ).map(SignMatrix.from_codes)
    )


def square_pair(max_n=4):
    def pair(n):
        row = st.lists(st.sampled_from([0, 1, 2]), min_size=n, max_size=n)
        mat = st.lists(row, min_size=n, max_size=n).map(SignMatrix.from_codes)
        return st.tuples(mat, mat)

    return st.integers(1, max_n).flatmap(pair)


# PASS/FAIL lines written by the acceptance suite, repeated in the summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
