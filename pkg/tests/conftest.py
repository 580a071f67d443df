import random

import pytest
from hypothesis import strategies as st

from cylindric.terms import ONE, ZERO, And, Cyl, Diag, Neg, Or, Var

# acceptance outcomes, filled by pytest_runtest_logreport
_ACCEPTANCE = {}


def term_strategy(n, m, max_depth, max_leaves=12):
    """Hypothesis terms over n and m with cylindrification depth <= max_depth."""
    leaves = [st.builds(Diag, st.integers(0, n - 1), st.integers(0, n - 1)), st.just(ZERO), st.just(ONE)]
    if m:
        leaves.append(st.builds(Var, st.integers(0, m - 1)))
    base = st.one_of(leaves)

    def extend(children, d):
        ops = [
            st.builds(Neg, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
        ]
        if d > 0:
            ops.append(st.builds(Cyl, st.integers(0, n - 1), at_depth(d - 1)))
        return st.one_of(ops)

    def at_depth(d):
        return st.recursive(base, lambda ch: extend(ch, d), max_leaves=max_leaves)

    return at_depth(max_depth)


def random_term(rng: random.Random, n, m, max_depth, size=6):
    """Seeded random term, used where hypothesis shrinking is not wanted."""
    if size <= 1 or rng.random() < 0.2:
        choice = rng.randrange(3 if m else 2)
        if choice == 0:
            return Diag(rng.randrange(n), rng.randrange(n))
        if choice == 1:
            return rng.choice([ZERO, ONE, Diag(rng.randrange(n), rng.randrange(n))])
        return Var(rng.randrange(m))
    op = rng.randrange(4 if max_depth > 0 else 3)
    if op == 0:
        return Neg(random_term(rng, n, m, max_depth, size - 1))
    if op == 3:
        return Cyl(rng.randrange(n), random_term(rng, n, m, max_depth - 1, size - 1))
    left = random_term(rng, n, m, max_depth, size // 2)
    right = random_term(rng, n, m, max_depth, size - size // 2)
    return And(left, right) if op == 1 else Or(left, right)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (outcome, duration) in sorted(_ACCEPTANCE.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({duration:.1f}s)")


@pytest.fixture
def rng():
    return random.Random(20240607)
