import pytest

from symplectic_factor import elimination
from symplectic_factor.rings import ComplexApprox, IntegersMod, PrimeField, Rationals, SampledFunctions


@pytest.fixture(autouse=True, scope="session")
def strict_elimination():
    """Every elimination in the suite asserts its structural milestones."""
    elimination.set_strict(True)
    yield
    elimination.set_strict(False)


EXACT_RINGS = [Rationals(), PrimeField(7), IntegersMod(12)]
ALL_RINGS = EXACT_RINGS + [ComplexApprox(), SampledFunctions(9)]


def ring_id(ctx):
    return repr(ctx)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
