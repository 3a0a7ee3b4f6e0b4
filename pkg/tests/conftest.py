from fractions import Fraction

import pytest

from extgini.pairing import PairingFunction
from extgini.streams import Alphabet, Stream


def brute_pair_sum(values):
    """Independent oracle: Fraction double loop, no integer scaling."""
    return sum((abs(a - b) for a in values for b in values), Fraction(0))


@pytest.fixture
def s235():
    return Stream.from_values([2, 3, 5])


@pytest.fixture
def swap2():
    return PairingFunction.all_swap(2)


@pytest.fixture
def canonical_instance():
    from extgini.axioms import TransferInstance

    return TransferInstance(
        Stream.from_values([1, 4], alphabet=Alphabet([1, 2, 3, 4])),
        Stream.from_values([2, 3], alphabet=Alphabet([1, 2, 3, 4])),
        PairingFunction.all_swap(2),
    )


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; the summary prints one line per criterion."""
    name = request.node.get_closest_marker("acceptance").args[0]
    info = {"detail": ""}
    ACCEPTANCE[name] = (False, "")
    yield info
    rep = getattr(request.node, "rep_call", None)
    ACCEPTANCE[name] = (rep is not None and rep.passed, info["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
