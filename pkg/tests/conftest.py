import sys
from pathlib import Path

import pytest

from catrewrite.graph import set_graph
from catrewrite.linear import monic_polynomial_relation
from catrewrite.termination import strategy_from_stages

ROOT = Path(__file__).resolve().parent.parent
SYSTEMS = ROOT / "systems"
DATA = Path(__file__).resolve().parent / "data"

FOUR_EDGES = {"f1": ("a", "b"), "f2": ("b", "a"), "f3": ("a", "c"), "f4": ("b", "d")}


def four_graph():
    return set_graph("abcd", FOUR_EDGES)


def four_strategy_1():
    return strategy_from_stages(four_graph(), [["c", "d"], "abcd"], {"a": "f3", "b": "f4"})


def four_strategy_2():
    return strategy_from_stages(four_graph(), [["c", "d"], "bcd", "abcd"], {"a": "f1", "b": "f4"})


def x2_plus_1(max_degree=8):
    return monic_polynomial_relation({0: 1}, 2, max_degree)


@pytest.fixture
def four():
    return four_graph()


@pytest.fixture
def xsq():
    return x2_plus_1()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
