from __future__ import annotations

import itertools

import pytest

from pareto_par.instgen import GenSpec, generate
from pareto_par.model import BINARY, MoipInstance, Row, integer

APPENDIX = [(50, 24, 44), (46, 41, 41), (37, 46, 37), (37, 44, 42), (32, 39, 54)]
# three extra points, each dominated by one of the five above
APPENDIX_PADDING = [(51, 25, 45), (47, 42, 41), (60, 60, 60)]


def selection_instance(vectors, name="selection") -> MoipInstance:
    """One binary per vector and a row forcing exactly one of them on."""
    m = len(vectors)
    n = len(vectors[0])
    objectives = tuple(tuple(v[i] for v in vectors) for i in range(n))
    return MoipInstance(objectives, (Row((1,) * m, "EQ", 1),), (BINARY,) * m, name=name)


def single_point_instance() -> MoipInstance:
    # x0 = 2, x1 = 1 is the only integer point
    rows = (Row((1, 0), "EQ", 2), Row((0, 1), "GE", 1))
    return MoipInstance(((1, 2), (3, -1), (0, 5)), rows, (integer(0, 3), integer(0, 1)),
                        name="point")


def infeasible_instance() -> MoipInstance:
    rows = (Row((1, 1), "GE", 3),)
    return MoipInstance(((1, 0), (0, 1), (1, 1)), rows, (BINARY, BINARY), name="empty")


def brute_vectors(inst: MoipInstance) -> set:
    """Enumerate the full box with itertools, no pruning."""
    ranges = [range(v.lb, v.ub + 1) for v in inst.var_kinds]
    out = set()
    for x in itertools.product(*ranges):
        if all(r.holds(x) for r in inst.rows):
            out.add(tuple(sum(a * b for a, b in zip(o, x)) for o in inst.objectives))
    return out


@pytest.fixture(scope="session")
def knapsack_fixture():
    return generate(GenSpec("knapsack", 10, 3, 1))


@pytest.fixture
def appendix_instance():
    return selection_instance(APPENDIX + APPENDIX_PADDING, name="appendix8")
