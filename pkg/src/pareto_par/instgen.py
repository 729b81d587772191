"""Seeded generators for knapsack, assignment and travelling-salesman MOIPs.

Draw order is part of the contract (it fixes the bytes of every generated
file):

* knapsack: ``size`` weights, then for each objective ``size`` profits;
* assignment: for each objective, costs row-major over (agent, task);
* tsp: for each objective, ``x`` then ``y`` of every city.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BINARY, MoipInstance, Row, integer
from .rng import CounterRng

FAMILIES = ("knapsack", "assignment", "tsp")


@dataclass(frozen=True)
class GenSpec:
    family: str
    size: int
    num_objectives: int
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.size < 1:
            raise ValueError("size must be positive")
        if self.family == "tsp" and self.size < 3:
            raise ValueError("tsp needs at least 3 cities")
        if self.num_objectives < 2:
            raise ValueError("need at least two objectives")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def name(self) -> str:
        return f"{self.family}{self.size}_o{self.num_objectives}_s{self.seed}"

    @property
    def filename(self) -> str:
        return self.name + ".moip"


def gen_knapsack(spec: GenSpec) -> MoipInstance:
    if spec.family != "knapsack":
        raise ValueError("not a knapsack spec")
    rng = CounterRng(spec.seed)
    m = spec.size
    weights = tuple(rng.randint(60, 100) for _ in range(m))
    # profits are maximised, so store them negated
    objectives = tuple(tuple(-rng.randint(60, 100) for _ in range(m))
                       for _ in range(spec.num_objectives))
    cap = Row(weights, "LE", sum(weights) // 2)
    return MoipInstance(objectives, (cap,), (BINARY,) * m, name=spec.name)


def gen_assignment(spec: GenSpec) -> MoipInstance:
    if spec.family != "assignment":
        raise ValueError("not an assignment spec")
    rng = CounterRng(spec.seed)
    m = spec.size
    objectives = tuple(tuple(rng.randint(0, 20) for _ in range(m * m))
                       for _ in range(spec.num_objectives))
    rows = []
    for i in range(m):
        rows.append(Row(tuple(1 if v // m == i else 0 for v in range(m * m)), "EQ", 1))
    for j in range(m):
        rows.append(Row(tuple(1 if v % m == j else 0 for v in range(m * m)), "EQ", 1))
    return MoipInstance(objectives, tuple(rows), (BINARY,) * (m * m), name=spec.name)


def rounded_distance(a: tuple, b: tuple) -> int:
    """Euclidean distance rounded to the nearest integer, in exact arithmetic."""
    d2 = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
    r = math.isqrt(d2)
    # sqrt(d2) >= r + 1/2  <=>  d2 >= r*r + r + 1/4  <=>  d2 > r*r + r
    return r + 1 if d2 > r * r + r else r


def arcs(m: int) -> list:
    return [(i, j) for i in range(m) for j in range(m) if i != j]


def tsp_coordinates(spec: GenSpec) -> list:
    rng = CounterRng(spec.seed)
    return [[(rng.randint(0, 1000), rng.randint(0, 1000)) for _ in range(spec.size)]
            for _ in range(spec.num_objectives)]


def gen_tsp(spec: GenSpec) -> MoipInstance:
    """Miller-Tucker-Zemlin model with city 0 as the depot.

    Variables: one binary per ordered arc (i, j), then one order variable per
    city (the depot's is fixed to 0).  Rows: out-degree and in-degree
    equalities, ``u_i - u_j + m x_ij <= m - 1`` for every arc into a
    non-depot city, and ``u_i >= 1`` for each non-depot city.
    """
    if spec.family != "tsp":
        raise ValueError("not a tsp spec")
    m = spec.size
    coords = tsp_coordinates(spec)
    arc_list = arcs(m)
    na = len(arc_list)
    c = na + m
    objectives = tuple(
        tuple(rounded_distance(pts[i], pts[j]) for i, j in arc_list) + (0,) * m
        for pts in coords)

    def row(terms, rel, rhs):
        coeffs = [0] * c
        for idx, a in terms:
            coeffs[idx] += a
        return Row(tuple(coeffs), rel, rhs)

    rows = []
    for i in range(m):
        rows.append(row([(k, 1) for k, (a, _) in enumerate(arc_list) if a == i], "EQ", 1))
    for j in range(m):
        rows.append(row([(k, 1) for k, (_, b) in enumerate(arc_list) if b == j], "EQ", 1))
    for k, (i, j) in enumerate(arc_list):
        if j != 0:
            rows.append(row([(na + i, 1), (na + j, -1), (k, m)], "LE", m - 1))
    for i in range(1, m):
        rows.append(row([(na + i, 1)], "GE", 1))
    kinds = (BINARY,) * na + (integer(0, 0),) + (integer(0, m - 1),) * (m - 1)
    return MoipInstance(objectives, tuple(rows), kinds, name=spec.name)


_GENERATORS = {"knapsack": gen_knapsack, "assignment": gen_assignment, "tsp": gen_tsp}


def generate(spec: GenSpec) -> MoipInstance:
    return _GENERATORS[spec.family](spec)
