"""Slab-parallel search over the range of one objective.

The range ``[L, U]`` of the last objective over the front is split into
integer slabs; each slab is solved independently as a full problem with the
slab as two extra rows, and the union is filtered.  ``U`` comes from the
front of the problem with one objective fewer (ties broken on the dropped
objective), computed the same way one level down.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .ipsolve import IpCounter
from .model import MoipInstance, ParetoArchive, nondominated_filter
from .oiplex import OipSpec, identity, oip_filter
from .recursion import RecursionContext, SolveStats, TimeLimitExceeded

INF = math.inf


@dataclass(frozen=True)
class SlabPartition:
    lower: int
    upper: int
    cuts: tuple  # b_0 = lower - 1 < b_1 < ... < b_last = upper

    def __post_init__(self):
        c = self.cuts
        if c[0] != self.lower - 1 or c[-1] != self.upper:
            raise ValueError("cuts must start at lower - 1 and end at upper")
        if any(a >= b for a, b in zip(c, c[1:])):
            raise ValueError("cuts must be strictly increasing")

    def slabs(self) -> list:
        """Inclusive ``(lo, hi)`` ranges."""
        return [(a + 1, b) for a, b in zip(self.cuts, self.cuts[1:])]

    def slab_of(self, value: int) -> int:
        for i, (lo, hi) in enumerate(self.slabs()):
            if lo <= value <= hi:
                return i
        raise ValueError(f"{value} outside {self.lower}..{self.upper}")


def make_slabs(lower: int, upper: int, t: int) -> SlabPartition:
    if lower > upper:
        raise ValueError("empty range")
    if t < 1:
        raise ValueError("need at least one slab")
    width = upper - lower + 1
    cuts = [lower - 1]
    for i in range(1, t + 1):
        # round half up of i * width / t, exactly
        b = upper if i == t else lower - 1 + (2 * i * width + t) // (2 * t)
        if b > cuts[-1]:
            cuts.append(b)
    return SlabPartition(lower, upper, tuple(cuts))


class _Run:
    def __init__(self, inst: MoipInstance, t: int, deadline, use_cache: bool):
        self.inst, self.t, self.deadline, self.use_cache = inst, t, deadline, use_cache
        self.n = inst.num_objectives
        self.counter = IpCounter()
        self.contexts: list[RecursionContext] = []
        self.pool = ThreadPoolExecutor(max_workers=t) if t > 1 else None

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimitExceeded()

    def spec(self, m: int) -> OipSpec:
        return OipSpec(identity(self.n), m, (INF,) * (self.n - m))

    def solve_full(self, inst: MoipInstance, m: int) -> set:
        ctx = RecursionContext(inst, use_cache=self.use_cache, counter=self.counter,
                               deadline=self.deadline)
        self.contexts.append(ctx)
        return ctx.solve_oip(self.spec(m))

    def range_of(self, m: int):
        """(L, U) for objective ``m`` (1-based), or None if infeasible."""
        self.check()
        res = self.inst.compiled.solve(m - 1, counter=self.counter)
        if res is None:
            return None
        upper = max(v[m - 1] for v in self.front(m - 1))
        return res[0], upper

    def front(self, m: int) -> set:
        """Solutions with objectives 1..m free and m+1..n as tie-breakers."""
        if m == 1:
            return self.solve_full(self.inst, 1)
        rng = self.range_of(m)
        if rng is None:
            return set()
        part = make_slabs(rng[0], rng[1], self.t)
        jobs = []
        for lo, hi in part.slabs():
            rows = (self.inst.objective_row(m, "GE", lo), self.inst.objective_row(m, "LE", hi))
            jobs.append(self.inst.with_rows(rows, name=f"{self.inst.name}[{lo},{hi}]"))
        if self.pool is None:
            parts = [self.solve_full(j, m) for j in jobs]
        else:
            parts = list(self.pool.map(lambda j: self.solve_full(j, m), jobs))
        union = set().union(*parts)
        return oip_filter(union, self.spec(m))


def objective_range(inst: MoipInstance, obj_index: int | None = None, t: int = 1):
    """Range of objective ``obj_index`` (default the last) over the front with the
    objectives after it used only as tie-breakers; None for an infeasible instance."""
    n = inst.num_objectives
    m = n if obj_index is None else obj_index
    if not 2 <= m <= n:
        raise ValueError("objective index must be in 2..n")
    run = _Run(inst, t, None, True)
    try:
        return run.range_of(m)
    finally:
        if run.pool is not None:
            run.pool.shutdown()


def run_epp(inst: MoipInstance, t: int, *, time_limit_s: float | None = None,
            use_cache: bool = True) -> ParetoArchive:
    if t < 1:
        raise ValueError("need at least one thread")
    t0 = time.perf_counter()
    deadline = None if time_limit_s is None else time.monotonic() + time_limit_s
    run = _Run(inst, t, deadline, use_cache)
    try:
        front = nondominated_filter(run.front(inst.num_objectives))
    finally:
        if run.pool is not None:
            run.pool.shutdown()
    witnesses = {}
    for ctx in run.contexts:
        for v, w in ctx.archive.entries:
            witnesses.setdefault(v, w)
    out = ParetoArchive((v, witnesses.get(v)) for v in sorted(front))
    stats = SolveStats()
    for ctx in run.contexts:
        stats.add(ctx.stats)
    stats.ips_solved = run.counter.value
    stats.wall_ms = (time.perf_counter() - t0) * 1000
    out.stats = stats
    return out
