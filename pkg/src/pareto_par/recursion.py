"""Recursive solver for ordered, constrained lexicographic problems.

``RecursionContext.solve_oip`` returns exactly the solution set of an
``OipSpec`` over the instance's feasible region.  A problem with free prefix
``k > 1`` is solved by repeatedly solving its ``k - 1`` restriction with an
upper bound on the objective at position ``k``, lowering that bound to one
below the largest value attained by the previous batch, until the
restriction becomes infeasible.  ``k <= 1`` is a single lexicographic solve.

Internally a subproblem is ``(perm, k, upper)`` where ``upper`` is a
per-objective bound vector, so bounds received from other threads can sit on
any objective, free or not.  A frame of the recursion is one active
``k``-level loop; bounds received while it runs are attached to it as extra
constraints covering its whole subtree.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, fields

from .ipsolve import IpCounter
from .model import MoipInstance, ParetoArchive
from .oiplex import OipSpec, identity

INF = math.inf


class TimeLimitExceeded(RuntimeError):
    pass


class Aborted(RuntimeError):
    """Raised in a worker when a sibling worker has failed."""


@dataclass
class SolveStats:
    ips_solved: int = 0
    cache_hits: int = 0
    bounds_in: int = 0
    bounds_out: int = 0
    attained_in: int = 0
    wall_ms: float = 0.0

    def add(self, other: "SolveStats") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_text(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)}\n" for f in fields(self))


class RelaxationCache:
    """Solved subproblems keyed by the order of their bounded positions."""

    def __init__(self):
        self._entries: dict[tuple, list] = {}

    def __len__(self) -> int:
        return sum(len(v) for v in self._entries.values())

    def store(self, suffix: tuple, upper: tuple, result: frozenset) -> None:
        self._entries.setdefault(tuple(suffix), []).append((tuple(upper), result))

    def lookup(self, suffix: tuple, upper: tuple):
        """A cached set for a problem with the same suffix whose bounds are all
        at least ``upper`` and whose every vector already meets ``upper``."""
        for cub, res in self._entries.get(tuple(suffix), ()):
            if all(c >= u for c, u in zip(cub, upper)) and all(
                    all(v[i] <= u for i, u in enumerate(upper)) for v in res):
                return res
        return None


def relaxation_lookup(cache: RelaxationCache, spec: OipSpec):
    # cache keys use 0-based objective ids
    suffix = tuple(o - 1 for o in spec.perm[spec.free_prefix:])
    return cache.lookup(suffix, spec.objective_bounds())


class _Frame:
    __slots__ = ("level", "obj", "bound", "attained", "extra", "upper_in", "known_max",
                 "boxed", "impure")

    def __init__(self, level, obj, upper_in, impure):
        self.level = level
        self.obj = obj
        self.bound = INF
        self.attained = None
        self.extra = {}
        self.upper_in = upper_in
        # componentwise max over vectors found (or certified by others) in this frame
        self.known_max = None
        # holds a received bound on an objective other than its own
        self.boxed = False
        # its subproblem was narrowed by bounds received above it
        self.impure = impure


def _vmax(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return tuple(max(x, y) for x, y in zip(a, b))


def _set_max(vs):
    out = None
    for v in vs:
        out = _vmax(out, v)
    return out


class _TeeCounter:
    def __init__(self, stats: SolveStats, shared: IpCounter | None):
        self.stats, self.shared = stats, shared

    def bump(self, k: int = 1) -> None:
        self.stats.ips_solved += k
        if self.shared is not None:
            self.shared.bump(k)


class RecursionContext:
    """State of one solver thread: its permutation, archive, cache and stats."""

    def __init__(self, inst: MoipInstance, perm=None, *, use_cache: bool = True, hooks=None,
                 counter: IpCounter | None = None, deadline: float | None = None,
                 stop: threading.Event | None = None):
        self.inst = inst
        self.cm = inst.compiled
        self.n = inst.num_objectives
        self.perm = tuple(perm) if perm is not None else identity(self.n)
        self.archive = ParetoArchive()
        self.cache = RelaxationCache() if use_cache else None
        self.hooks = hooks
        self.stats = SolveStats()
        self.deadline = deadline
        self.stop = stop
        self.stack: list[_Frame] = []
        self.epoch = 0
        self._counter = _TeeCounter(self.stats, counter)

    # public entry point

    def solve_oip(self, spec: OipSpec) -> set:
        if spec.n != self.n:
            raise ValueError("spec size does not match the instance")
        perm0 = tuple(o - 1 for o in spec.perm)
        return set(self._solve(perm0, spec.free_prefix, spec.objective_bounds())[0])

    # recursion

    def _check(self):
        if self.stop is not None and self.stop.is_set():
            raise Aborted()
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimitExceeded()

    def _solve(self, perm0: tuple, k: int, upper: tuple):
        """Returns the solution set and its componentwise max (None when empty)."""
        suffix = perm0[k:]
        if self.cache is not None:
            hit = self.cache.lookup(suffix, upper)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit, _set_max(hit)
        self._check()
        if k <= 1:
            res = self.cm.solve_lex(perm0, upper, self._counter)
            if res is None:
                out = frozenset()
            else:
                out = frozenset([res[0]])
                self.archive.insert(res[0], res[1])
            if self.cache is not None:
                self.cache.store(suffix, upper, out)
            return out, (res[0] if res else None)

        obj = perm0[k - 1]
        frame = _Frame(k, obj, upper, any(f.boxed or f.impure for f in self.stack))
        self.stack.append(frame)
        epoch0 = self.epoch
        found = set()
        try:
            self._boundary(frame)
            while True:
                batch, top = self._solve(perm0, k - 1, self._effective(frame))
                if top is None:
                    break
                found |= batch
                frame.known_max = _vmax(frame.known_max, top)
                # top also covers vectors other threads certified for this child
                frame.attained = top[obj]
                frame.bound = min(frame.bound, frame.attained - 1)
                self._boundary(frame)
        finally:
            self.stack.pop()
        result = frozenset(found)
        if self.cache is not None and self.epoch == epoch0:
            self.cache.store(suffix, upper, result)
        return result, frame.known_max

    def _effective(self, frame: _Frame) -> tuple:
        eff = list(frame.upper_in)
        if frame.bound < eff[frame.obj]:
            eff[frame.obj] = frame.bound
        # bounds on a frame's own objective wait for its next loop boundary
        for f in self.stack:
            for o, v in f.extra.items():
                if o != f.obj and v < eff[o]:
                    eff[o] = v
            if f is frame:
                break
        return tuple(eff)

    # sharing support

    def _boundary(self, frame: _Frame) -> None:
        if self.hooks is None:
            return
        self._check()
        self.hooks.exchange(self)
        v = frame.extra.get(frame.obj)
        if v is not None and v < frame.bound:
            frame.bound = v
        self.hooks.publish(self)

    def frame_at(self, position: int):
        for f in self.stack:
            if f.level == position:
                return f
        return None

    @property
    def free_prefix(self) -> int:
        """Free prefix of the subproblem the innermost frame is about to solve."""
        return self.stack[-1].level - 1 if self.stack else self.n

    def current_bound(self, position: int, obj: int):
        """Tightest bound on 0-based ``obj`` in force throughout the frame at ``position``."""
        cur = INF
        for f in self.stack:
            cur = min(cur, f.extra.get(obj, INF), f.upper_in[obj])
            if f.obj == obj:
                cur = min(cur, f.bound)
            if f.level == position:
                return cur
        return None

    def receive(self, position: int, obj: int, bound: int, known_max=None) -> bool:
        """Attach ``f_obj <= bound`` to the frame at ``position``; False if it is not tighter.

        ``known_max`` bounds the vectors the sender found in the region this cuts
        away, so loops above still lower their bounds by the right amount.
        """
        frame = self.frame_at(position)
        if frame is None:
            return False
        cur = self.current_bound(position, obj)
        if bound >= cur:
            return False
        frame.extra[obj] = bound
        frame.known_max = _vmax(frame.known_max, known_max)
        if obj != frame.obj:
            frame.boxed = True
            for f in self.stack:
                if f.level < position:
                    f.impure = True
        self.epoch += 1
        return True


def run_aira(inst: MoipInstance, *, use_cache: bool = True, counter: IpCounter | None = None,
             deadline: float | None = None) -> ParetoArchive:
    """Sequential baseline: identity order, no sharing. The archive carries ``.stats``."""
    t0 = time.perf_counter()
    ctx = RecursionContext(inst, use_cache=use_cache, counter=counter, deadline=deadline)
    n = inst.num_objectives
    ctx.solve_oip(OipSpec(identity(n), n, ()))
    ctx.stats.wall_ms = (time.perf_counter() - t0) * 1000
    ctx.archive.stats = ctx.stats
    return ctx.archive
