"""Permutation selection, the shared bounds board and the parallel orchestrator.

Each worker runs the recursive solver under its own objective order and
publishes, at every loop boundary, an immutable snapshot of its active
bounds.  Workers read each other's snapshots and take over any bound that
provably excludes only regions another worker has already searched: the
other worker must be solving the same subproblem at that position, i.e. its
order and bounds agree with ours on every later position.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from itertools import islice, permutations

from .ipsolve import IpCounter
from .model import MoipInstance, ParetoArchive, nondominated_filter
from .oiplex import OipSpec, check_permutation, suffix_agreement
from .recursion import Aborted, RecursionContext, SolveStats

INF = math.inf
CLUSTER = "cluster"
SPREAD = "spread"
STRATEGIES = (CLUSTER, SPREAD)


# permutation selection

def _spread_order(n: int):
    """All of S_n; each base order of n-1 objectives followed by n, in every rotation."""
    if n == 1:
        yield (1,)
        return
    for q in _spread_order(n - 1):
        base = q + (n,)
        for r in range(n):
            yield base[r:] + base[:r]


def select_permutations(n: int, t: int, strategy: str) -> list:
    strategy = strategy.lower()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not 1 <= t <= math.factorial(n):
        raise ValueError(f"thread count {t} outside 1..{n}!")
    if strategy == SPREAD:
        return list(islice(_spread_order(n), t))
    m = 1
    while math.factorial(m) < t:
        m += 1
    tail = tuple(range(m + 1, n + 1))
    return [p + tail for p in islice(permutations(range(1, m + 1)), t)]


# public state and board

@dataclass(frozen=True)
class ThreadPublicState:
    """What one worker tells the others.  Tuples are indexed by position - 1."""
    perm: tuple
    free_prefix: int
    depth_bounds: tuple
    depth_attained: tuple
    progress: tuple
    depth_known_max: tuple = ()

    @property
    def n(self) -> int:
        return len(self.perm)

    def known_max_at(self, position: int):
        return self.depth_known_max[position - 1] if self.depth_known_max else None


def initial_state(perm) -> ThreadPublicState:
    perm = check_permutation(perm)
    n = len(perm)
    return ThreadPublicState(perm, n, (INF,) * n, (None,) * n, (False,) * n, (None,) * n)


def state_of(ctx: RecursionContext) -> ThreadPublicState:
    n = ctx.n
    bounds, attained, progress = [INF] * n, [None] * n, [False] * n
    known = [None] * n
    for f in ctx.stack:
        p = f.level - 1
        bounds[p] = f.bound
        attained[p] = f.attained
        progress[p] = not f.impure
        known[p] = f.known_max
    return ThreadPublicState(ctx.perm, ctx.free_prefix, tuple(bounds), tuple(attained),
                             tuple(progress), tuple(known))


class BoundsBoard:
    """One slot per worker.  A slot holds a reference to an immutable state and is
    replaced wholesale, so a reader always sees some complete published state."""

    def __init__(self, perms):
        self._slots = [initial_state(p) for p in perms]

    def __len__(self) -> int:
        return len(self._slots)

    def publish(self, slot: int, state: ThreadPublicState) -> None:
        self._slots[slot] = state

    def snapshot(self, slot: int) -> ThreadPublicState:
        return self._slots[slot]


def publish(board: BoundsBoard, slot: int, state: ThreadPublicState) -> None:
    board.publish(slot, state)


def snapshot(board: BoundsBoard, slot: int) -> ThreadPublicState:
    return board.snapshot(slot)


# bound exchange

@dataclass(frozen=True)
class Offer:
    position: int
    objective: int  # 1-based
    bound: int
    kind: str  # "bound" | "attained"
    known_max: tuple | None = None


def share_offers(mine: ThreadPublicState, theirs: ThreadPublicState) -> list:
    """Every bound ``theirs`` can hand to ``mine``, with the position it applies at."""
    n = mine.n
    if theirs.n != n:
        raise ValueError("states have different sizes")
    agree = suffix_agreement(mine.perm, theirs.perm)
    out = []
    for j in range(n):
        p = n - j
        if not (j < n - theirs.free_prefix and j < n - mine.free_prefix) or agree < j:
            break
        if j > 0 and mine.depth_bounds[p] != theirs.depth_bounds[p]:
            break
        if not theirs.progress[p - 1]:
            continue
        obj = theirs.perm[p - 1]
        km = theirs.known_max_at(p)
        b = theirs.depth_bounds[p - 1]
        if b != INF:
            out.append(Offer(p, obj, b, "bound", km))
        a = theirs.depth_attained[p - 1]
        if a is not None:
            out.append(Offer(p, obj, a - 1, "attained", km))
    return out


def shareable_bounds(mine: ThreadPublicState, theirs: ThreadPublicState) -> list:
    """``(objective, bound)`` pairs, inclusive upper bounds, that ``mine`` may adopt."""
    return [(o.objective, o.bound) for o in share_offers(mine, theirs) if o.kind == "bound"]


class _ShareHooks:
    def __init__(self, board: BoundsBoard, slot: int, peers: list, lock: threading.Lock,
                 enabled: bool):
        self.board, self.slot, self.peers, self.lock = board, slot, peers, lock
        self.enabled = enabled

    def exchange(self, ctx: RecursionContext) -> None:
        if not self.enabled:
            return
        mine = state_of(ctx)
        for s in range(len(self.board)):
            if s == self.slot:
                continue
            theirs = self.board.snapshot(s)
            for offer in share_offers(mine, theirs):
                if ctx.receive(offer.position, offer.objective - 1, offer.bound, offer.known_max):
                    if offer.kind == "bound":
                        ctx.stats.bounds_in += 1
                    else:
                        ctx.stats.attained_in += 1
                    with self.lock:
                        self.peers[s].stats.bounds_out += 1

    def publish(self, ctx: RecursionContext) -> None:
        if self.enabled:
            self.board.publish(self.slot, state_of(ctx))


def run_parallel(inst: MoipInstance, t: int, strategy: str = SPREAD, *, share: bool = True,
                 perms=None, use_cache: bool = True, time_limit_s: float | None = None,
                 counter: IpCounter | None = None) -> ParetoArchive:
    """Solve with ``t`` workers under different objective orders.

    The returned archive carries ``.stats`` (summed), ``.thread_stats`` and
    ``.perms``.  Raises ``TimeLimitExceeded`` if any worker runs out of time.
    """
    n = inst.num_objectives
    if perms is None:
        perms = select_permutations(n, t, strategy)
    else:
        perms = [check_permutation(p) for p in perms]
        if len(perms) != t or len(set(perms)) != t or any(len(p) != n for p in perms):
            raise ValueError(f"need {t} distinct permutations of 1..{n}")
    t0 = time.perf_counter()
    deadline = None if time_limit_s is None else time.monotonic() + time_limit_s
    counter = counter or IpCounter()
    stop = threading.Event()
    board = BoundsBoard(perms)
    lock = threading.Lock()
    ctxs: list[RecursionContext] = []
    for slot, p in enumerate(perms):
        ctxs.append(RecursionContext(inst, p, use_cache=use_cache, counter=counter,
                                     deadline=deadline, stop=stop))
    for slot, ctx in enumerate(ctxs):
        ctx.hooks = _ShareHooks(board, slot, ctxs, lock, share)

    errors: list = [None] * t

    def body(slot: int) -> None:
        ctx = ctxs[slot]
        try:
            ctx.solve_oip(OipSpec(ctx.perm, n, ()))
        except BaseException as exc:  # noqa: BLE001 - re-raised after join
            errors[slot] = exc
            stop.set()

    if t == 1:
        body(0)
    else:
        threads = [threading.Thread(target=body, args=(s,), daemon=True) for s in range(t)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
    real = [e for e in errors if e is not None and not isinstance(e, Aborted)]
    if real:
        raise real[0]

    union = {}
    for ctx in ctxs:
        for v, w in ctx.archive.entries:
            union.setdefault(v, w)
    front = nondominated_filter(union)
    out = ParetoArchive((v, union[v]) for v in sorted(front))
    total = SolveStats()
    for ctx in ctxs:
        total.add(ctx.stats)
    total.wall_ms = (time.perf_counter() - t0) * 1000
    out.stats = total
    out.thread_stats = [c.stats for c in ctxs]
    out.perms = list(perms)
    return out
