"""One solve of one instance with a named algorithm, plus its report."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, fields

from .epp import run_epp
from .model import MoipInstance
from .recursion import run_aira
from .sharing import CLUSTER, SPREAD, run_parallel

ALGORITHMS = ("aira", "epp", CLUSTER, SPREAD)


@dataclass
class RunReport:
    algorithm: str
    threads: int
    instance: str
    front_size: int
    ips_solved: int
    cache_hits: int
    bounds_in: int
    bounds_out: int
    attained_in: int
    wall_ms: float
    perms: str = ""

    def as_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "wall_ms":
                v = f"{v:.3f}"
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"


def check_threads(inst: MoipInstance, algorithm: str, threads: int) -> None:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if threads < 1:
        raise ValueError("threads must be at least 1")
    n = inst.num_objectives
    if algorithm in (CLUSTER, SPREAD) and threads > math.factorial(n):
        raise ValueError(f"{algorithm} needs threads <= {n}! = {math.factorial(n)}")


def solve(inst: MoipInstance, algorithm: str, threads: int = 1, *,
          time_limit_s: float | None = None, share: bool = True, perms=None,
          use_cache: bool = True):
    """Returns ``(archive, report)``.  Raises ``TimeLimitExceeded`` on expiry."""
    if perms is not None:
        threads = len(perms)
    check_threads(inst, algorithm, threads)
    t0 = time.perf_counter()
    if algorithm == "aira":
        deadline = None if time_limit_s is None else time.monotonic() + time_limit_s
        archive = run_aira(inst, use_cache=use_cache, deadline=deadline)
        threads = 1
    elif algorithm == "epp":
        archive = run_epp(inst, threads, time_limit_s=time_limit_s, use_cache=use_cache)
    else:
        archive = run_parallel(inst, threads, algorithm, share=share, perms=perms,
                               use_cache=use_cache, time_limit_s=time_limit_s)
    wall = (time.perf_counter() - t0) * 1000
    st = archive.stats
    perm_text = ";".join(",".join(map(str, p)) for p in getattr(archive, "perms", []))
    report = RunReport(algorithm, threads, inst.name, len(archive), st.ips_solved,
                       st.cache_hits, st.bounds_in, st.bounds_out, st.attained_in, wall,
                       perm_text)
    return archive, report
