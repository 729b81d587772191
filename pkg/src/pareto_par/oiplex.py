"""Reference semantics of ordered, constrained lexicographic problems.

An ``OipSpec`` orders the objectives by a permutation ``perm`` (1-based
objective ids, ``perm[i-1]`` is the objective at position ``i``), treats the
first ``free_prefix`` positions as a multi-objective problem and bounds the
remaining positions from above, breaking ties lexicographically in position
order.  ``oip_filter`` evaluates this directly on an explicit set of vectors
and is the ground truth the solvers are tested against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations as _itperms
from typing import Iterable, Sequence

from .model import dominates

UNBOUNDED = math.inf


def check_permutation(perm: Sequence[int]) -> tuple:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"{perm!r} is not a permutation of 1..{len(perm)}")
    return perm


def identity(n: int) -> tuple:
    return tuple(range(1, n + 1))


@dataclass(frozen=True)
class OipSpec:
    perm: tuple
    free_prefix: int
    bounds: tuple = ()  # (a_{s(k+1)}, ..., a_{s(n)}), UNBOUNDED allowed

    def __post_init__(self):
        object.__setattr__(self, "perm", check_permutation(self.perm))
        object.__setattr__(self, "bounds", tuple(self.bounds))
        n, k = len(self.perm), self.free_prefix
        if not 0 <= k <= n:
            raise ValueError(f"free prefix {k} outside 0..{n}")
        if len(self.bounds) != n - k:
            raise ValueError(f"need {n - k} bounds for positions {k + 1}..{n}, got {len(self.bounds)}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def bound_at(self, position: int):
        """Upper bound at 1-based ``position`` (> free_prefix)."""
        if position <= self.free_prefix:
            raise KeyError(position)
        return self.bounds[position - self.free_prefix - 1]

    def objective_bounds(self) -> tuple:
        """Per-objective upper bounds (index 0 is objective 1)."""
        out = [UNBOUNDED] * self.n
        for pos in range(self.free_prefix + 1, self.n + 1):
            out[self.perm[pos - 1] - 1] = self.bound_at(pos)
        return tuple(out)


def lex_key(v: Sequence[int], perm: Sequence[int], start: int = 0) -> tuple:
    return tuple(v[o - 1] for o in perm[start:])


def oip_filter(vs: Iterable[Sequence[int]], spec: OipSpec) -> set:
    pts = {tuple(v) for v in vs}
    n, k, perm = spec.n, spec.free_prefix, spec.perm
    for v in pts:
        if len(v) != n:
            raise ValueError(f"vector {v!r} does not have {n} components")
    ub = spec.objective_bounds()
    live = [v for v in pts if all(v[i] <= ub[i] for i in range(n))]

    def head(v):
        return tuple(v[o - 1] for o in perm[:k])

    heads = {v: head(v) for v in live}
    undominated = [v for v in live
                   if not any(dominates(heads[u], heads[v]) for u in live if u is not v)]
    best = {}
    for v in undominated:
        h = heads[v]
        if h not in best or lex_key(v, perm, k) < lex_key(best[h], perm, k):
            best[h] = v
    return set(best.values())


def suffix_agreement(s: Sequence[int], s2: Sequence[int]) -> int:
    """Largest a with s(i) == s2(i) for every n - a < i <= n."""
    if len(s) != len(s2):
        raise ValueError("permutations have different sizes")
    a = 0
    for x, y in zip(reversed(s), reversed(s2)):
        if x != y:
            break
        a += 1
    return a


def check_drop_k(vs: Iterable[Sequence[int]], spec_kminus1: OipSpec, spec_k: OipSpec) -> bool:
    """Whether the (k-1)-prefix solutions are contained in the k-prefix solutions."""
    k = spec_k.free_prefix
    if (spec_kminus1.perm != spec_k.perm or spec_kminus1.free_prefix != k - 1
            or spec_kminus1.bounds[1:] != spec_k.bounds):
        raise ValueError("specs must differ only by one extra bound at the k-th position")
    pts = list(vs)
    return oip_filter(pts, spec_kminus1) <= oip_filter(pts, spec_k)


def all_permutations(n: int) -> list:
    return [tuple(p) for p in _itperms(range(1, n + 1))]
