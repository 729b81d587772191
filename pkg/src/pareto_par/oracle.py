"""Brute-force enumeration of small instances.

Independent of the branch-and-bound kernel: plain Python integers, a
depth-first walk over the variable domains with interval pruning on each row.
"""
from __future__ import annotations

import math

from .model import MoipInstance, nondominated_filter

MAX_BINARY = 24
MAX_DOMAIN_PRODUCT = 2**24


class OracleTooLarge(ValueError):
    pass


def check_size(inst: MoipInstance) -> None:
    if inst.num_binary > MAX_BINARY:
        raise OracleTooLarge(f"{inst.num_binary} binary variables exceeds the limit of {MAX_BINARY}")
    prod = math.prod(v.ub - v.lb + 1 for v in inst.var_kinds if not v.binary)
    if prod > MAX_DOMAIN_PRODUCT:
        raise OracleTooLarge(f"integer domain product {prod} exceeds {MAX_DOMAIN_PRODUCT}")


def feasible_points(inst: MoipInstance):
    """Yield every feasible assignment as a tuple."""
    c = inst.num_vars
    kinds = inst.var_kinds
    rows = inst.rows
    # remaining activity range of each row over variables j..c-1
    rest = []
    for r in rows:
        lo = [0] * (c + 1)
        hi = [0] * (c + 1)
        for j in range(c - 1, -1, -1):
            a = r.coeffs[j]
            ends = (a * kinds[j].lb, a * kinds[j].ub)
            lo[j] = lo[j + 1] + min(ends)
            hi[j] = hi[j + 1] + max(ends)
        rest.append((lo, hi))

    x = [0] * c

    def fits(j, acts):
        for r, (lo, hi), a in zip(rows, rest, acts):
            amin, amax = a + lo[j], a + hi[j]
            if r.rel in ("LE", "EQ") and amin > r.rhs:
                return False
            if r.rel in ("GE", "EQ") and amax < r.rhs:
                return False
        return True

    def walk(j, acts):
        if not fits(j, acts):
            return
        if j == c:
            yield tuple(x)
            return
        for v in range(kinds[j].lb, kinds[j].ub + 1):
            x[j] = v
            yield from walk(j + 1, [a + r.coeffs[j] * v for r, a in zip(rows, acts)])

    yield from walk(0, [0] * len(rows))


def enumerate_vectors(inst: MoipInstance) -> dict:
    """Map each attainable objective vector to its first witness."""
    check_size(inst)
    out = {}
    for x in feasible_points(inst):
        vec = tuple(sum(a * v for a, v in zip(obj, x)) for obj in inst.objectives)
        out.setdefault(vec, x)
    return out


def oracle_front(inst: MoipInstance) -> set:
    return nondominated_filter(list(enumerate_vectors(inst)))
