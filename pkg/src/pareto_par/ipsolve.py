"""Exact single-objective and lexicographic integer solves.

Every call into the branch-and-bound kernel is one "single-objective IP"
and bumps an :class:`IpCounter`.  Side constraints are upper bounds on
objectives; strict inequalities are expressed as ``bound - 1``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _bnb
from .model import MoipInstance, evaluate_objectives, verify_witness


class IpCounter:
    """Thread-safe tally of single-objective solves."""

    def __init__(self):
        self._lock = threading.Lock()
        self._n = 0

    def bump(self, k: int = 1) -> None:
        with self._lock:
            self._n += k

    @property
    def value(self) -> int:
        return self._n


IP_COUNTER = IpCounter()


@dataclass(frozen=True)
class SideConstraint:
    objective_index: int  # 1-based
    bound: int

    relation = "LE"


@dataclass(frozen=True)
class SolverOutcome:
    status: str  # "optimal" | "infeasible"
    value: int | None = None
    witness: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


INFEASIBLE = SolverOutcome("infeasible")

_BIG = 2**62


class CompiledModel:
    """Dense/CSC arrays for one instance, objective rows appended after the constraints."""

    def __init__(self, inst: MoipInstance):
        self.inst = inst
        n, c = inst.num_objectives, inst.num_vars
        m0 = len(inst.rows)
        self.n, self.c, self.m0 = n, c, m0
        rows = [r.coeffs for r in inst.rows] + list(inst.objectives)
        self.R = np.array(rows, dtype=np.int64).reshape(m0 + n, c)
        self.lb = np.array([v.lb for v in inst.var_kinds], dtype=np.int64)
        self.ub = np.array([v.ub for v in inst.var_kinds], dtype=np.int64)
        span = np.maximum(np.abs(self.lb), np.abs(self.ub)).max()
        if int(np.abs(self.R).max(initial=0)) * int(span) * c >= _BIG:
            raise OverflowError("instance coefficients too large for exact 64-bit search")
        lo = np.zeros(m0 + n, dtype=np.int64)
        hi = np.zeros(m0 + n, dtype=np.int64)
        has_lo = np.zeros(m0 + n, dtype=np.bool_)
        has_hi = np.zeros(m0 + n, dtype=np.bool_)
        for i, r in enumerate(inst.rows):
            if r.rel in ("LE", "EQ"):
                hi[i], has_hi[i] = r.rhs, True
            if r.rel in ("GE", "EQ"):
                lo[i], has_lo[i] = r.rhs, True
        self.lo, self.hi, self.has_lo, self.has_hi = lo, hi, has_lo, has_hi
        colptr = [0]
        rowidx, vals = [], []
        for j in range(c):
            for r in range(m0 + n):
                a = int(self.R[r, j])
                if a:
                    rowidx.append(r)
                    vals.append(a)
            colptr.append(len(rowidx))
        self.colptr = np.array(colptr, dtype=np.int64)
        self.rowidx = np.array(rowidx, dtype=np.int64)
        self.vals = np.array(vals, dtype=np.int64)
        self.smin, self.smax = _bnb.suffix_bounds(self.R, self.lb, self.ub)
        self._nox = np.zeros(c, dtype=np.int64)
        self.F = self.R[m0:]

    def evaluate(self, x) -> tuple:
        return tuple(int(v) for v in self.F @ np.asarray(x, dtype=np.int64))

    def solve(self, obj: int, upper: Sequence = (), fixed: dict | None = None, x0=None,
              counter: IpCounter | None = None):
        """Minimise 0-based objective ``obj``.

        ``upper`` holds per-objective upper bounds (``math.inf`` for none);
        ``fixed`` maps 0-based objectives to values they must equal.
        Returns ``(value, x)`` or ``None`` when infeasible.
        """
        m0 = self.m0
        lo, hi = self.lo.copy(), self.hi.copy()
        has_lo, has_hi = self.has_lo.copy(), self.has_hi.copy()
        for i, b in enumerate(upper):
            if b != math.inf:
                hi[m0 + i], has_hi[m0 + i] = b, True
        if fixed:
            for i, v in fixed.items():
                hi[m0 + i] = min(v, hi[m0 + i]) if has_hi[m0 + i] else v
                lo[m0 + i] = v
                has_lo[m0 + i] = has_hi[m0 + i] = True
        use_x0 = x0 is not None
        xs = np.asarray(x0, dtype=np.int64) if use_x0 else self._nox
        (counter or IP_COUNTER).bump()
        status, value, x = _bnb.branch_and_bound(
            self.R, self.colptr, self.rowidx, self.vals, lo, hi, has_lo, has_hi,
            self.lb, self.ub, self.smin, self.smax, m0 + obj, xs, use_x0)
        if status == 0:
            return None
        return int(value), tuple(int(v) for v in x)

    def solve_lex(self, order: Sequence[int], upper: Sequence = (),
                  counter: IpCounter | None = None):
        """Hierarchical optimum over 0-based ``order``; one kernel call per stage.

        Returns ``(vector, x)`` or ``None``.
        """
        fixed = {}
        x = None
        for obj in order:
            res = self.solve(obj, upper, fixed, x, counter)
            if res is None:
                if x is None:
                    return None
                raise AssertionError("lexicographic stage lost feasibility")
            value, x = res
            fixed[obj] = value
        return self.evaluate(x), x


def _upper_from_side(n: int, side: Sequence[SideConstraint]) -> list:
    upper = [math.inf] * n
    for sc in side:
        if not 1 <= sc.objective_index <= n:
            raise ValueError(f"side constraint on unknown objective {sc.objective_index}")
        upper[sc.objective_index - 1] = min(upper[sc.objective_index - 1], sc.bound)
    return upper


def solve_min(inst: MoipInstance, side: Sequence[SideConstraint], obj_index: int,
              counter: IpCounter | None = None) -> SolverOutcome:
    if not 1 <= obj_index <= inst.num_objectives:
        raise ValueError(f"objective index {obj_index} out of range")
    cm = inst.compiled
    res = cm.solve(obj_index - 1, _upper_from_side(cm.n, side), counter=counter)
    if res is None:
        return INFEASIBLE
    return SolverOutcome("optimal", res[0], res[1])


def solve_lex(inst: MoipInstance, side: Sequence[SideConstraint], order: Sequence[int],
              counter: IpCounter | None = None) -> SolverOutcome:
    order = list(order)
    if not order or len(set(order)) != len(order):
        raise ValueError("order must be a nonempty list of distinct objective indices")
    if not all(1 <= o <= inst.num_objectives for o in order):
        raise ValueError(f"objective index out of range in {order}")
    cm = inst.compiled
    res = cm.solve_lex([o - 1 for o in order], _upper_from_side(cm.n, side), counter)
    if res is None:
        return INFEASIBLE
    vec, x = res
    return SolverOutcome("optimal", vec[order[0] - 1], x)


# LP text export and external adapters

def _expr(coeffs: Sequence[int]) -> str:
    terms = [(a, j) for j, a in enumerate(coeffs, 1) if a]
    if not terms:
        return "0 x1"
    parts = []
    for i, (a, j) in enumerate(terms):
        if i == 0:
            parts.append(f"{a} x{j}" if a > 0 else f"- {-a} x{j}")
        else:
            parts.append(f"+ {a} x{j}" if a > 0 else f"- {-a} x{j}")
    lines = [" ".join(parts[i:i + 8]) for i in range(0, len(parts), 8)]
    return "\n   ".join(lines)


_LP_REL = {"LE": "<=", "EQ": "=", "GE": ">="}


def export_lp(inst: MoipInstance, side: Sequence[SideConstraint], obj_index: int) -> str:
    """The subproblem in CPLEX LP text format, variables named x1..xc."""
    out = [f"\\ minimise objective {obj_index} of {inst.num_objectives}",
           "Minimize", f" obj: {_expr(inst.objectives[obj_index - 1])}", "Subject To"]
    for i, r in enumerate(inst.rows, 1):
        out.append(f" c{i}: {_expr(r.coeffs)} {_LP_REL[r.rel]} {r.rhs}")
    for i, sc in enumerate(side, 1):
        out.append(f" s{i}: {_expr(inst.objectives[sc.objective_index - 1])} <= {sc.bound}")
    bounds = [f" {vk.lb} <= x{j} <= {vk.ub}" for j, vk in enumerate(inst.var_kinds, 1)
              if not vk.binary]
    if bounds:
        out += ["Bounds"] + bounds
    binaries = [f"x{j}" for j, vk in enumerate(inst.var_kinds, 1) if vk.binary]
    generals = [f"x{j}" for j, vk in enumerate(inst.var_kinds, 1) if not vk.binary]
    if binaries:
        out += ["Binaries", " " + " ".join(binaries)]
    if generals:
        out += ["Generals", " " + " ".join(generals)]
    out.append("End")
    return "\n".join(out) + "\n"


class AdapterError(RuntimeError):
    pass


Adapter = Callable[[str], tuple]


def solve_with_adapter(inst: MoipInstance, side: Sequence[SideConstraint], obj_index: int,
                       adapter: Adapter, counter: IpCounter | None = None) -> SolverOutcome:
    """Hand the LP text to an external solver and check what comes back.

    ``adapter`` returns ``(status, value, assignment)``.  An optimal answer is
    accepted only if the assignment is feasible, meets the side constraints
    and attains ``value``.
    """
    status, value, assignment = adapter(export_lp(inst, side, obj_index))
    (counter or IP_COUNTER).bump()
    if status == "infeasible":
        return INFEASIBLE
    if status != "optimal":
        raise AdapterError(f"unknown adapter status {status!r}")
    w = tuple(int(v) for v in assignment)
    if not verify_witness(inst, w):
        raise AdapterError("adapter returned an infeasible assignment")
    vec = evaluate_objectives(inst, w)
    if any(vec[sc.objective_index - 1] > sc.bound for sc in side):
        raise AdapterError("adapter assignment violates a side constraint")
    if vec[obj_index - 1] != value:
        raise AdapterError(f"adapter reported {value}, assignment attains {vec[obj_index - 1]}")
    return SolverOutcome("optimal", int(value), w)
