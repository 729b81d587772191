"""Problem representation, objective evaluation, dominance and Pareto archives.

Every objective is minimised and all data is integral, so objective vectors
are plain tuples of Python ints and compare exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

ObjectiveVector = tuple  # tuple[int, ...]
FeasibleWitness = tuple  # tuple[int, ...]

RELATIONS = ("LE", "EQ", "GE")


@dataclass(frozen=True)
class VarKind:
    lb: int
    ub: int
    binary: bool = False

    def token(self) -> str:
        return "B" if self.binary else f"I:{self.lb}:{self.ub}"


BINARY = VarKind(0, 1, True)


def integer(lb: int, ub: int) -> VarKind:
    return VarKind(lb, ub, False)


@dataclass(frozen=True)
class Row:
    coeffs: tuple
    rel: str
    rhs: int

    def holds(self, x: Sequence[int]) -> bool:
        lhs = sum(a * v for a, v in zip(self.coeffs, x))
        if self.rel == "LE":
            return lhs <= self.rhs
        if self.rel == "GE":
            return lhs >= self.rhs
        return lhs == self.rhs


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class MoipInstance:
    """min f_1(x), ..., f_n(x) subject to linear rows and bounded integer variables."""

    objectives: tuple
    rows: tuple
    var_kinds: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(tuple(o) for o in self.objectives))
        object.__setattr__(self, "rows", tuple(
            r if isinstance(r, Row) else Row(tuple(r[0]), r[1], r[2]) for r in self.rows))
        object.__setattr__(self, "var_kinds", tuple(self.var_kinds))
        n, c = len(self.objectives), len(self.var_kinds)
        if n < 1 or c < 1:
            raise ValueError("need at least one objective and one variable")
        for o in self.objectives:
            if len(o) != c or not all(_is_int(a) for a in o):
                raise ValueError("objective rows must hold exactly c integers")
        for r in self.rows:
            if len(r.coeffs) != c or not all(_is_int(a) for a in r.coeffs):
                raise ValueError("constraint rows must hold exactly c integers")
            if r.rel not in RELATIONS or not _is_int(r.rhs):
                raise ValueError(f"bad constraint row {r!r}")
        for vk in self.var_kinds:
            if not (_is_int(vk.lb) and _is_int(vk.ub)) or vk.lb > vk.ub:
                raise ValueError(f"bad variable bounds {vk!r}")

    @property
    def num_objectives(self) -> int:
        return len(self.objectives)

    @property
    def num_vars(self) -> int:
        return len(self.var_kinds)

    @property
    def num_binary(self) -> int:
        return sum(1 for v in self.var_kinds if v.binary)

    @property
    def num_integer(self) -> int:
        return self.num_vars - self.num_binary

    def with_rows(self, extra: Iterable[Row], name: str | None = None) -> "MoipInstance":
        return MoipInstance(self.objectives, self.rows + tuple(extra), self.var_kinds,
                            self.name if name is None else name)

    def objective_row(self, index: int, rel: str, rhs: int) -> Row:
        """Objective ``index`` (1-based) as a constraint row."""
        return Row(self.objectives[index - 1], rel, rhs)

    @cached_property
    def compiled(self):
        from .ipsolve import CompiledModel
        return CompiledModel(self)


def evaluate_objectives(inst: MoipInstance, w: Sequence[int]) -> ObjectiveVector:
    if len(w) != inst.num_vars:
        raise ValueError(f"witness has {len(w)} entries, instance has {inst.num_vars} variables")
    return tuple(sum(a * v for a, v in zip(obj, w)) for obj in inst.objectives)


def verify_witness(inst: MoipInstance, w: Sequence[int]) -> bool:
    """True iff ``w`` respects every variable bound and constraint row."""
    if len(w) != inst.num_vars:
        return False
    for v, vk in zip(w, inst.var_kinds):
        if not _is_int(v) or v < vk.lb or v > vk.ub:
            return False
    return all(r.holds(w) for r in inst.rows)


def dominates(z: Sequence[int], y: Sequence[int]) -> bool:
    if len(z) != len(y):
        raise ValueError("vectors differ in length")
    strict = False
    for a, b in zip(z, y):
        if a > b:
            return False
        if a < b:
            strict = True
    return strict


def nondominated_filter(vs: Iterable[Sequence[int]]) -> set:
    pts = {tuple(v) for v in vs}
    if len({len(v) for v in pts}) > 1:
        raise ValueError("vectors differ in length")
    pts = sorted(pts)
    # a dominator is lexicographically smaller, so only earlier points can dominate
    out = []
    for v in pts:
        if not any(dominates(u, v) for u in out):
            out.append(v)
    return set(out)


@dataclass
class InsertReport:
    inserted: bool
    removed: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "inserted" if self.inserted else "rejected"


class ParetoArchive:
    """Mutually non-dominated vectors, each with the first witness seen for it.

    A plain list with pairwise scans. Not safe for concurrent mutation.
    """

    def __init__(self, entries: Iterable[tuple] = ()):
        self._entries: list[tuple] = []
        for v, w in entries:
            self.insert(v, w)

    def insert(self, v: Sequence[int], w: Sequence[int] | None = None) -> InsertReport:
        v = tuple(v)
        removed = []
        keep = []
        for u, uw in self._entries:
            if len(u) != len(v):
                raise ValueError("vector length does not match archive")
            if u == v or dominates(u, v):
                return InsertReport(False)
            if dominates(v, u):
                removed.append(u)
            else:
                keep.append((u, uw))
        keep.append((v, None if w is None else tuple(w)))
        self._entries = keep
        return InsertReport(True, removed)

    def vectors(self) -> set:
        return {v for v, _ in self._entries}

    def witness(self, v: Sequence[int]):
        v = tuple(v)
        for u, w in self._entries:
            if u == v:
                return w
        raise KeyError(v)

    @property
    def entries(self) -> list:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.vectors()

    def sorted_vectors(self) -> list:
        return sorted(self.vectors())


def archive_insert(a: ParetoArchive, v: Sequence[int], w: Sequence[int] | None = None) -> InsertReport:
    return a.insert(v, w)
