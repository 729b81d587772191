"""Text formats for instances (``.moip``) and fronts.

Instance file::

    MOIP <n> <c>
    OBJ <c integers>            (n lines)
    VARS <c tokens: B | I:lb:ub>
    ROW <c integers> <LE|EQ|GE> <rhs>   (zero or more)
    END

Blank lines and lines starting with ``#`` are ignored.
A front file holds one vector per line, sorted lexicographically ascending.
"""
from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable

from .model import BINARY, RELATIONS, MoipInstance, Row, VarKind


class InstanceFormatError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def _var_token(tok: str, lineno: int) -> VarKind:
    if tok == "B":
        return BINARY
    parts = tok.split(":")
    if len(parts) != 3 or parts[0] != "I":
        raise InstanceFormatError(f"bad variable token {tok!r}", lineno)
    lb, ub = _ints(parts[1:], lineno)
    if lb > ub:
        raise InstanceFormatError(f"variable bounds {lb} > {ub}", lineno)
    return VarKind(lb, ub, False)


def parse_instance(text: str, name: str = "") -> MoipInstance:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    it = iter(lines)

    def take(what):
        try:
            return next(it)
        except StopIteration:
            last = lines[-1][0] if lines else 0
            raise InstanceFormatError(f"unexpected end of file, expected {what}", last + 1) from None

    lineno, tok = take("header")
    if len(tok) != 3 or tok[0] != "MOIP":
        raise InstanceFormatError("malformed header, expected 'MOIP <n> <c>'", lineno)
    n, c = _ints(tok[1:], lineno)
    if n < 1 or c < 1:
        raise InstanceFormatError("header needs n >= 1 and c >= 1", lineno)

    objectives = []
    for _ in range(n):
        lineno, tok = take("OBJ")
        if tok[0] != "OBJ":
            raise InstanceFormatError(f"expected OBJ, got {tok[0]!r}", lineno)
        if len(tok) - 1 != c:
            raise InstanceFormatError(f"OBJ has {len(tok) - 1} coefficients, expected {c}", lineno)
        objectives.append(tuple(_ints(tok[1:], lineno)))

    lineno, tok = take("VARS")
    if tok[0] != "VARS":
        raise InstanceFormatError(f"expected VARS, got {tok[0]!r}", lineno)
    if len(tok) - 1 != c:
        raise InstanceFormatError(f"VARS has {len(tok) - 1} tokens, expected {c}", lineno)
    kinds = [_var_token(t, lineno) for t in tok[1:]]

    rows = []
    while True:
        lineno, tok = take("ROW or END")
        if tok[0] == "END":
            if len(tok) != 1:
                raise InstanceFormatError("trailing tokens after END", lineno)
            break
        if tok[0] != "ROW":
            raise InstanceFormatError(f"expected ROW or END, got {tok[0]!r}", lineno)
        if len(tok) != c + 3:
            raise InstanceFormatError(f"ROW has {len(tok) - 3} coefficients, expected {c}", lineno)
        rel = tok[-2]
        if rel not in RELATIONS:
            raise InstanceFormatError(f"bad relation {rel!r}", lineno)
        coeffs = _ints(tok[1:-2], lineno)
        (rhs,) = _ints(tok[-1:], lineno)
        rows.append(Row(tuple(coeffs), rel, rhs))
    for lineno, tok in it:
        raise InstanceFormatError("content after END", lineno)
    return MoipInstance(tuple(objectives), tuple(rows), tuple(kinds), name=name)


def format_instance(inst: MoipInstance) -> str:
    out = io.StringIO()
    out.write(f"MOIP {inst.num_objectives} {inst.num_vars}\n")
    for o in inst.objectives:
        out.write("OBJ " + " ".join(map(str, o)) + "\n")
    out.write("VARS " + " ".join(v.token() for v in inst.var_kinds) + "\n")
    for r in inst.rows:
        out.write("ROW " + " ".join(map(str, r.coeffs)) + f" {r.rel} {r.rhs}\n")
    out.write("END\n")
    return out.getvalue()


def read_instance(path) -> MoipInstance:
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem)


def write_instance(inst: MoipInstance, path) -> None:
    Path(path).write_text(format_instance(inst))


def format_front(vectors: Iterable) -> str:
    return "".join(" ".join(map(str, v)) + "\n" for v in sorted({tuple(v) for v in vectors}))


def parse_front(text: str) -> list:
    out = []
    for i, ln in enumerate(text.splitlines(), 1):
        if not ln.strip():
            continue
        try:
            out.append(tuple(int(t) for t in ln.split()))
        except ValueError:
            raise InstanceFormatError("non-integer token in front file", i) from None
    return out


def write_front(vectors: Iterable, path) -> None:
    Path(path).write_text(format_front(vectors))


def read_front(path) -> list:
    return parse_front(Path(path).read_text())
