"""Benchmark manifests: repeated runs, a mean-per-cell table and a per-run CSV.

A manifest is JSON with ``repetitions`` and either an explicit ``runs`` list
of ``{"instance", "algorithm", "threads"}`` objects or an ``instances`` list
crossed with a ``configs`` list of ``{"algorithm", "threads"}``.  Relative
instance paths are resolved against the manifest's directory.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .fileio import read_instance
from .runner import solve

CSV_COLUMNS = ("instance", "algorithm", "threads", "rep", "wall_ms", "ips", "front_size")


@dataclass(frozen=True)
class Cell:
    instance: str
    algorithm: str
    threads: int


@dataclass
class CellResult:
    cell: Cell
    walls: list = field(default_factory=list)
    ips: list = field(default_factory=list)
    fronts: list = field(default_factory=list)
    error: str | None = None


def load_manifest(path) -> tuple:
    """Returns ``(cells, repetitions)``."""
    path = Path(path)
    data = json.loads(path.read_text())
    reps = int(data.get("repetitions", 1))
    if reps < 1:
        raise ValueError("repetitions must be at least 1")
    base = path.parent

    def resolve(p):
        p = Path(p)
        return str(p if p.is_absolute() else base / p)

    cells = []
    if "runs" in data:
        for r in data["runs"]:
            cells.append(Cell(resolve(r["instance"]), r["algorithm"], int(r.get("threads", 1))))
    else:
        for inst in data["instances"]:
            for c in data["configs"]:
                cells.append(Cell(resolve(inst), c["algorithm"], int(c.get("threads", 1))))
    return cells, reps


def run_cells(cells, reps: int, time_limit_s: float | None = None) -> list:
    results = []
    for cell in cells:
        res = CellResult(cell)
        try:
            inst = read_instance(cell.instance)
            for _ in range(reps):
                archive, report = solve(inst, cell.algorithm, cell.threads,
                                        time_limit_s=time_limit_s)
                res.walls.append(report.wall_ms)
                res.ips.append(report.ips_solved)
                res.fronts.append(report.front_size)
        except Exception as exc:  # noqa: BLE001 - a failed cell is reported, not fatal
            res.error = f"{type(exc).__name__}: {exc}"
        results.append(res)
    return results


def format_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        c = r.cell
        for i, (wall, ips, fs) in enumerate(zip(r.walls, r.ips, r.fronts)):
            w.writerow([c.instance, c.algorithm, c.threads, i, f"{wall:.3f}", ips, fs])
        if r.error is not None:
            w.writerow([c.instance, c.algorithm, c.threads, len(r.walls), "ERROR", "", ""])
    return buf.getvalue()


def format_table(results) -> str:
    """Instances as rows, ``algorithm/threads`` as columns, mean ms and mean IPs per cell."""
    rows = list(dict.fromkeys(Path(r.cell.instance).stem for r in results))
    cols = list(dict.fromkeys(f"{r.cell.algorithm}/{r.cell.threads}" for r in results))
    text = {}
    for r in results:
        key = (Path(r.cell.instance).stem, f"{r.cell.algorithm}/{r.cell.threads}")
        if r.error is not None:
            text[key] = "ERROR"
        else:
            text[key] = f"{statistics.mean(r.walls):.1f}ms {statistics.mean(r.ips):.0f}ip"
    header = ["instance"] + cols
    body = [[name] + [text.get((name, c), "-") for c in cols] for name in rows]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    out = []
    for line in [header] + body:
        out.append("  ".join(s.ljust(wd) for s, wd in zip(line, widths)).rstrip())
    return "\n".join(out) + "\n"
