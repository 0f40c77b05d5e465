"""Latency model comparing the two technologies on scripted audit tasks.

Per-action costs default to the measured values: 4.1 s out and 2.7 s back
per remote-reference check, 2.77 s/cell scanned (mean of the observed
2.62/2.92) versus the 1 s scan dwell, and 1.3 s per blank-gap skip versus
an immediate jump. Remote-check cost scales linearly with intermediate
worksheets (one switch command per hop).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class LatencyProfile:
    ref_nav_out_s: float = 4.1
    ref_nav_back_s: float = 2.7
    scan_cell_baseline_s: float = 2.77
    scan_cell_ivoice_s: float = 1.0
    blank_jump_baseline_s: float = 1.3
    blank_jump_ivoice_s: float = 0.0
    stop_latency_s: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise SimulationError(f"{f.name} must be >= 0")

    @classmethod
    def from_json(cls, text: str) -> "LatencyProfile":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SimulationError(f"unknown profile fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class CheckRemoteRef:
    intermediate_sheets: int = 1
    kind = "check_remote_ref"

    def __post_init__(self) -> None:
        if self.intermediate_sheets < 1:
            raise SimulationError("intermediate_sheets must be >= 1")


@dataclass(frozen=True)
class ScanRange:
    cells: int
    kind = "scan_range"

    def __post_init__(self) -> None:
        if self.cells < 1:
            raise SimulationError("cells must be >= 1")


@dataclass(frozen=True)
class SkipBlanks:
    gap_cells: int
    kind = "skip_blanks"

    def __post_init__(self) -> None:
        if self.gap_cells < 1:
            raise SimulationError("gap_cells must be >= 1")


Task = CheckRemoteRef | ScanRange | SkipBlanks


@dataclass
class AuditScript:
    tasks: list[Task] = field(default_factory=list)

    @classmethod
    def from_json(cls, text: str) -> "AuditScript":
        data = json.loads(text)
        tasks: list[Task] = []
        for obj in data.get("tasks", []):
            kind = obj.get("kind")
            if kind == "check_remote_ref":
                tasks.append(CheckRemoteRef(int(obj.get("intermediate_sheets", 1))))
            elif kind == "scan_range":
                tasks.append(ScanRange(int(obj["cells"])))
            elif kind == "skip_blanks":
                tasks.append(SkipBlanks(int(obj["gap_cells"])))
            else:
                raise SimulationError(f"unknown task kind: {kind!r}")
        return cls(tasks)

    @classmethod
    def load(cls, path: str | Path) -> "AuditScript":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def task_seconds(task: Task, profile: LatencyProfile, technology: str) -> float:
    """Modeled seconds for one task under 'baseline' or 'ivoice'."""
    baseline = technology == "baseline"
    match task:
        case CheckRemoteRef(intermediate_sheets=k):
            return profile.ref_nav_out_s * max(1, k) + profile.ref_nav_back_s if baseline else 0.0
        case ScanRange(cells=n):
            # first cell excluded: its review time is the same either way
            rate = profile.scan_cell_baseline_s if baseline else profile.scan_cell_ivoice_s
            return (n - 1) * rate + (0.0 if baseline else profile.stop_latency_s)
        case SkipBlanks():
            return profile.blank_jump_baseline_s if baseline else profile.blank_jump_ivoice_s
    raise SimulationError(f"unknown task: {task!r}")


@dataclass(frozen=True)
class TaskCost:
    task: Task
    baseline_s: float
    ivoice_s: float

    @property
    def saving_s(self) -> float:
        return self.baseline_s - self.ivoice_s


@dataclass
class SimReport:
    rows: list[TaskCost] = field(default_factory=list)

    @property
    def baseline_total_s(self) -> float:
        return sum(r.baseline_s for r in self.rows)

    @property
    def ivoice_total_s(self) -> float:
        return sum(r.ivoice_s for r in self.rows)

    @property
    def saving_total_s(self) -> float:
        return self.baseline_total_s - self.ivoice_total_s

    def to_dict(self) -> dict:
        return {
            "tasks": [
                {
                    "kind": row.task.kind,
                    "params": {
                        f.name: getattr(row.task, f.name) for f in fields(row.task)
                    },
                    "baseline_s": round(row.baseline_s, 6),
                    "ivoice_s": round(row.ivoice_s, 6),
                    "saving_s": round(row.saving_s, 6),
                }
                for row in self.rows
            ],
            "totals": {
                "baseline_s": round(self.baseline_total_s, 6),
                "ivoice_s": round(self.ivoice_total_s, 6),
                "saving_s": round(self.saving_total_s, 6),
            },
        }

    def to_text(self) -> str:
        width = 42
        lines = [
            f"{'task':<{width}}{'baseline s':>12}{'ivoice s':>12}{'saving s':>12}",
            "-" * (width + 36),
        ]
        for row in self.rows:
            params = ", ".join(
                f"{f.name}={getattr(row.task, f.name)}" for f in fields(row.task)
            )
            label = f"{row.task.kind}({params})"
            lines.append(
                f"{label:<{width}}{row.baseline_s:>12.2f}{row.ivoice_s:>12.2f}{row.saving_s:>12.2f}"
            )
        lines.append("-" * (width + 36))
        lines.append(
            f"{'total':<{width}}{self.baseline_total_s:>12.2f}"
            f"{self.ivoice_total_s:>12.2f}{self.saving_total_s:>12.2f}"
        )
        return "\n".join(lines)


def simulate(script: AuditScript, profile: LatencyProfile | None = None) -> SimReport:
    """Cost every task under both technologies; savings are per task."""
    profile = profile or LatencyProfile()
    report = SimReport()
    for task in script.tasks:
        report.rows.append(
            TaskCost(
                task,
                baseline_s=task_seconds(task, profile, "baseline"),
                ivoice_s=task_seconds(task, profile, "ivoice"),
            )
        )
    return report
