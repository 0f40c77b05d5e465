"""Spreadsheet audit navigation: engine, activity log, analysis, simulator."""

from .workbook import (
    BLANK,
    CellAddress,
    CellContent,
    CellKind,
    Sheet,
    Workbook,
    WorkbookError,
    classify_eligible,
    format_a1,
    parse_a1,
    parse_address,
    workbook_sha256,
)
from .formula import (
    ContentShape,
    FormulaError,
    RangeRef,
    RefItem,
    Reference,
    extract_references,
    normalize_shape,
    shape_of,
    similar,
)
from .engine import (
    ColorEntry,
    ColorName,
    Direction,
    NavError,
    NavSession,
    NoSuchColor,
    NothingToJumpBackTo,
    PALETTE,
    ScanBusy,
    Viewport,
    is_visible,
)
from .commands import CommandError, CommandSet, ParsedCommand, command_count, interpret
from .tcat import (
    ActivityEvent,
    EventKind,
    EventLog,
    MonotonicityViolation,
    ReplayMismatch,
    StructureError,
    Technology,
    Visit,
    replay,
    visits,
)
from .session import AuditSession, apply_command
from .analysis import (
    AuditMetrics,
    NavTimings,
    RankSumResult,
    ScanRegionStats,
    audit_metrics,
    blank_jump_time,
    coverage,
    errors_found,
    marks_from_log,
    rank_sum_test,
    ref_nav_time,
    scan_region_stats,
)
from .simulate import (
    AuditScript,
    CheckRemoteRef,
    LatencyProfile,
    ScanRange,
    SimReport,
    SkipBlanks,
    simulate,
    task_seconds,
)

__version__ = "0.1.0"
