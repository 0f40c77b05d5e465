"""Text command parsing for the two navigation vocabularies.

Commands stand in for recognized utterances; parsing is case-insensitive
and whitespace-normalized, and deterministic (misrecognition simulation
belongs to callers, not here). The interactive vocabulary provides the
reference/scan/blank-jump shortcuts; the baseline vocabulary is a
representative dictation-style subset (cell addressing, stepwise moves,
worksheet switching, keyboard-shortcut dictation).

Vocabulary (canonical forms):

======================  =========================================
interactive (ivoice)    jump <color> | jump back | jump <direction>
                        scan <direction> | stop
                        show colours | hide colours
                        speed up | slow down
                        mark error | unmark error
baseline                go to cell <addr> | move to cell <addr>
                        move <direction> [count]
                        next worksheet | previous worksheet
                        press control <direction>
                        mark error | unmark error
======================  =========================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .engine import ColorName, Direction

_GO_TO_CELL = re.compile(r"\s*(go|move)\s+to\s+cell\s+(.+)$", re.IGNORECASE)


class CommandError(ValueError):
    code = "UnknownCommand"


class UnknownCommand(CommandError):
    pass


class CommandSet(Enum):
    IVOICE = "ivoice"
    BASELINE = "baseline"


@dataclass(frozen=True)
class JumpColor:
    color: ColorName


@dataclass(frozen=True)
class JumpBack:
    pass


@dataclass(frozen=True)
class JumpBlank:
    direction: Direction


@dataclass(frozen=True)
class ScanStart:
    direction: Direction


@dataclass(frozen=True)
class ScanStop:
    pass


@dataclass(frozen=True)
class ShowColors:
    pass


@dataclass(frozen=True)
class HideColors:
    pass


@dataclass(frozen=True)
class SpeedUp:
    pass


@dataclass(frozen=True)
class SlowDown:
    pass


@dataclass(frozen=True)
class MarkError:
    pass


@dataclass(frozen=True)
class UnmarkError:
    pass


@dataclass(frozen=True)
class GoToCell:
    addr_text: str


@dataclass(frozen=True)
class Move:
    direction: Direction
    count: int = 1


@dataclass(frozen=True)
class NextWorksheet:
    pass


@dataclass(frozen=True)
class PrevWorksheet:
    pass


@dataclass(frozen=True)
class PressCtrlArrow:
    direction: Direction


ParsedCommand = (
    JumpColor
    | JumpBack
    | JumpBlank
    | ScanStart
    | ScanStop
    | ShowColors
    | HideColors
    | SpeedUp
    | SlowDown
    | MarkError
    | UnmarkError
    | GoToCell
    | Move
    | NextWorksheet
    | PrevWorksheet
    | PressCtrlArrow
)

_COLORS = {c.value: c for c in ColorName}
_DIRECTIONS = {d.value: d for d in Direction}


def _normalize(text: str) -> list[str]:
    return text.strip().lower().split()


def _interpret_ivoice(words: list[str], text: str) -> ParsedCommand:
    if words[:1] == ["jump"] and len(words) == 2:
        word = words[1]
        if word == "back":
            return JumpBack()
        if word in _COLORS:
            return JumpColor(_COLORS[word])
        if word in _DIRECTIONS:
            return JumpBlank(_DIRECTIONS[word])
    if words[:1] == ["scan"] and len(words) == 2 and words[1] in _DIRECTIONS:
        return ScanStart(_DIRECTIONS[words[1]])
    if words == ["stop"]:
        return ScanStop()
    if words in (["show", "colours"], ["show", "colors"]):
        return ShowColors()
    if words in (["hide", "colours"], ["hide", "colors"]):
        return HideColors()
    if words == ["speed", "up"]:
        return SpeedUp()
    if words == ["slow", "down"]:
        return SlowDown()
    raise UnknownCommand(f"unknown command: {text!r}")


def _interpret_baseline(words: list[str], text: str) -> ParsedCommand:
    if len(words) >= 4 and words[0] in ("go", "move") and words[1] == "to" and words[2] == "cell":
        m = _GO_TO_CELL.match(text)
        return GoToCell(m.group(2).strip())
    if words[:1] == ["move"] and len(words) in (2, 3) and words[1] in _DIRECTIONS:
        count = 1
        if len(words) == 3:
            if not words[2].isdigit() or int(words[2]) < 1:
                raise UnknownCommand(f"bad move count in {text!r}")
            count = int(words[2])
        return Move(_DIRECTIONS[words[1]], count)
    if words == ["next", "worksheet"]:
        return NextWorksheet()
    if words == ["previous", "worksheet"]:
        return PrevWorksheet()
    if (
        len(words) == 3
        and words[0] == "press"
        and words[1] in ("control", "ctrl")
        and words[2] in _DIRECTIONS
    ):
        return PressCtrlArrow(_DIRECTIONS[words[2]])
    raise UnknownCommand(f"unknown command: {text!r}")


def interpret(text: str, command_set: CommandSet) -> ParsedCommand:
    """Parse one utterance under the given vocabulary.

    "jump <word>" resolves by the word's class: palette color, direction,
    or "back" — the vocabularies are disjoint so no utterance is ambiguous.
    """
    words = _normalize(text)
    if not words:
        raise UnknownCommand("empty command")
    if words == ["mark", "error"]:
        return MarkError()
    if words == ["unmark", "error"]:
        return UnmarkError()
    if command_set is CommandSet.IVOICE:
        return _interpret_ivoice(words, text)
    return _interpret_baseline(words, text)


def canonical_text(cmd: ParsedCommand) -> str:
    """A text form that interprets back to ``cmd`` in its home set."""
    match cmd:
        case JumpColor(color):
            return f"jump {color.value}"
        case JumpBack():
            return "jump back"
        case JumpBlank(direction):
            return f"jump {direction.value}"
        case ScanStart(direction):
            return f"scan {direction.value}"
        case ScanStop():
            return "stop"
        case ShowColors():
            return "show colours"
        case HideColors():
            return "hide colours"
        case SpeedUp():
            return "speed up"
        case SlowDown():
            return "slow down"
        case MarkError():
            return "mark error"
        case UnmarkError():
            return "unmark error"
        case GoToCell(addr_text):
            return f"go to cell {addr_text}"
        case Move(direction, count):
            return f"move {direction.value} {count}" if count != 1 else f"move {direction.value}"
        case NextWorksheet():
            return "next worksheet"
        case PrevWorksheet():
            return "previous worksheet"
        case PressCtrlArrow(direction):
            return f"press control {direction.value}"
    raise CommandError(f"unknown command object: {cmd!r}")


def home_set(cmd: ParsedCommand) -> CommandSet:
    if isinstance(cmd, (GoToCell, Move, NextWorksheet, PrevWorksheet, PressCtrlArrow)):
        return CommandSet.BASELINE
    return CommandSet.IVOICE


def command_count(script: list[ParsedCommand]) -> int:
    """Commands needed to run a script; the unit for comparing techniques."""
    return len(script)


VOCABULARY: dict[CommandSet, tuple[str, ...]] = {
    CommandSet.IVOICE: (
        "jump <colour>",
        "jump back",
        "jump <direction>",
        "scan <direction>",
        "stop",
        "show colours",
        "hide colours",
        "speed up",
        "slow down",
        "mark error",
        "unmark error",
    ),
    CommandSet.BASELINE: (
        "go to cell <addr>",
        "move to cell <addr>",
        "move <direction> [count]",
        "next worksheet",
        "previous worksheet",
        "press control <direction>",
        "mark error",
        "unmark error",
    ),
}
