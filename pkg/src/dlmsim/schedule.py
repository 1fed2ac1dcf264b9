"""Schedules of data / reset / hardware-reset blocks and their text format.

Format (line oriented, ``#`` starts a comment)::

    phase0 0
    phase1 0
    gamma 0.99
    seed 42
    blocks:
      data 100
      reset 10000 port=1 phase=rand
      hwreset scope=bs1
      data 100 port=0

Header keys may come in any order, each exactly once, all before ``blocks:``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidParameter, ScheduleSemanticError, ScheduleSyntaxError

HW_SCOPES = ("all", "bs1", "bs2")
HEADER_KEYS = ("phase0", "phase1", "gamma", "seed")


@dataclass(frozen=True)
class DataBlock:
    count: int
    port: int = 0

    kind = "data"

    def __post_init__(self) -> None:
        _check_count(self.count)
        _check_port(self.port)


@dataclass(frozen=True)
class ResetBlock:
    """Undetected photons injected to overwrite the beamsplitter registers.

    ``phase`` is either a fixed input phase or ``None`` for a phase drawn
    uniformly from [0, 2*pi) per photon.
    """

    count: int
    port: int = 1
    phase: float | None = 0.0

    kind = "reset"

    def __post_init__(self) -> None:
        _check_count(self.count)
        _check_port(self.port)
        if self.phase is not None and not math.isfinite(self.phase):
            raise InvalidParameter(f"reset phase must be finite, got {self.phase!r}")

    @property
    def random_phase(self) -> bool:
        return self.phase is None


@dataclass(frozen=True)
class HwResetBlock:
    scope: str = "all"

    kind = "hwreset"

    def __post_init__(self) -> None:
        if self.scope not in HW_SCOPES:
            raise InvalidParameter(f"scope must be one of {HW_SCOPES}, got {self.scope!r}")


Block = Union[DataBlock, ResetBlock, HwResetBlock]


def _check_count(count: int) -> None:
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise InvalidParameter(f"block count must be an integer >= 1, got {count!r}")


def _check_port(port: int) -> None:
    if port not in (0, 1):
        raise InvalidParameter(f"port must be 0 or 1, got {port!r}")


@dataclass(frozen=True)
class Schedule:
    blocks: tuple[Block, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def total_data(self) -> int:
        return sum(b.count for b in self.blocks if isinstance(b, DataBlock))

    @property
    def total_events(self) -> int:
        return sum(b.count for b in self.blocks if not isinstance(b, HwResetBlock))

    def __add__(self, other: Schedule) -> Schedule:
        return Schedule(self.blocks + other.blocks)

    def __mul__(self, times: int) -> Schedule:
        return Schedule(self.blocks * times)

    __rmul__ = __mul__


def sched(*blocks: Block) -> Schedule:
    return Schedule(blocks)


@dataclass(frozen=True)
class ScheduleDoc:
    phase0: float
    phase1: float
    gamma: float
    seed: int
    schedule: Schedule = field(default_factory=Schedule)


# ---------------------------------------------------------------- parsing

_FLOAT_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\Z")
_UINT_RE = re.compile(r"\d+\Z")


@dataclass(frozen=True)
class _Word:
    text: str
    column: int


def _words(line: str) -> Iterator[_Word]:
    for m in re.finditer(r"\S+", line):
        yield _Word(m.group(), m.start() + 1)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _float(word: _Word, lineno: int, what: str) -> float:
    if not _FLOAT_RE.match(word.text):
        raise ScheduleSyntaxError(f"expected a number for {what}, got {word.text!r}", lineno, word.column)
    return float(word.text)


def _uint(word: _Word, lineno: int, what: str) -> int:
    if not _UINT_RE.match(word.text):
        raise ScheduleSyntaxError(
            f"expected an unsigned integer for {what}, got {word.text!r}", lineno, word.column
        )
    return int(word.text)


def _options(
    words: list[_Word], allowed: tuple[str, ...], lineno: int
) -> dict[str, tuple[str, _Word]]:
    opts: dict[str, tuple[str, _Word]] = {}
    for w in words:
        key, eq, value = w.text.partition("=")
        if not eq or not value:
            raise ScheduleSyntaxError(f"expected key=value option, got {w.text!r}", lineno, w.column)
        if key not in allowed:
            raise ScheduleSyntaxError(f"unknown option {key!r}", lineno, w.column)
        if key in opts:
            raise ScheduleSyntaxError(f"duplicate option {key!r}", lineno, w.column)
        opts[key] = (value, w)
    return opts


def _option_port(opts: dict, default: int, lineno: int) -> int:
    if "port" not in opts:
        return default
    value, w = opts["port"]
    if value not in ("0", "1"):
        raise ScheduleSyntaxError(f"port must be 0 or 1, got {value!r}", lineno, w.column + len("port="))
    return int(value)


def _parse_block(words: list[_Word], lineno: int) -> Block:
    head = words[0]
    kind = head.text
    if kind in ("data", "reset"):
        if len(words) < 2:
            raise ScheduleSyntaxError(f"{kind} block needs a photon count", lineno, head.column + len(kind))
        count = _uint(words[1], lineno, f"{kind} count")
        if count < 1:
            raise ScheduleSemanticError("block count must be >= 1", lineno, words[1].column)
        if kind == "data":
            opts = _options(words[2:], ("port",), lineno)
            return DataBlock(count, _option_port(opts, 0, lineno))
        opts = _options(words[2:], ("port", "phase"), lineno)
        port = _option_port(opts, 1, lineno)
        phase: float | None = 0.0
        if "phase" in opts:
            value, w = opts["phase"]
            if value == "rand":
                phase = None
            else:
                phase = _float(_Word(value, w.column + len("phase=")), lineno, "phase")
        return ResetBlock(count, port, phase)
    if kind == "hwreset":
        opts = _options(words[1:], ("scope",), lineno)
        scope = "all"
        if "scope" in opts:
            value, w = opts["scope"]
            if value not in HW_SCOPES:
                raise ScheduleSyntaxError(
                    f"scope must be one of {', '.join(HW_SCOPES)}, got {value!r}",
                    lineno,
                    w.column + len("scope="),
                )
            scope = value
        return HwResetBlock(scope)
    raise ScheduleSyntaxError(f"unknown block kind {kind!r}", lineno, head.column)


def parse_schedule(text: str) -> ScheduleDoc:
    """Parse a schedule document; raises on the first problem found."""
    header: dict[str, float | int] = {}
    blocks: list[Block] = []
    in_blocks = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = list(_words(_strip_comment(raw)))
        if not words:
            continue
        head = words[0]
        if not in_blocks:
            if head.text == "blocks:":
                if len(words) > 1:
                    raise ScheduleSyntaxError("unexpected text after 'blocks:'", lineno, words[1].column)
                in_blocks = True
                continue
            if head.text not in HEADER_KEYS:
                raise ScheduleSyntaxError(f"unknown key {head.text!r}", lineno, head.column)
            if head.text in header:
                raise ScheduleSemanticError(f"duplicate header key {head.text!r}", lineno, head.column)
            if len(words) != 2:
                col = words[2].column if len(words) > 2 else head.column + len(head.text)
                raise ScheduleSyntaxError(f"{head.text} takes exactly one value", lineno, col)
            value_word = words[1]
            if head.text == "seed":
                seed = _uint(value_word, lineno, "seed")
                if seed >= 2**64:
                    raise ScheduleSemanticError("seed must fit in 64 bits", lineno, value_word.column)
                header["seed"] = seed
            else:
                value = _float(value_word, lineno, head.text)
                if head.text == "gamma" and not (0.0 <= value < 1.0):
                    raise ScheduleSemanticError(
                        f"gamma must lie in [0, 1), got {value_word.text}", lineno, value_word.column
                    )
                header[head.text] = value
            continue
        if head.text in HEADER_KEYS or head.text == "blocks:":
            raise ScheduleSyntaxError(f"{head.text!r} not allowed inside blocks", lineno, head.column)
        blocks.append(_parse_block(words, lineno))
    missing = [k for k in HEADER_KEYS if k not in header]
    if missing:
        raise ScheduleSemanticError(f"missing header key(s): {', '.join(missing)}")
    if not in_blocks:
        raise ScheduleSemanticError("missing 'blocks:' section")
    if not blocks:
        raise ScheduleSemanticError("'blocks:' needs at least one block")
    return ScheduleDoc(
        phase0=float(header["phase0"]),
        phase1=float(header["phase1"]),
        gamma=float(header["gamma"]),
        seed=int(header["seed"]),
        schedule=Schedule(tuple(blocks)),
    )


def _fmt_float(x: float) -> str:
    return repr(float(x))


def serialize_schedule(doc: ScheduleDoc) -> str:
    lines = [
        f"phase0 {_fmt_float(doc.phase0)}",
        f"phase1 {_fmt_float(doc.phase1)}",
        f"gamma {_fmt_float(doc.gamma)}",
        f"seed {doc.seed}",
        "blocks:",
    ]
    for b in doc.schedule.blocks:
        if isinstance(b, DataBlock):
            lines.append(f"  data {b.count} port={b.port}")
        elif isinstance(b, ResetBlock):
            phase = "rand" if b.phase is None else _fmt_float(b.phase)
            lines.append(f"  reset {b.count} port={b.port} phase={phase}")
        else:
            lines.append(f"  hwreset scope={b.scope}")
    return "\n".join(lines) + "\n"
