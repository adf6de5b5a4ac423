"""Flag-selection file parsing.

The files are plain text, UTF-8, one flag per line, ``#`` comments,
pipe-delimited columns::

    token|kind|default|label            (input flags)
    token|kind|default|label|refresh    (update flags)

``kind`` is one of bool, int, float, string, infile, or ``enum(a,b,c)``;
``refresh`` is a comma-separated subset of {outputs, viewer}.  A bare
line holding only a token is boolean shorthand in input mode.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import SblgenError

KINDS = ("bool", "int", "float", "string", "infile", "enum")
REFRESH_TARGETS = ("outputs", "viewer")

_ENUM_RE = re.compile(r"^enum\((.*)\)$")


class FlagsError(SblgenError):
    pass


class BadLine(FlagsError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DuplicateToken(FlagsError):
    def __init__(self, lineno: int, token: str):
        super().__init__(f"line {lineno}: duplicate token {token!r}")
        self.lineno = lineno
        self.token = token


class BadRefresh(FlagsError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class BadEnum(FlagsError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class FlagSpec:
    token: str
    kind: str
    default: str = ""
    label: str = ""
    enum_choices: tuple[str, ...] = ()


@dataclass(frozen=True)
class UpdateFlagSpec(FlagSpec):
    refresh: frozenset[str] = field(default_factory=frozenset)

    def refresh_ordered(self) -> tuple[str, ...]:
        return tuple(t for t in REFRESH_TARGETS if t in self.refresh)


def parse_flags_file(document: str, mode: str) -> list[FlagSpec]:
    """Parse one flag-selection document; records come back in file order."""
    if mode not in ("input", "update"):
        raise ValueError(f"mode must be 'input' or 'update', got {mode!r}")

    records: list[FlagSpec] = []
    seen: set[str] = set()
    # split on \n only: unicode line separators may appear inside labels
    for lineno, raw in enumerate(document.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        record = _parse_line(line, lineno, mode)
        if record.token in seen:
            raise DuplicateToken(lineno, record.token)
        seen.add(record.token)
        records.append(record)
    return records


def _parse_line(line: str, lineno: int, mode: str) -> FlagSpec:
    columns = [c.strip() for c in line.split("|")]

    if len(columns) == 1:
        if mode == "update":
            raise BadLine(
                lineno, "update flags need an explicit refresh column"
            )
        token = columns[0]
        _check_token(token, lineno)
        return FlagSpec(token=token, kind="bool", label=token.lstrip("-"))

    expected = 4 if mode == "input" else 5
    if len(columns) != expected:
        raise BadLine(
            lineno,
            f"expected {expected} pipe-delimited columns for mode={mode}, "
            f"got {len(columns)}",
        )

    token, kind_col, default, label = columns[:4]
    _check_token(token, lineno)
    kind, choices = _parse_kind(kind_col, lineno)
    _check_default(kind, choices, default, lineno)

    if mode == "input":
        return FlagSpec(
            token=token, kind=kind, default=default, label=label,
            enum_choices=choices,
        )

    refresh = _parse_refresh(columns[4], lineno)
    return UpdateFlagSpec(
        token=token, kind=kind, default=default, label=label,
        enum_choices=choices, refresh=refresh,
    )


def _check_token(token: str, lineno: int) -> None:
    if not token.startswith("-") or token.strip("-") == "":
        raise BadLine(lineno, f"token must begin with - or --, got {token!r}")
    if any(c.isspace() for c in token):
        raise BadLine(lineno, f"token must not contain whitespace: {token!r}")


def _parse_kind(kind_col: str, lineno: int) -> tuple[str, tuple[str, ...]]:
    m = _ENUM_RE.match(kind_col)
    if m:
        choices = tuple(c.strip() for c in m.group(1).split(",") if c.strip())
        if len(choices) < 2:
            raise BadEnum(lineno, f"enum needs at least 2 choices, got {choices!r}")
        return "enum", choices
    if kind_col == "enum":
        raise BadEnum(lineno, "kind=enum requires choices syntax enum(a,b,c)")
    if kind_col not in KINDS:
        raise BadLine(lineno, f"unknown kind {kind_col!r}")
    return kind_col, ()


def _check_default(kind: str, choices: tuple[str, ...], default: str,
                   lineno: int) -> None:
    if kind == "bool" and default not in ("", "true", "false"):
        raise BadLine(lineno, f"bool default must be empty/true/false, got {default!r}")
    if kind == "int" and default:
        try:
            int(default)
        except ValueError:
            raise BadLine(lineno, f"int default not an integer: {default!r}") from None
    if kind == "float" and default:
        try:
            float(default)
        except ValueError:
            raise BadLine(lineno, f"float default not a number: {default!r}") from None
    if kind == "enum" and default and default not in choices:
        raise BadEnum(lineno, f"enum default {default!r} not among choices {choices!r}")


def _parse_refresh(column: str, lineno: int) -> frozenset[str]:
    targets = [t.strip() for t in column.split(",") if t.strip()]
    if not targets:
        raise BadRefresh(lineno, "refresh set must not be empty")
    for t in targets:
        if t not in REFRESH_TARGETS:
            raise BadRefresh(lineno, f"unknown refresh target {t!r}")
    return frozenset(targets)


def serialize_flags(records: list[FlagSpec]) -> str:
    """Render records back to the file grammar (inverse of parse_flags_file)."""
    lines = []
    for rec in records:
        kind_col = rec.kind
        if rec.kind == "enum":
            kind_col = "enum(%s)" % ",".join(rec.enum_choices)
        columns = [rec.token, kind_col, rec.default, rec.label]
        if isinstance(rec, UpdateFlagSpec):
            columns.append(",".join(rec.refresh_ordered()))
        lines.append("|".join(columns))
    return "\n".join(lines) + ("\n" if lines else "")
