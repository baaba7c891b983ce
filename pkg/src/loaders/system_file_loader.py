"""Reader for the line-oriented system file format"""

import logging
import re
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from ..models import ParseError

logger = logging.getLogger(__name__)

_SECTION = re.compile(r"^\[\s*(?P<kind>graph|term|config|scatter)(?:\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*))?\s*\]$")


@dataclass
class RawStatement:
    """One meaningful line of a section"""
    line: int
    tokens: List[str] = field(default_factory=list)
    key: str = ""
    value: str = ""


@dataclass
class RawSection:
    """Section header plus its statements"""
    kind: str
    name: Optional[str]
    line: int
    statements: List[RawStatement] = field(default_factory=list)


@dataclass
class RawSystemDocument:
    """Untyped content of a system file"""
    source: str
    sections: List[RawSection] = field(default_factory=list)

    def of_kind(self, kind: str) -> List[RawSection]:
        return [s for s in self.sections if s.kind == kind]


def strip_comment(line: str) -> str:
    """Drop a trailing # comment that is not inside double quotes"""
    in_quotes = False
    for idx, char in enumerate(line):
        if char == '"':
            in_quotes = not in_quotes
        elif char == "#" and not in_quotes:
            return line[:idx]
    return line


def unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    return value


class SystemFileLoader:
    """Split a system file into typed-later sections"""

    # sections whose statements are `key = value`
    KEY_VALUE_SECTIONS = ("term", "config", "scatter")

    def load(self, path: str) -> RawSystemDocument:
        """Read a system file from disk

        Args:
            path: Path to a UTF-8 system file

        Returns:
            RawSystemDocument with one entry per section
        """
        data = Path(path).read_bytes()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = data.count(b"\n", 0, exc.start) + 1
            raise ParseError(f"not valid UTF-8 at byte {exc.start}", line) from None
        document = self.loads(text, source=str(path))
        logger.info(f"Read {len(document.sections)} sections from {path}")
        return document

    def loads(self, text: str, source: str = "<string>") -> RawSystemDocument:
        document = RawSystemDocument(source=source)
        current: Optional[RawSection] = None

        for number, raw_line in enumerate(text.splitlines(), 1):
            line = strip_comment(raw_line).strip()
            if not line:
                continue

            if line.startswith("["):
                current = self._parse_header(line, number)
                document.sections.append(current)
                continue

            if current is None:
                raise ParseError("statement outside of any section", number)

            current.statements.append(self._parse_statement(current.kind, line, number))

        return document

    def _parse_header(self, line: str, number: int) -> RawSection:
        match = _SECTION.match(line)
        if not match:
            raise ParseError(f"unknown section header {line!r}", number)
        kind, name = match.group("kind"), match.group("name")
        if kind in ("term", "config") and not name:
            raise ParseError(f"[{kind}] sections need a name", number)
        if kind in ("graph", "scatter") and name:
            raise ParseError(f"[{kind}] sections take no name", number)
        return RawSection(kind=kind, name=name, line=number)

    def _parse_statement(self, kind: str, line: str, number: int) -> RawStatement:
        if kind in self.KEY_VALUE_SECTIONS:
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", number)
            key, value = line.split("=", 1)
            return RawStatement(line=number, key=key.strip(), value=unquote(value))
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise ParseError(f"cannot tokenize {line!r}: {exc}", number) from None
        return RawStatement(line=number, tokens=tokens)


def split_option(token: str, number: int) -> Tuple[str, str]:
    """Split `name=value` tokens of graph statements"""
    if "=" not in token:
        raise ParseError(f"expected name=value option, got {token!r}", number)
    key, value = token.split("=", 1)
    return key.strip(), value.strip()
