"""
Key-value config file parser.

Accepts a YAML mapping or plain `key = value` lines; keys may use dashes
or underscores (`grid-step` and `grid_step` are the same key).
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from src.core.errors import ConfigError

logger = logging.getLogger(__name__)

# `key = value` with optional comment lines starting with #
ASSIGNMENT_PATTERN = re.compile(r"^\s*([A-Za-z][\w-]*)\s*=\s*(.*?)\s*$")


@dataclass
class ParsedConfig:
    """
    Parsed config file.

    Attributes:
        values: Normalised key -> value mapping
        source: Path the values came from, if any
        raw: Original file content
    """

    values: dict[str, Any] = field(default_factory=dict)
    source: Path | None = None
    raw: str = ""


class ParseError(ConfigError):
    """Exception raised when a config file cannot be parsed."""

    pass


class ConfigFileParser:
    """
    Parser for experiment config files.

    Example:
        parser = ConfigFileParser()
        parsed = parser.parse("system: sphere\\ndepth: 8\\n")
        parsed.values  # {"system": "sphere", "depth": 8}
    """

    def parse(self, raw_content: str, source: Path | None = None) -> ParsedConfig:
        """
        Parse config content.

        Args:
            raw_content: File content
            source: Where the content came from

        Returns:
            ParsedConfig with normalised keys

        Raises:
            ParseError: If the content is neither a YAML mapping nor key = value lines
        """
        if not raw_content.strip():
            return ParsedConfig(source=source, raw=raw_content)

        if self._looks_like_assignments(raw_content):
            values = self._parse_assignments(raw_content)
        else:
            try:
                data = yaml.safe_load(raw_content)
            except yaml.YAMLError as e:
                raise ParseError(f"Invalid YAML config: {e}") from e
            if not isinstance(data, dict):
                raise ParseError(f"Config must be a mapping, got {type(data).__name__}")
            values = data

        normalised = {self.normalise_key(str(k)): v for k, v in values.items()}
        logger.debug(f"Parsed {len(normalised)} config keys from {source or 'string'}")
        return ParsedConfig(values=normalised, source=source, raw=raw_content)

    def parse_file(self, path: Path | str) -> ParsedConfig:
        """
        Read and parse a config file.

        Raises:
            ParseError: If the file is missing or malformed
        """
        path = Path(path)
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"Cannot read config file {path}: {e}") from e
        return self.parse(content, source=path)

    @staticmethod
    def normalise_key(key: str) -> str:
        return key.strip().replace("-", "_").lower()

    @staticmethod
    def _looks_like_assignments(content: str) -> bool:
        lines = [ln for ln in content.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        return bool(lines) and all(ASSIGNMENT_PATTERN.match(ln) for ln in lines)

    def _parse_assignments(self, content: str) -> dict[str, Any]:
        """Parse `key = value` lines, reading each value as a YAML scalar or list."""
        values: dict[str, Any] = {}
        for line in content.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            match = ASSIGNMENT_PATTERN.match(line)
            key, text = match.group(1), match.group(2)
            try:
                values[key] = yaml.safe_load(text) if text else None
            except yaml.YAMLError as e:
                raise ParseError(f"Invalid value for {key!r}: {e}") from e
        return values
