from __future__ import annotations

import configparser
import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Mapping, Optional

from onepw import common
from onepw.search import SearchBudget

CONFIG_FILE = "onepw.cfg"
ENV_PREFIX = "ONEPW_"
START_METHODS = ("spawn", "forkserver", "fork")
VERBOSITIES = {"quiet": logging.WARNING, "normal": logging.INFO, "verbose": logging.DEBUG}


def _positive_int(value: str) -> int:
    result = int(value)
    if result <= 0:
        raise ValueError(value)
    return result


def _positive_float(value: str) -> float:
    result = float(value)
    if result <= 0:
        raise ValueError(value)
    return result


def _boolean(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(value)


def _choice(*choices: str) -> Callable[[str], str]:
    def convert(value: str) -> str:
        if value not in choices:
            raise ValueError(value)
        return value

    return convert


_CONVERTERS: dict[str, Callable[[str], object]] = {
    "jobs": _positive_int,
    "max_crossings": _positive_int,
    "max_nodes": _positive_int,
    "time_limit": _positive_float,
    "use_symmetry": _boolean,
    "cache": Path,
    "start_method": _choice(*START_METHODS),
    "verbosity": _choice(*VERBOSITIES),
}


@dataclass(frozen=True)
class RunConfig:
    jobs: int = 1
    max_crossings: int = 32
    max_nodes: int = 10_000_000
    time_limit: float = 3600.0
    use_symmetry: bool = True
    cache: Optional[Path] = None
    start_method: str = "spawn"
    verbosity: str = "normal"

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(
            max_crossings=self.max_crossings,
            max_nodes=self.max_nodes,
            time_limit=self.time_limit,
            use_symmetry=self.use_symmetry,
        )

    @property
    def log_level(self) -> int:
        return VERBOSITIES[self.verbosity]


def _convert(key: str, value: object, source: str) -> object:
    if not isinstance(value, str):
        return value
    try:
        return _CONVERTERS[key](value)
    except ValueError as e:
        raise common.ArgumentError(f"Invalid value '{value}' for {key} in {source}") from e


def read_config_file(path: Path) -> dict[str, str]:
    """Read `key = value` lines; `#` starts a comment."""

    parser = configparser.ConfigParser(
        comment_prefixes=("#",),
        inline_comment_prefixes=("#",),
        interpolation=None,
    )
    try:
        parser.read_string("[onepw]\n" + path.read_text(), source=str(path))
    except FileNotFoundError:
        return {}
    except configparser.Error as e:
        raise common.ArgumentError(f"Malformed configuration file {path}: {e}") from e
    values = dict(parser["onepw"])
    for key in values:
        if key not in _CONVERTERS:
            raise common.ArgumentError(f"Unknown configuration key '{key}' in {path}")
    return values


def resolve(
    flags: Mapping[str, object],
    environ: Optional[Mapping[str, str]] = None,
    config_file: Optional[Path] = None,
) -> RunConfig:
    """
    Merge settings with precedence flags > environment > configuration file.

    Arguments:
    ---------
    flags: Command-line values; None means not given.
    environ: Environment (default: os.environ).
    config_file: Configuration file (default: onepw.cfg in the current directory).
    """

    environ = os.environ if environ is None else environ
    config_file = config_file or Path(CONFIG_FILE)
    values: dict[str, object] = {}
    for key, value in read_config_file(config_file).items():
        values[key] = _convert(key, value, str(config_file))
    for f in fields(RunConfig):
        name = ENV_PREFIX + f.name.upper()
        if name in environ:
            values[f.name] = _convert(f.name, environ[name], name)
    for key, value in flags.items():
        if key in _CONVERTERS and value is not None:
            values[key] = _convert(key, value, "command line")
    config = RunConfig(**values)  # type: ignore[arg-type]
    for key in ("jobs", "max_crossings", "max_nodes", "time_limit"):
        if getattr(config, key) <= 0:
            raise common.ArgumentError(f"{key} must be positive")
    return config
