"""Scenario files: flat ``key = value`` lines plus optional per-protocol sections.

    protocol = dsdv
    n = 10
    pause = 100      # comment

    [dsdv]
    settling_time = 4

    [sweep]
    axis = pause
    values = 0, 300, 600, 900
    seeds = 3

Keys before the first section header describe the scenario itself.
"""
import configparser
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import ValidationError

from ..errors import ConfigError
from ..models import ScenarioConfig, SweepAxis, SweepSpec

logger = logging.getLogger(__name__)

SCENARIO_SECTION = "scenario"
SWEEP_SECTION = "sweep"
PROTOCOL_SECTIONS = ("dsdv", "fsr", "olsr", "olsr_m")
M_VARIANT_DEFAULTS = {"hello_interval": "1.0", "tc_interval": "2.5", "variant": "M"}

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]\s*$")
_KEY_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*[=:]")

LineMap = Dict[Tuple[str, str], int]


def _line_map(text: str) -> LineMap:
    """1-based source line of every ``(section, key)``."""
    lines: LineMap = {}
    section = SCENARIO_SECTION
    for number, line in enumerate(text.splitlines(), start=1):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip().lower()
            lines.setdefault((section, ""), number)
            continue
        m = _KEY_RE.match(line)
        if m:
            lines.setdefault((section, m.group(1).lower()), number)
    return lines


def _parser(text: str, source: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        comment_prefixes=("#", ";"),
        inline_comment_prefixes=("#", ";"),
        interpolation=None,
        strict=True,
    )
    try:
        parser.read_string(f"[{SCENARIO_SECTION}]\n{text}", source=source)
    except configparser.ParsingError as e:
        # the synthetic header shifts every line by one
        line = e.errors[0][0] - 1 if e.errors else None
        raise ConfigError(f"cannot parse {source}: {e.errors[0][1].strip() if e.errors else e}", line=line) from e
    except configparser.Error as e:
        line = getattr(e, "lineno", None)
        raise ConfigError(f"cannot parse {source}: {e.message}", line=line - 1 if line else None) from e
    return parser


def _mentioned_key(message: str, section: str, lines: LineMap) -> Optional[str]:
    """The file key named earliest in a cross-field validation message."""
    hits = []
    for where, key in lines:
        if where != section or not key:
            continue
        m = re.search(rf"\b{re.escape(key)}\b", message)
        if m:
            hits.append((m.start(), key))
    return min(hits)[1] if hits else None


def _config_error(e: ValidationError, lines: LineMap, section: str = SCENARIO_SECTION) -> ConfigError:
    """First validation problem, pinned to the line of the key that caused it."""
    first = e.errors()[0]
    loc = tuple(str(part) for part in first.get("loc", ()))
    key: Optional[str] = None
    where = section
    if section == SCENARIO_SECTION and len(loc) >= 2 and loc[0] == "protocol_params":
        where = loc[1]
        key = loc[2] if len(loc) >= 3 else None
    elif loc:
        key = loc[0]
    else:
        key = _mentioned_key(first["msg"], where, lines)
    lookup = "range" if where == SCENARIO_SECTION and key == "radio_range" else key
    line = lines.get((where, lookup)) if lookup else None
    if line is None and where != SCENARIO_SECTION:
        line = lines.get((where, ""))
    if first.get("type") == "extra_forbidden":
        message = f"unknown key {key!r}"
    else:
        message = f"{key}: {first['msg']}" if key else first["msg"]
    if where != SCENARIO_SECTION:
        message = f"[{where}] {message}"
    return ConfigError(message, line=line, key=key)


def parse_scenario(text: str, source: str = "<scenario>") -> Tuple[ScenarioConfig, Optional[SweepSpec]]:
    lines = _line_map(text)
    parser = _parser(text, source)
    values: Dict[str, Any] = dict(parser[SCENARIO_SECTION])
    params: Dict[str, Dict[str, str]] = {}
    sweep_values: Optional[Dict[str, Any]] = None
    for section in parser.sections():
        if section == SCENARIO_SECTION:
            continue
        name = section.strip().lower()
        if name == SWEEP_SECTION:
            sweep_values = dict(parser[section])
        elif name in PROTOCOL_SECTIONS:
            params[name] = dict(parser[section])
        else:
            raise ConfigError(f"unknown section [{section}]", line=lines.get((name, "")), key=section)
    if "olsr_m" in params:
        params["olsr_m"] = {**M_VARIANT_DEFAULTS, **params["olsr_m"]}
    if params:
        values["protocol_params"] = params
    try:
        cfg = ScenarioConfig.model_validate(values)
    except ValidationError as e:
        raise _config_error(e, lines) from e
    sweep = None
    if sweep_values is not None:
        if "values" in sweep_values:
            sweep_values["values"] = [v.strip() for v in sweep_values["values"].split(",") if v.strip()]
        try:
            sweep = SweepSpec.model_validate(sweep_values)
        except ValidationError as e:
            raise _config_error(e, lines, SWEEP_SECTION) from e
    logger.debug("loaded %s: protocol=%s n=%d duration=%g", source, cfg.protocol.value, cfg.n, cfg.duration)
    return cfg, sweep


def load_scenario(path: Union[str, Path]) -> Tuple[ScenarioConfig, Optional[SweepSpec]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    return parse_scenario(text, source=str(path))


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Validated scenario with defaults filled in for everything the file leaves out."""
    return load_scenario(path)[0]


def parse_sweep_arg(arg: str, seeds: int = 1) -> SweepSpec:
    """``axis=v1,v2,...`` from the command line."""
    axis, sep, raw = arg.partition("=")
    if not sep:
        raise ConfigError(f"sweep must look like axis=v1,v2,..., got {arg!r}", key="sweep")
    try:
        return SweepSpec(
            axis=SweepAxis(axis.strip()),
            values=[float(v) for v in raw.split(",") if v.strip()],
            seeds=seeds,
        )
    except ValueError as e:
        raise ConfigError(f"invalid sweep {arg!r}: {e}", key="sweep") from e
