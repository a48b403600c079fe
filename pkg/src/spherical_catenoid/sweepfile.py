# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Sweep configuration files, table emission and run records.

A sweep config is a flat text file of `key = value` lines:

    # radius of five catenoids
    mode        = radius
    a_min       = 0.6
    a_max       = 10
    a_count     = 5
    output_path = radius.csv
"""

import io
import re
import csv
import json
import math
import shutil
import typing as typ
import logging
import collections

import pylev
import numpy as np
import pathlib2 as pl

from .numerics import Tolerance
from .catenoid import A_GUARD

logger = logging.getLogger('spherical_catenoid')


MODES = (
    'profile',
    'radius',
    'spectrum',
    'index',
    'asymptotics-large',
    'asymptotics-degenerate',
    'constants',
)

FORMATS = ('csv', 'json')

KNOWN_KEYS = (
    'mode',
    'a_values',
    'a_min',
    'a_max',
    'a_count',
    'k_max',
    's_samples',
    'mu_max',
    'tol_abs',
    'tol_rel',
    'output_path',
    'output_format',
    'jobs',
)

SUGGESTION_MAX_EDIT_DISTANCE = 3


# https://regex101.com/r/7Kq2mB/1
_CONFIG_LINE_PATTERN = r"""
^
    (?P<indent>\s*)
    (?P<key>[A-Za-z_][A-Za-z0-9_]*)
    \s*=\s*
    (?P<value>.*?)
    \s*
$
"""

CONFIG_LINE_RE = re.compile(_CONFIG_LINE_PATTERN, flags=re.VERBOSE)


class ConfigError(Exception):
    def __init__(self, msg: str, path: str = "<config>", lineno: int = 0, column: int = 0) -> None:
        super().__init__(msg)
        self.msg    = msg
        self.path   = path
        self.lineno = lineno
        self.column = column

    def __str__(self) -> str:
        return f"{self.path}:{self.lineno}:{self.column}: {self.msg}"


class ConfigItem(typ.NamedTuple):

    key   : str
    value : str
    lineno: int
    column: int     # 1-based column of the value


class SweepConfig(typ.NamedTuple):

    mode         : str
    a_values     : typ.Tuple[float, ...]
    k_max        : int
    s_samples    : int
    mu_max       : float
    tol_abs      : typ.Optional[float]
    tol_rel      : typ.Optional[float]
    output_path  : str
    output_format: str
    jobs         : int
    a_range      : typ.Optional[typ.Tuple[float, float, int]]

    @property
    def tol(self) -> typ.Optional[Tolerance]:
        if self.tol_abs is None and self.tol_rel is None:
            return None
        default = Tolerance()
        return Tolerance(
            abs_tol=default.abs_tol if self.tol_abs is None else self.tol_abs,
            rel_tol=default.rel_tol if self.tol_rel is None else self.tol_rel,
        ).validated()

    def echo(self) -> typ.Dict[str, typ.Any]:
        echo = collections.OrderedDict(self._asdict())
        echo['a_values'] = list(self.a_values)
        echo['a_range' ] = list(self.a_range) if self.a_range else None
        return dict(echo)


def suggest_key(key: str) -> typ.Optional[str]:
    distances = sorted((pylev.levenshtein(key, known), known) for known in KNOWN_KEYS)
    dist, best = distances[0]
    if dist <= SUGGESTION_MAX_EDIT_DISTANCE:
        return best
    else:
        return None


def _iter_items(text: str, path: str) -> typ.Iterable[ConfigItem]:
    for i, raw_line in enumerate(text.splitlines()):
        lineno = i + 1
        line   = raw_line.split("#", 1)[0]
        if not line.strip():
            continue

        match = CONFIG_LINE_RE.match(line)
        if match is None:
            column = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected 'key = value'", path, lineno, column)

        key = match.group('key')
        if key not in KNOWN_KEYS:
            suggestion = suggest_key(key)
            hint       = f", did you mean '{suggestion}'?" if suggestion else ""
            raise ConfigError(f"unknown key '{key}'{hint}", path, lineno, match.start('key') + 1)

        yield ConfigItem(key, match.group('value'), lineno, match.start('value') + 1)


def _parse_value(item: ConfigItem, path: str, kind: typ.Callable[[str], typ.Any]) -> typ.Any:
    if item.value == "":
        raise ConfigError(f"missing value for '{item.key}'", path, item.lineno, item.column)
    try:
        value = kind(item.value)
    except ValueError:
        raise ConfigError(
            f"invalid value for '{item.key}': {item.value!r}", path, item.lineno, item.column
        )
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"value for '{item.key}' must be finite", path, item.lineno, item.column)
    return value


def _parse_float_list(text: str) -> typ.Tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _check_a(value: float, item: ConfigItem, path: str) -> None:
    if not value > A_GUARD:
        raise ConfigError(
            f"'{item.key}' values must satisfy a > 1/2, got {value!r}", path, item.lineno, item.column
        )


def loads(text: str, path: str = "<config>") -> SweepConfig:
    items: typ.Dict[str, ConfigItem] = {}
    for item in _iter_items(text, path):
        if item.key in items:
            first = items[item.key].lineno
            raise ConfigError(
                f"duplicate key '{item.key}' (first set on line {first})", path, item.lineno, 1
            )
        items[item.key] = item

    def _get(key: str, kind: typ.Callable[[str], typ.Any], default: typ.Any) -> typ.Any:
        if key in items:
            return _parse_value(items[key], path, kind)
        else:
            return default

    if 'mode' not in items:
        raise ConfigError("missing required key 'mode'", path)
    mode = items['mode'].value
    if mode not in MODES:
        raise ConfigError(
            f"unknown mode {mode!r}, expected one of {', '.join(MODES)}",
            path,
            items['mode'].lineno,
            items['mode'].column,
        )
    if 'output_path' not in items:
        raise ConfigError("missing required key 'output_path'", path)

    output_format = _get('output_format', str, 'csv')
    if output_format not in FORMATS:
        item = items['output_format']
        raise ConfigError(f"output_format must be csv or json, got {output_format!r}", path, item.lineno, item.column)

    a_values: typ.Tuple[float, ...] = ()
    a_range : typ.Optional[typ.Tuple[float, float, int]] = None

    has_range = any(key in items for key in ('a_min', 'a_max', 'a_count'))
    if 'a_values' in items and has_range:
        raise ConfigError("use either a_values or a_min/a_max/a_count", path, items['a_values'].lineno, 1)

    if 'a_values' in items:
        item     = items['a_values']
        a_values = _parse_value(item, path, _parse_float_list)
        for value in a_values:
            _check_a(value, item, path)
    elif has_range:
        for key in ('a_min', 'a_max', 'a_count'):
            if key not in items:
                raise ConfigError(f"geometric range requires '{key}'", path)
        a_min   = _parse_value(items['a_min'  ], path, float)
        a_max   = _parse_value(items['a_max'  ], path, float)
        a_count = _parse_value(items['a_count'], path, int)
        _check_a(a_min, items['a_min'], path)
        if not a_min < a_max:
            item = items['a_max']
            raise ConfigError(f"range requires a_min < a_max, got {a_min!r} >= {a_max!r}", path, item.lineno, item.column)
        if a_count < 2:
            item = items['a_count']
            raise ConfigError(f"a_count must be >= 2, got {a_count}", path, item.lineno, item.column)
        a_range  = (a_min, a_max, a_count)
        a_values = tuple(float(a) for a in np.geomspace(a_min, a_max, a_count))
    elif mode != 'constants':
        raise ConfigError(f"mode '{mode}' requires a_values or a_min/a_max/a_count", path)

    k_max     = _get('k_max'    , int, 3)
    s_samples = _get('s_samples', int, 101)
    jobs      = _get('jobs'     , int, 1)
    for key, value, minimum in (('k_max', k_max, 0), ('s_samples', s_samples, 2), ('jobs', jobs, 1)):
        if value < minimum:
            item = items[key]
            raise ConfigError(f"'{key}' must be >= {minimum}, got {value}", path, item.lineno, item.column)
    if mode == 'index' and k_max < 2:
        item = items['k_max']
        raise ConfigError(f"index mode requires k_max >= 2, got {k_max}", path, item.lineno, item.column)

    config = SweepConfig(
        mode=mode,
        a_values=a_values,
        k_max=k_max,
        s_samples=s_samples,
        mu_max=_get('mu_max', float, 1.0),
        tol_abs=_get('tol_abs', float, None),
        tol_rel=_get('tol_rel', float, None),
        output_path=items['output_path'].value,
        output_format=output_format,
        jobs=jobs,
        a_range=a_range,
    )
    try:
        config.tol
    except ValueError as ex:
        raise ConfigError(str(ex), path)
    return config


def load(config_path: pl.Path) -> typ.Tuple[SweepConfig, str]:
    """Parsed config and the raw text it was parsed from."""
    if not config_path.exists():
        raise ConfigError("no such config file", str(config_path))
    with config_path.open(mode="r", encoding="utf-8") as fobj:
        text = fobj.read()
    return loads(text, str(config_path)), text


def resolve_output_path(config: SweepConfig, config_path: pl.Path) -> pl.Path:
    output_path = pl.Path(config.output_path)
    if output_path.is_absolute():
        return output_path
    else:
        return config_path.parent / output_path


Cell = typ.Union[None, bool, int, float, str]

FooterItem = typ.Tuple[str, Cell]


class Table(typ.NamedTuple):

    columns: typ.Tuple[str, ...]
    rows   : typ.List[typ.Tuple[Cell, ...]]
    footer : typ.Tuple[FooterItem, ...] = ()


def fmt_cell(value: Cell) -> str:
    """Locale independent text for a cell, doubles with 17 significant digits.

    >>> fmt_cell(0.1)
    '0.10000000000000001'
    >>> fmt_cell(None), fmt_cell(3), fmt_cell(True)
    ('', '3', 'true')
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _json_cell(value: Cell) -> Cell:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def dumps_csv(table: Table) -> str:
    buf    = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt_cell(cell) for cell in row])
    if table.footer:
        writer.writerow(["#footer"] + [f"{key}={fmt_cell(val)}" for key, val in table.footer])
    return buf.getvalue()


def dumps_json(table: Table, meta: typ.Dict[str, typ.Any]) -> str:
    doc: typ.Dict[str, typ.Any] = {
        'meta': meta,
        'rows': [
            {col: _json_cell(cell) for col, cell in zip(table.columns, row)} for row in table.rows
        ],
    }
    if table.footer:
        doc['footer'] = {key: _json_cell(val) for key, val in table.footer}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def dumps_record(table: Table) -> str:
    """A single row as one flat JSON object."""
    if len(table.rows) != 1:
        raise ValueError(f"expected exactly one row, got {len(table.rows)}")
    record = {col: _json_cell(cell) for col, cell in zip(table.columns, table.rows[0])}
    return json.dumps(record, indent=2, allow_nan=False) + "\n"


def dumps(table: Table, output_format: str, meta: typ.Dict[str, typ.Any]) -> str:
    if output_format == 'csv':
        return dumps_csv(table)
    elif output_format == 'json':
        return dumps_json(table, meta)
    else:
        raise ValueError(f"unknown output format {output_format!r}")


def dump(text: str, output_path: pl.Path) -> None:
    tmp_path = output_path.parent / (output_path.name + ".tmp")
    with tmp_path.open(mode="w", encoding="utf-8", newline="\n") as fobj:
        fobj.write(text)
    shutil.move(str(tmp_path), str(output_path))


class RunRecord(typ.NamedTuple):

    config_echo : typ.Dict[str, typ.Any]
    config_text : str
    tool_version: str
    started_at  : str
    n_rows      : int
    warnings    : typ.List[str]


def sidecar_path(output_path: pl.Path) -> pl.Path:
    return output_path.parent / (output_path.name + ".meta.json")


def dump_record(record: RunRecord, output_path: pl.Path) -> None:
    text = json.dumps(record._asdict(), indent=2, allow_nan=False) + "\n"
    dump(text, sidecar_path(output_path))
