"""Configuration files and tabular output.

Configuration grammar (UTF-8, ``\\n`` or ``\\r\\n`` line endings)::

    # comment
    [section]
    key = value(, value)* (unit)?

Values are decimal numbers with an optional exponent.  A trailing unit
applies to every value on the line and is converted to SI by a single
multiplication.  Sections are ``membrane`` (required), ``plant``, ``grasp``
and ``sweep``.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from dataclasses import dataclass, fields
from typing import NamedTuple

from .analysis import RoundnessSample, SlideTrace, TrialRecord
from .errors import ConfigError, DomainError, ParseError, UnknownKey, ValidationError
from .harness import Outcome, PlantConfig
from .membrane import MembraneSpec

PRESSURE = {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6}
LENGTH = {"m": 1.0, "mm": 1e-3, "um": 1e-6}
MASS = {"kg": 1.0, "g": 1e-3}
FORCE = {"N": 1.0, "mN": 1e-3}
TIME = {"s": 1.0, "ms": 1e-3}
INV_PRESSURE = {"1/Pa": 1.0, "1/kPa": 1e-3, "1/MPa": 1e-6}
FORCE_RATE = {"N/s": 1.0}
PRESSURE_PER_VOLT = {"Pa/V": 1.0, "kPa/V": 1e3}
ACCEL = {"m/s^2": 1.0}
NONE = {}

NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$")
_ENTRY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")
_VALUES_RE = re.compile(
    rf"^({NUMBER}(?:\s*,\s*{NUMBER})*)(?:\s*([A-Za-z/^0-9]*[A-Za-z][A-Za-z/^0-9]*))?$"
)


@dataclass(frozen=True)
class Key:
    units: dict
    required: bool = False
    kind: str = "float"  # float | int | list


MEMBRANE_KEYS = {
    "sigma0": Key(PRESSURE, True),
    "t": Key(LENGTH, True),
    "a": Key(LENGTH, True),
    "E": Key(PRESSURE, True),
    "nu": Key(NONE, True),
    "h_max": Key(LENGTH, True),
    "g": Key(LENGTH, True),
    "E0": Key(PRESSURE, True),
    "eta": Key(INV_PRESSURE, True),
    "tau_s": Key(PRESSURE, True),
    "mu_rim": Key(NONE),
}

PLANT_KEYS = {
    "volts_to_pascals": Key(PRESSURE_PER_VOLT),
    "pressure_tau": Key(TIME),
    "loadcell_sigma": Key(FORCE),
    "mu_sigma": Key(NONE),
    "timestep": Key(TIME),
    "seed": Key(NONE, kind="int"),
    "close_rate": Key(FORCE_RATE),
    "hold_time": Key(TIME),
    "lift_time": Key(TIME),
    "transport_time": Key(TIME),
    "transport_factor": Key(NONE),
    "max_close_time": Key(TIME),
}

GRASP_KEYS = {
    "contacts": Key(NONE, kind="int"),
    "per_bulge": Key(NONE, kind="int"),
    "gravity": Key(ACCEL),
    "safety_factor": Key(NONE),
}

SWEEP_KEYS = {
    "mass": Key(MASS, True),
    "n_grid": Key(FORCE, True, kind="list"),
    "p_grid": Key(PRESSURE, True, kind="list"),
}

SECTIONS = {
    "membrane": MEMBRANE_KEYS,
    "plant": PLANT_KEYS,
    "grasp": GRASP_KEYS,
    "sweep": SWEEP_KEYS,
}


@dataclass(frozen=True)
class GraspSettings:
    contacts: int = 2
    per_bulge: int = 3
    gravity: float = 9.81
    safety_factor: float = 1.0

    def __post_init__(self):
        for name in ("contacts", "per_bulge"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}", field=name)
            object.__setattr__(self, name, int(value))
        if not self.gravity > 0:
            raise DomainError(f"gravity must be > 0, got {self.gravity!r}", field="gravity")
        if not self.safety_factor > 0:
            raise DomainError("safety_factor must be > 0", field="safety_factor")


@dataclass(frozen=True)
class SweepSpec:
    mass: float
    n_grid: tuple
    p_grid: tuple

    def __post_init__(self):
        if not self.mass >= 0:
            raise DomainError(f"mass must be >= 0, got {self.mass!r}", field="mass")
        for name in ("n_grid", "p_grid"):
            grid = tuple(float(x) for x in getattr(self, name))
            if not grid:
                raise DomainError(f"{name} must not be empty", field=name)
            if any(x < 0 for x in grid):
                raise DomainError(f"{name} values must be >= 0", field=name)
            if list(grid) != sorted(grid):
                raise DomainError(f"{name} must be sorted ascending", field=name)
            object.__setattr__(self, name, grid)


class Config(NamedTuple):
    membrane: MembraneSpec
    plant: PlantConfig
    sweep: SweepSpec | None
    grasp: GraspSettings


def parse_quantity(text, units, what="value"):
    """Parse ``"<number> [unit]"`` into SI using the ``units`` table."""
    m = _VALUES_RE.match(text.strip())
    if not m or "," in m.group(1):
        raise ValueError(f"malformed {what}: {text!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if unit:
        if unit not in units:
            raise ValueError(f"unit {unit!r} not accepted for {what}; use one of {sorted(units)}")
        value = value * units[unit]
    return value


def parse_mass(text):
    """Mass in kilograms from e.g. ``"200g"``, ``"0.2 kg"`` or ``"0.2"``."""
    return parse_quantity(text, MASS, "mass")


def _parse_values(raw, key, spec, lineno):
    m = _VALUES_RE.match(raw.strip())
    if not m:
        raise ParseError(f"malformed value for {key!r}: {raw.strip()!r}", lineno)
    numbers = [s.strip() for s in m.group(1).split(",")]
    unit = m.group(2)
    factor = 1.0
    if unit:
        if unit not in spec.units:
            accepted = ", ".join(sorted(spec.units)) or "none (dimensionless)"
            raise ValidationError(key, f"unit {unit!r} not accepted; allowed units: {accepted}", lineno)
        factor = spec.units[unit]
    if spec.kind == "int":
        if len(numbers) != 1 or unit:
            raise ValidationError(key, "expected a single integer", lineno)
        if not re.fullmatch(r"[+-]?\d+", numbers[0]):
            raise ValidationError(key, f"expected an integer, got {numbers[0]!r}", lineno)
        return int(numbers[0])
    values = [float(s) * factor if unit else float(s) for s in numbers]
    if spec.kind == "list":
        return tuple(values)
    if len(values) != 1:
        raise ValidationError(key, "expected a single value, got a list", lineno)
    return values[0]


def parse_document(text):
    """Split configuration text into ``{section: {key: (value, lineno)}}``."""
    doc = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", lineno)
            if section in doc:
                raise ParseError(f"duplicate section [{section}]", lineno)
            doc[section] = {}
            continue
        m = _ENTRY_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse line: {line!r}", lineno)
        if section is None:
            raise ParseError("entry outside of any section", lineno)
        key, raw = m.groups()
        keys = SECTIONS[section]
        if key not in keys:
            raise UnknownKey(section, key, lineno)
        if key in doc[section]:
            raise ParseError(f"duplicate key {key!r} in [{section}]", lineno)
        doc[section][key] = (_parse_values(raw, key, keys[key], lineno), lineno)
    return doc


def _build(cls, section, entries, lineno_of_section=None):
    keys = SECTIONS[section]
    for name, spec in keys.items():
        if spec.required and name not in entries:
            raise ValidationError(name, f"required key missing from [{section}]", lineno_of_section)
    kwargs = {k: v for k, (v, _) in entries.items()}
    try:
        return cls(**kwargs)
    except DomainError as exc:
        lineno = entries[exc.field][1] if exc.field in entries else None
        raise ValidationError(exc.field or section, str(exc), lineno) from None


def config_from_text(text):
    doc = parse_document(text)
    if "membrane" not in doc:
        raise ValidationError("membrane", "a [membrane] section is required")
    membrane = _build(MembraneSpec, "membrane", doc["membrane"])
    plant = _build(PlantConfig, "plant", doc.get("plant", {}))
    grasp = _build(GraspSettings, "grasp", doc.get("grasp", {}))
    sweep = _build(SweepSpec, "sweep", doc["sweep"]) if "sweep" in doc else None
    return Config(membrane, plant, sweep, grasp)


def load_config(path):
    """Read and validate a configuration file.

    Raises
    ------
    ParseError, ValidationError, UnknownKey
        With the offending line number where one exists.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        return config_from_text(fh.read())


def fmt(value):
    """Shortest round-trip text for a table cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config):
    """Canonical SI text for a :class:`Config`; reloading gives equal objects."""
    out = []
    sections = [("membrane", config.membrane), ("plant", config.plant), ("grasp", config.grasp)]
    if config.sweep is not None:
        sections.append(("sweep", config.sweep))
    for name, obj in sections:
        out.append(f"[{name}]")
        for f in fields(obj):
            value = getattr(obj, f.name)
            if isinstance(value, tuple):
                text = ", ".join(repr(float(v)) for v in value)
            elif SECTIONS[name][f.name].kind == "int":
                text = str(int(value))
            else:
                text = repr(float(value))
            out.append(f"{f.name} = {text}")
        out.append("")
    return "\n".join(out)


# ---- tables -----------------------------------------------------------------

def format_table(header, rows, fmt_name="csv"):
    """Render rows as CSV (``\\n`` endings) or a JSON array of objects."""
    if fmt_name == "json":
        objs = [dict(zip(header, (_json_value(v) for v in row))) for row in rows]
        return json.dumps(objs, indent=2) + "\n"
    if fmt_name != "csv":
        raise ValueError(f"unknown format {fmt_name!r}")
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, float) and v != v:
        return None
    return v


def _open_text(path):
    if path == "-":
        return io.StringIO(sys.stdin.read())
    return open(path, encoding="utf-8", newline="")


def _read_rows(path, required):
    with _open_text(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ConfigError(f"{path}: empty CSV")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise ConfigError(f"{path}: missing columns {missing}")
        return list(reader)


def read_trace_csv(path):
    """Load a ``t,fy,fz`` slide trace."""
    rows = _read_rows(path, ("t", "fy", "fz"))
    try:
        cols = [[float(r[c]) for r in rows] for c in ("t", "fy", "fz")]
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return SlideTrace(*cols)


def write_trace_csv(trace):
    rows = zip(trace.t.tolist(), trace.fy.tolist(), trace.fz.tolist())
    return format_table(("t", "fy", "fz"), rows)


def read_records_csv(path):
    """Load ``n_newton,p_pascal,outcome`` trial records."""
    out = []
    for i, r in enumerate(_read_rows(path, ("n_newton", "p_pascal", "outcome")), start=2):
        try:
            out.append(TrialRecord(float(r["n_newton"]), float(r["p_pascal"]),
                                   Outcome(r["outcome"].strip().lower())))
        except ValueError as exc:
            raise ConfigError(f"{path}: line {i}: {exc}") from None
    return out


def read_roundness_csv(path):
    """Load ``mass_kg,n_newton,p_pascal,d_min_m,d_max_m,outcome`` samples."""
    cols = ("mass_kg", "n_newton", "p_pascal", "d_min_m", "d_max_m", "outcome")
    out = []
    for i, r in enumerate(_read_rows(path, cols), start=2):
        try:
            out.append(RoundnessSample(
                float(r["mass_kg"]), float(r["n_newton"]), float(r["p_pascal"]),
                float(r["d_min_m"]), float(r["d_max_m"]),
                Outcome(r["outcome"].strip().lower()),
            ))
        except ValueError as exc:
            raise ConfigError(f"{path}: line {i}: {exc}") from None
    return out
