"""Scenario files: strict structured-text descriptions of a computation.

Grammar (one statement per line):

    [section]            starts a section
    key = value          entry; physical values carry a trailing unit token
    # ...                comment (full line or after a value)

Numeric entries must end with a unit annotation: ``mm``, ``mm^-1`` or
``dimensionless``. Integer counts carry no unit. Lists are comma
separated with a single trailing unit, and wavenumber pairs use a colon
(``1:2``). Unknown sections, unknown keys, missing required keys, wrong
units and malformed values are all reported together with line numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

__all__ = [
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "parse_scenario_text",
    "bundled_scenario_path",
]

_UNITS = ("mm", "mm^-1", "dimensionless")


class ScenarioError(ValueError):
    """Validation failure carrying every problem found in the file."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("scenario validation failed:\n" + "\n".join(self.problems))


@dataclass(frozen=True)
class _Field:
    kind: str  # str | float | int | float_list | pair_list
    unit: Optional[str] = None
    required: bool = False
    choices: Optional[tuple] = None
    minimum: Optional[float] = None


_SCHEMA = {
    "geometry": {
        "kind": _Field("str", required=True, choices=("semiopen", "cavity")),
        "length": _Field("float", unit="mm", minimum=0.0),
    },
    "regime": {
        "kind": _Field("str", required=True,
                       choices=("robin_far", "robin_near_dirichlet", "mirror")),
        "lambda": _Field("float", unit="mm", minimum=0.0),
        "kappa1": _Field("float", unit="dimensionless", minimum=0.0),
        "kappa2": _Field("float", unit="dimensionless", minimum=0.0),
        "mass": _Field("float", unit="mm^-1", minimum=0.0),
        "b_amplitude": _Field("float", unit="mm"),
    },
    "drive": {
        "type": _Field("str", required=True,
                       choices=("zero", "sinusoid", "ramped_sinusoid")),
        "epsilon": _Field("float", unit="dimensionless"),
        "omega_d": _Field("float", unit="mm^-1", minimum=0.0),
        "t0": _Field("float", unit="mm", required=True),
        "tf": _Field("float", unit="mm", required=True),
        "ramp": _Field("float", unit="mm", minimum=0.0),
    },
    "analysis": {
        "kbar_points": _Field("int", minimum=1),
        "kbar_max": _Field("float", unit="dimensionless", minimum=0.0),
        "scan_points": _Field("int", minimum=2),
        "delta_k_fraction": _Field("float", unit="dimensionless", minimum=0.0),
        "max_detuning_fraction": _Field("float", unit="dimensionless", minimum=0.0),
        "n_modes": _Field("int", minimum=1),
        "m_max": _Field("int", minimum=1),
        "sudden_eta": _Field("float", unit="dimensionless"),
        "sudden_eta2": _Field("float", unit="dimensionless"),
        "a_values": _Field("float_list", unit="mm^-1"),
        "k_pairs": _Field("pair_list", unit="mm^-1"),
    },
    "numerics": {
        "convergence_threshold": _Field("float", unit="dimensionless", minimum=0.0),
        "linear_tolerance": _Field("float", unit="dimensionless", minimum=0.0),
        "quadratic_tolerance": _Field("float", unit="dimensionless", minimum=0.0),
        "inner_modes": _Field("int", minimum=1),
        "identity_window": _Field("int", minimum=1),
        "grid_points": _Field("int", minimum=2),
        "k_grid_min": _Field("float", unit="mm^-1", minimum=0.0),
        "k_grid_max": _Field("float", unit="mm^-1", minimum=0.0),
    },
}

_DRIVE_SECTIONS = ("drive", "drive1", "drive2")


@dataclass(frozen=True)
class Scenario:
    """Validated scenario with per-section dictionaries of plain values."""

    geometry: dict
    regime: dict
    drives: tuple
    analysis: dict
    numerics: dict
    source: str = ""

    @property
    def drive(self) -> dict:
        return self.drives[0]


def _parse_number(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def _parse_entry(spec: _Field, raw: str, where: str, problems: list):
    if spec.kind == "str":
        value = raw.strip()
        if spec.choices and value not in spec.choices:
            problems.append(f"{where}: value '{value}' not one of {spec.choices}")
            return None
        return value

    parts = raw.split()
    if spec.kind == "int":
        if len(parts) != 1:
            problems.append(f"{where}: integer counts take no unit annotation")
            return None
        try:
            value = int(parts[0])
        except ValueError:
            problems.append(f"{where}: '{parts[0]}' is not an integer")
            return None
        if spec.minimum is not None and value < spec.minimum:
            problems.append(f"{where}: must be >= {spec.minimum:g}")
            return None
        return value

    if len(parts) < 2:
        problems.append(f"{where}: missing unit annotation (expected '{spec.unit}')")
        return None
    unit = parts[-1]
    body = " ".join(parts[:-1])
    if unit not in _UNITS:
        problems.append(f"{where}: unknown unit '{unit}'")
        return None
    if unit != spec.unit:
        problems.append(f"{where}: unit '{unit}' but this field is in '{spec.unit}'")
        return None

    if spec.kind == "float":
        value = _parse_number(body)
        if value is None:
            problems.append(f"{where}: '{body}' is not a number")
            return None
        if spec.minimum is not None and value < spec.minimum:
            problems.append(f"{where}: must be >= {spec.minimum:g}")
            return None
        return value

    items = [s.strip() for s in body.split(",") if s.strip()]
    if not items:
        problems.append(f"{where}: empty list")
        return None
    if spec.kind == "float_list":
        out = []
        for item in items:
            v = _parse_number(item)
            if v is None:
                problems.append(f"{where}: '{item}' is not a number")
                return None
            out.append(v)
        return tuple(out)
    if spec.kind == "pair_list":
        out = []
        for item in items:
            bits = item.split(":")
            vals = [_parse_number(x) for x in bits]
            if len(bits) != 2 or any(v is None for v in vals):
                problems.append(f"{where}: '{item}' is not a pair like '1:2'")
                return None
            out.append((vals[0], vals[1]))
        return tuple(out)
    raise AssertionError(f"unhandled field kind {spec.kind}")


def parse_scenario_text(text: str, source: str = "<string>") -> Scenario:
    """Parse and validate; raises ScenarioError listing every problem."""
    problems: list[str] = []
    sections: dict[str, dict] = {}
    section_name = None
    seen_lines: dict[tuple, int] = {}

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section_name = line[1:-1].strip()
            base = "drive" if section_name in _DRIVE_SECTIONS else section_name
            if base not in _SCHEMA:
                problems.append(f"line {lineno}: unknown section [{section_name}]")
                section_name = None
            elif section_name in sections:
                problems.append(f"line {lineno}: duplicate section [{section_name}]")
            else:
                sections[section_name] = {}
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value'")
            continue
        if section_name is None:
            problems.append(f"line {lineno}: entry outside any section")
            continue
        key, raw = (s.strip() for s in line.split("=", 1))
        base = "drive" if section_name in _DRIVE_SECTIONS else section_name
        schema = _SCHEMA[base]
        where = f"line {lineno}: [{section_name}] {key}"
        if key not in schema:
            problems.append(f"{where}: unknown key")
            continue
        if (section_name, key) in seen_lines:
            problems.append(f"{where}: duplicate key (first at line "
                            f"{seen_lines[(section_name, key)]})")
            continue
        seen_lines[(section_name, key)] = lineno
        value = _parse_entry(schema[key], raw, where, problems)
        if value is not None:
            sections[section_name][key] = value

    # required sections
    for required in ("geometry", "regime"):
        if required not in sections:
            problems.append(f"missing required section [{required}]")
    drive_names = [s for s in sections if s in _DRIVE_SECTIONS]
    if not drive_names:
        problems.append("missing required drive section [drive]")

    # required keys per present section
    for name, entries in sections.items():
        base = "drive" if name in _DRIVE_SECTIONS else name
        for key, spec in _SCHEMA[base].items():
            if spec.required and key not in entries:
                problems.append(f"[{name}]: missing required key '{key}'")

    geometry = sections.get("geometry", {})
    regime = sections.get("regime", {})

    # cross-field invariants
    if geometry.get("kind") == "cavity":
        if "length" not in geometry:
            problems.append("[geometry]: cavity geometry requires 'length'")
        if sorted(drive_names) != ["drive1", "drive2"]:
            problems.append("cavity scenarios need exactly the two drive "
                            "sections [drive1] and [drive2]")
    elif geometry.get("kind") == "semiopen":
        if drive_names != ["drive"]:
            problems.append("semiopen scenarios need exactly one [drive] section")
    if regime.get("kind") == "robin_far" and geometry.get("kind") == "semiopen":
        if "lambda" not in regime:
            problems.append("[regime]: semiopen robin_far requires 'lambda'")
    if regime.get("kind") == "robin_far" and geometry.get("kind") == "cavity":
        for key in ("kappa1", "kappa2"):
            if key not in regime:
                problems.append(f"[regime]: cavity robin_far requires '{key}'")
    if regime.get("kind") == "robin_near_dirichlet" and "b_amplitude" not in regime:
        problems.append("[regime]: robin_near_dirichlet requires 'b_amplitude'")
    if "mass" in regime and geometry.get("kind") == "cavity":
        problems.append("[regime]: 'mass' applies to the semiopen geometry only")

    for name in drive_names:
        entries = sections[name]
        dtype = entries.get("type")
        if dtype in ("sinusoid", "ramped_sinusoid"):
            for key in ("epsilon", "omega_d"):
                if key not in entries:
                    problems.append(f"[{name}]: drive type '{dtype}' requires '{key}'")
        if dtype == "ramped_sinusoid" and "ramp" not in entries:
            problems.append(f"[{name}]: ramped_sinusoid requires 'ramp'")
        if "t0" in entries and "tf" in entries and not entries["tf"] > entries["t0"]:
            problems.append(f"[{name}]: tf must exceed t0")

    if problems:
        raise ScenarioError(problems)

    drives = tuple(sections[name] for name in sorted(drive_names))
    return Scenario(
        geometry=geometry,
        regime=regime,
        drives=drives,
        analysis=sections.get("analysis", {}),
        numerics=sections.get("numerics", {}),
        source=source,
    )


def load_scenario(path) -> Scenario:
    p = Path(path)
    if not p.exists():
        candidate = bundled_scenario_path(str(path))
        if candidate is not None:
            p = candidate
        else:
            raise FileNotFoundError(f"scenario file not found: {path}")
    return parse_scenario_text(p.read_text(), source=str(p))


def bundled_scenario_path(name: str) -> Optional[Path]:
    """Resolve a bundled scenario by bare name, e.g. 'fig1_left'."""
    stem = name[:-9] if name.endswith(".scenario") else name
    candidate = Path(__file__).parent / "scenarios" / f"{stem}.scenario"
    return candidate if candidate.exists() else None
