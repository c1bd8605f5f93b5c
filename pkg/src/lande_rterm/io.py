"""Levels files, run configuration, and deterministic report serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from .errors import InvalidCoupling, LevelsParseError
from .exact import HalfInt
from .spectra import Multiplet

HEADER = ("label", "L", "S", "J", "energy", "uncertainty")


# ---------------------------------------------------------------------------
# levels files
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return f"{float(x):.17g}"


def _parse_half(text, row, column):
    try:
        return HalfInt.of(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise LevelsParseError(f"{text!r} is not an integer or half-integer",
                               row, column) from None


def _parse_float(text, row, column):
    try:
        v = float(text)
    except ValueError:
        raise LevelsParseError(f"{text!r} is not a number", row, column) from None
    if not math.isfinite(v):
        raise LevelsParseError(f"{text!r} is not finite", row, column)
    return v


def read_levels(source, unit=None):
    """Parse a levels CSV into multiplets keyed by ``(label, L, S)``.

    ``source`` is a path or an open text stream. Returns ``(multiplets, unit)``
    where ``unit`` comes from an optional ``# unit: ...`` comment line.
    Row numbers in errors count physical lines from 1.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()

    lines = text.splitlines()
    data_lines = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.lower().startswith("unit:"):
                unit = body.split(":", 1)[1].strip()
            continue
        data_lines.append((lineno, line))
    if not data_lines:
        raise LevelsParseError("no header row", 1)

    header_no, header_line = data_lines[0]
    header = tuple(h.strip() for h in next(csv.reader([header_line])))
    if header != HEADER:
        raise LevelsParseError(f"header must be {','.join(HEADER)}, got {','.join(header)}",
                               header_no)

    groups = {}
    for lineno, line in data_lines[1:]:
        cells = next(csv.reader([line]))
        if len(cells) != len(HEADER):
            raise LevelsParseError(f"expected {len(HEADER)} fields, got {len(cells)}", lineno)
        rec = dict(zip(HEADER, (c.strip() for c in cells)))
        L = _parse_half(rec["L"], lineno, "L")
        S = _parse_half(rec["S"], lineno, "S")
        J = _parse_half(rec["J"], lineno, "J")
        E = _parse_float(rec["energy"], lineno, "energy")
        u = _parse_float(rec["uncertainty"], lineno, "uncertainty")
        if u < 0:
            raise LevelsParseError("uncertainty must be nonnegative", lineno, "uncertainty")
        key = (rec["label"], L, S)
        levels = groups.setdefault(key, {})
        if J in levels:
            raise LevelsParseError(f"duplicate J={J} in {rec['label']!r}", lineno, "J")
        levels[J] = (E, u, lineno)

    multiplets = {}
    for (label, L, S), levels in groups.items():
        for J, (_, _, lineno) in levels.items():
            if not (abs(L.twice - S.twice) <= J.twice <= L.twice + S.twice
                    and (L.twice + S.twice + J.twice) % 2 == 0):
                raise LevelsParseError(f"J={J} cannot couple L={L}, S={S}", lineno, "J")
        try:
            multiplets[(label, L, S)] = Multiplet(
                L, S, {J: (E, u) for J, (E, u, _) in levels.items()}, label)
        except (InvalidCoupling, ValueError) as exc:
            raise LevelsParseError(str(exc)) from None
    return multiplets, unit


def write_levels(multiplets, dest=None, unit=None) -> str:
    """Serialise multiplets to levels CSV; returns the text and writes ``dest`` if given."""
    buf = io.StringIO()
    if unit:
        buf.write(f"# unit: {unit}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for m in multiplets:
        for J, (E, u) in m.levels.items():
            w.writerow([m.label, str(m.L), str(m.S), str(J), format_float(E), format_float(u)])
    text = buf.getvalue()
    if dest is not None:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    step_h: float = 1e-3
    det_tol: float = 1e-12
    lande_threshold: float = 0.05
    confidence: float = 0.95
    output_format: str = "json"

    def __post_init__(self):
        for name in ("step_h", "det_tol", "lande_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must lie strictly between 0 and 1")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Read ``key = value`` lines; ``#`` starts a comment."""
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in types:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value if key == "output_format" else float(value)
        return cls(**values)


# ---------------------------------------------------------------------------
# report serialisation
# ---------------------------------------------------------------------------

def to_jsonable(obj):
    """Convert report values: fractions and half-integers become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (Fraction, HalfInt)):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    return obj


def dumps(report) -> str:
    """JSON with insertion-ordered keys and shortest round-trip floats."""
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
