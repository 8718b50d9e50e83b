"""Heatmap CSV, report JSON and flat dotted-key config files."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grid import Axis, Curve, Field2D

COORD_FMT = "%.12g"
VALUE_FMT = "%.17g"


class ParseError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


def _fmt(v, integer):
    return str(int(v)) if integer else VALUE_FMT % v


def write_heatmap(path, field: Field2D, quantity: str, normalization: str = "peak") -> None:
    """Write a field: first row axis-2 coordinates, first column axis-1 coordinates."""
    vals = np.asarray(field.values)
    if np.iscomplexobj(vals):
        vals = vals.real
    integer = np.issubdtype(vals.dtype, np.integer)
    # exact center:step per axis so that a re-read reproduces the coordinates bit for bit
    exact = " ".join(f"axis_{k}={float(ax.center)!r}:{float(ax.step)!r}"
                     for k, ax in ((1, field.axis_1), (2, field.axis_2)))
    lines = [f"# quantity={quantity} unit={field.axis_1.unit},{field.axis_2.unit} "
             f"normalization={normalization} {exact}"]
    lines.append(",".join([""] + [COORD_FMT % x for x in field.axis_2.values]))
    for x, row in zip(field.axis_1.values, vals):
        lines.append(",".join([COORD_FMT % x] + [_fmt(v, integer) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def _axis_from(coords, unit, path, line, exact=None):
    c = np.asarray(coords, dtype=float)
    if c.size < 2:
        raise ParseError(path, line, "need at least two coordinates per axis")
    step = (c[-1] - c[0]) / (c.size - 1)
    if not step > 0 or not np.allclose(np.diff(c), step, rtol=1e-6, atol=1e-12 * abs(c).max()):
        raise ParseError(path, line, "axis coordinates are not uniformly increasing")
    if exact is not None:
        try:
            center, step_exact = (float(t) for t in exact.split(":"))
        except ValueError:
            raise ParseError(path, 1, f"bad axis header {exact!r}") from None
        ax = Axis(center, step_exact, c.size, unit)
        if not np.allclose(ax.values, c, rtol=1e-9, atol=1e-9 * step):
            raise ParseError(path, line, "coordinates disagree with the axis header")
        return ax
    return Axis((c[0] + c[-1]) / 2, step, c.size, unit)


def read_heatmap(path) -> tuple[Field2D, dict]:
    """Parse a heatmap CSV; returns the field and the header metadata."""
    path = str(path)
    meta = {"quantity": "", "unit": "THz,THz", "normalization": ""}
    rows = []
    header_line = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        meta[k] = v
                continue
            cells = line.split(",")
            try:
                if header_line is None:
                    header_line = lineno
                    if cells[0].strip():
                        raise ParseError(path, lineno, "first cell of the coordinate row must be empty")
                    coords2 = [float(c) for c in cells[1:]]
                    continue
                nums = [float(c) for c in cells]
            except ParseError:
                raise
            except ValueError as exc:
                raise ParseError(path, lineno, f"non-numeric cell ({exc})") from None
            if len(nums) != len(coords2) + 1:
                raise ParseError(path, lineno,
                                 f"expected {len(coords2) + 1} cells, found {len(nums)}")
            rows.append((lineno, nums))
    if header_line is None or not rows:
        raise ParseError(path, header_line or 1, "no data rows")
    units = meta["unit"].split(",")
    if len(units) != 2:
        raise ParseError(path, 1, f"bad unit header {meta['unit']!r}")
    ax2 = _axis_from(coords2, units[1], path, header_line, meta.get("axis_2"))
    ax1 = _axis_from([r[1][0] for r in rows], units[0], path, rows[0][0], meta.get("axis_1"))
    vals = np.array([r[1][1:] for r in rows])
    if meta.get("normalization") == "counts":
        vals = vals.astype(np.int64)
    return Field2D(ax1, ax2, vals), meta


def write_curves(path, curves: dict[str, Curve]) -> None:
    lines = ["curve,unit,coordinate,value"]
    for name, c in curves.items():
        for x, v in zip(c.x, c.values):
            lines.append(f"{name},{c.axis.unit},{COORD_FMT % x},{VALUE_FMT % v}")
    Path(path).write_text("\n".join(lines) + "\n")


def _sig6(v):
    return float(f"{v:.6g}")


def report_json(report) -> dict:
    d = report.to_dict()
    return {k: (_sig6(v) if isinstance(v, float) else v) for k, v in d.items()}


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _scalar(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse ``section.key = value`` lines (``#`` starts a comment) into nested dicts."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(source, lineno, "expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        parts = key.split(".")
        if len(parts) != 2 or not all(parts):
            raise ParseError(source, lineno, f"key {key!r} must look like 'section.name'")
        section = out.setdefault(parts[0], {})
        if parts[1] in section:
            raise ParseError(source, lineno, f"duplicate key {key!r}")
        section[parts[1]] = _scalar(value)
    return out


def read_config(path) -> dict:
    return parse_config(Path(path).read_text(), str(path))
