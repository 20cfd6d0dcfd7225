"""JSON and CSV round-trips for operators, plus float formatting for reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .operators import as_operator

SIG_DIGITS = 15


def operator_to_dict(op) -> dict:
    m = as_operator(op)
    return {
        "dim": int(m.shape[0]),
        "re": [[_fmt(x) for x in row] for row in m.real],
        "im": [[_fmt(x) for x in row] for row in m.imag],
    }


def operator_from_dict(d: dict) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ValueError("re and im grids differ in shape")
    m = as_operator(re + 1j * im)
    if "dim" in d and int(d["dim"]) != m.shape[0]:
        raise ValueError(f"dim {d['dim']} does not match entry grid {m.shape}")
    return m


def operator_to_json(op) -> str:
    return json.dumps(operator_to_dict(op))


def operator_from_json(text: str) -> np.ndarray:
    return operator_from_dict(json.loads(text))


def operator_to_csv(op) -> str:
    """Row-major CSV; every cell is the string ``"re,im"``."""
    m = as_operator(op)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in m:
        writer.writerow([f"{_fmt(z.real)!r},{_fmt(z.imag)!r}" for z in row])
    return buf.getvalue()


def operator_from_csv(text: str) -> np.ndarray:
    rows = []
    for row in csv.reader(io.StringIO(text)):
        if not row:
            continue
        cells = []
        for cell in row:
            re, im = cell.split(",")
            cells.append(complex(float(re), float(im)))
        rows.append(cells)
    return as_operator(np.array(rows))


def _fmt(x: float) -> float:
    x = float(x)
    if x == 0.0:
        return 0.0
    return float(f"{x:.{SIG_DIGITS}g}")


def jsonable(obj: Any) -> Any:
    """Recursively convert numpy/complex values, rounding floats to 15 significant digits."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _fmt(obj.real), "im": _fmt(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"
