"""Reading densities, step profiles and matrices; writing reports."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .spaces import MeasureSpace, SampledDensity, StepRearrangement


class InputError(ValueError):
    """Malformed input file."""


def _rows(path):
    path = Path(path)
    if not path.is_file():
        raise InputError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise InputError(f"{path}: empty file")
    return rows


def _float(x: str, where: str) -> float:
    try:
        return float(x)
    except ValueError:
        raise InputError(f"{where}: not a number: {x!r}") from None


def _split_header(rows, names):
    head = [c.strip().lower() for c in rows[0]]
    if set(names) <= set(head):
        return [head.index(n) for n in names], rows[1:]
    return list(range(len(names))), rows


def read_density_csv(path) -> SampledDensity:
    """CSV with columns ``label, weight, value`` (header optional)."""
    idx, body = _split_header(_rows(path), ("label", "weight", "value"))
    labels, weights, values = [], [], []
    for n, r in enumerate(body, 1):
        if len(r) <= max(idx):
            raise InputError(f"{path}:{n}: expected label, weight, value")
        labels.append(r[idx[0]].strip())
        weights.append(_float(r[idx[1]], f"{path}:{n}"))
        values.append(_float(r[idx[2]], f"{path}:{n}"))
    try:
        return SampledDensity(MeasureSpace(tuple(labels), np.array(weights)), np.array(values))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def read_steps_csv(path) -> StepRearrangement:
    """CSV with columns ``value, length``; a length of ``inf`` marks an
    infinite zero tail."""
    idx, body = _split_header(_rows(path), ("value", "length"))
    vals, lens = [], []
    for n, r in enumerate(body, 1):
        if len(r) <= max(idx):
            raise InputError(f"{path}:{n}: expected value, length")
        vals.append(_float(r[idx[0]], f"{path}:{n}"))
        lens.append(_float(r[idx[1]], f"{path}:{n}"))
    try:
        return StepRearrangement(np.array(vals), np.array(lens))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def read_matrix(path) -> np.ndarray:
    """Dense real CSV or JSON ``{"re": [[...]], "im": [[...]]}``."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        if not path.is_file():
            raise InputError(f"no such file: {path}")
        try:
            data = json.loads(path.read_text())
            re = np.array(data["re"], dtype=float)
            im = np.array(data.get("im", np.zeros_like(re)), dtype=float)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: bad matrix JSON ({exc})") from None
        if re.shape != im.shape:
            raise InputError(f"{path}: re and im shapes differ")
        a = re + 1j * im
    else:
        rows = _rows(path)
        if len({len(r) for r in rows}) != 1:
            raise InputError(f"{path}: ragged rows")
        a = np.array([[_float(x, str(path)) for x in r] for r in rows])
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"{path}: matrix must be square")
    return a


def jsonable(obj):
    """Replace non-finite floats by strings and numpy scalars by Python ones."""
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
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"
