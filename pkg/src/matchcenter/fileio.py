"""Instance, matching, and certificate files.

Schemas:
  instance JSON   {"red": [[x, y], ...], "blue": [[x, y], ...]}
  instance CSV    rows "color,x,y" with color R or B; an optional
                  "color,x,y" header row is skipped
  matching JSON   {"pairs": [[red_index, blue_index], ...], "total": t}
  certificate     {"matching": ..., "total": ..., "center": [x, y],
                   "lambda_star": ..., "ratios": [...], "active_set": [...],
                   "optimality_gap": ..., "bound": "sqrt2", "pass": ...}
                  ("pass" appears only when the matching was solver-chosen)

Floats are serialized via their shortest round-trip representation (up to 17
significant digits), so save/load is lossless.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .center import (
    DEFAULT_ACTIVATION_TOL,
    CenterCertificate,
    focal_sum_ratios,
    optimality_certificate,
)
from .geometry import SQRT2, Point, as_point
from .matching import Instance, Matching, matched_pairs

__all__ = [
    "ParseError",
    "load_instance",
    "save_instance",
    "instance_to_json",
    "instance_from_json",
    "load_matching",
    "matching_to_json",
    "matching_from_json",
    "certificate_to_json",
    "load_json",
    "save_json",
    "check_certificate",
]

PathLike = Union[str, Path]


class ParseError(ValueError):
    """Input file is malformed or does not define a valid instance."""


def _coords(raw, label: str) -> List[Point]:
    if not isinstance(raw, list):
        raise ParseError(f"'{label}' must be a list of [x, y] pairs")
    points = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ParseError(f"'{label}' entries must be [x, y] pairs, got {entry!r}")
        try:
            points.append(Point(float(entry[0]), float(entry[1])))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad coordinate in '{label}': {exc}") from exc
    return points


def instance_from_json(data) -> Instance:
    if not isinstance(data, dict) or "red" not in data or "blue" not in data:
        raise ParseError("instance JSON must be an object with 'red' and 'blue'")
    try:
        return Instance.from_coords(_coords(data["red"], "red"), _coords(data["blue"], "blue"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def instance_to_json(inst: Instance) -> dict:
    return {
        "red": [[p.x, p.y] for p in inst.red],
        "blue": [[p.x, p.y] for p in inst.blue],
    }


def _instance_from_csv(path: Path) -> Instance:
    red: List[Point] = []
    blue: List[Point] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (not "".join(row).strip()):
                continue
            if lineno == 1 and [c.strip().lower() for c in row] == ["color", "x", "y"]:
                continue
            if len(row) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'color,x,y', got {row!r}")
            color = row[0].strip().upper()
            try:
                p = Point(float(row[1]), float(row[2]))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if color == "R":
                red.append(p)
            elif color == "B":
                blue.append(p)
            else:
                raise ParseError(f"{path}:{lineno}: color must be R or B, got {row[0]!r}")
    try:
        return Instance.from_coords(red, blue)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_json(path: PathLike):
    path = Path(path)
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def save_json(data, path: PathLike) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
    return path


def load_instance(path: PathLike) -> Instance:
    """Load an instance file; CSV when the suffix is .csv, JSON otherwise."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _instance_from_csv(path)
    return instance_from_json(load_json(path))


def save_instance(inst: Instance, path: PathLike) -> Path:
    return save_json(instance_to_json(inst), path)


def matching_from_json(inst: Instance, data) -> Matching:
    if not isinstance(data, dict) or "pairs" not in data:
        raise ParseError("matching JSON must be an object with 'pairs'")
    try:
        pairs = [(int(i), int(j)) for i, j in data["pairs"]]
        m = Matching.of(inst, pairs)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matching: {exc}") from exc
    return m


def load_matching(inst: Instance, path: PathLike) -> Matching:
    return matching_from_json(inst, load_json(path))


def matching_to_json(m: Matching) -> dict:
    return {"pairs": [[i, j] for i, j in m.pairs], "total": m.total}


def certificate_to_json(
    inst: Instance,
    m: Matching,
    cert: CenterCertificate,
    include_pass: bool,
    bound_tol: float = 1e-7,
) -> dict:
    data = {
        "matching": [[i, j] for i, j in m.pairs],
        "total": m.total,
        "center": [cert.center.x, cert.center.y],
        "lambda_star": cert.lambda_star,
        "ratios": list(cert.ratios),
        "active_set": list(cert.active_set),
        "optimality_gap": cert.optimality_gap,
        "bound": "sqrt2",
    }
    if include_pass:
        data["pass"] = bool(cert.lambda_star <= SQRT2 + bound_tol)
    return data


def check_certificate(
    inst: Instance,
    data: dict,
    tol: float = 1e-9,
    activation_tol: float = DEFAULT_ACTIVATION_TOL,
) -> List[str]:
    """Re-derive every certificate quantity from the instance and report
    mismatches beyond ``tol``; an empty list means the certificate checks out."""
    problems: List[str] = []
    for key in ("matching", "total", "center", "lambda_star", "ratios", "optimality_gap"):
        if key not in data:
            return [f"missing field {key!r}"]
    try:
        m = Matching.of(inst, [(int(i), int(j)) for i, j in data["matching"]])
    except (TypeError, ValueError) as exc:
        return [f"invalid matching: {exc}"]
    center = as_point(tuple(data["center"]))

    def off(a: float, b: float) -> bool:
        return abs(a - b) > tol * (1.0 + abs(b))

    if off(float(data["total"]), m.total):
        problems.append(f"total mismatch: stored {data['total']!r}, derived {m.total!r}")
    ratios = focal_sum_ratios(matched_pairs(inst, m), center)
    stored = [float(v) for v in data["ratios"]]
    if len(stored) != len(ratios):
        problems.append(f"expected {len(ratios)} ratios, stored {len(stored)}")
    else:
        for i, (a, b) in enumerate(zip(stored, ratios)):
            if off(a, b):
                problems.append(f"ratio[{i}] mismatch: stored {a!r}, derived {b!r}")
    lam = max(max(ratios), 1.0)
    if off(float(data["lambda_star"]), lam):
        problems.append(
            f"lambda_star mismatch: stored {data['lambda_star']!r}, derived {lam!r}"
        )
    gap = optimality_certificate(inst, m, center, activation_tol=activation_tol)
    if off(float(data["optimality_gap"]), gap):
        problems.append(
            f"optimality_gap mismatch: stored {data['optimality_gap']!r}, derived {gap!r}"
        )
    if "active_set" in data:
        active = [i for i, v in enumerate(ratios) if v >= lam - activation_tol]
        if [int(i) for i in data["active_set"]] != active:
            problems.append(
                f"active_set mismatch: stored {data['active_set']!r}, derived {active!r}"
            )
    if "pass" in data:
        derived = bool(lam <= SQRT2 + 1e-7)
        if bool(data["pass"]) != derived:
            problems.append(f"pass mismatch: stored {data['pass']!r}, derived {derived!r}")
    return problems
