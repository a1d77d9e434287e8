"""Scenario reports and their JSON encoding.

Floats are written with 17 significant digits so values round-trip exactly;
complex numbers become ``{"re": ..., "im": ...}``; density operators carry
their ``dims`` and the text matrix format of :func:`qmeasure.linalg.format_matrix`.
Non-finite floats are written as the strings ``"inf"``, ``"-inf"``, ``"nan"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from .linalg import format_matrix
from .state import DensityOperator

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: object
    tolerance: object = None


@dataclass
class ScenarioReport:
    scenario: str
    seed: int
    inputs: dict
    results: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "passed": self.passed,
            "inputs": self.inputs,
            "results": self.results,
            "checks": [
                {"name": c.name, "passed": bool(c.passed), "value": c.value, "tolerance": c.tolerance}
                for c in self.checks
            ],
        }


def to_jsonable(obj):
    """Convert numpy/complex/state objects into plain JSON-compatible values."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, DensityOperator):
        return {"dims": list(obj.dims), "matrix": format_matrix(obj.matrix)}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps("nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf"))
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(x, indent, level + 1) for x in obj) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(to_jsonable(obj), indent, 0) + "\n"


def load_schema() -> dict:
    text = resources.files("qmeasure.schema").joinpath("report.schema.json").read_text()
    return json.loads(text)
