"""JSON and table rendering of command reports."""

import json
from fractions import Fraction
from typing import Any

import numpy as np
import pandas as pd

from .burnside import table_of_marks
from .groups import Group


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def to_json(data: dict[str, Any]) -> str:
    """Deterministic JSON: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, default=_default, ensure_ascii=False) + "\n"


def marks_frame(group: Group) -> pd.DataFrame:
    labels = [c.label for c in group.lattice.classes]
    marks = table_of_marks(group)
    return pd.DataFrame(
        [[int(v) for v in row] for row in marks], index=labels, columns=labels
    )


def subgroups_frame(group: Group) -> pd.DataFrame:
    rows = [
        {
            "class": c.label,
            "order": c.order,
            "conjugates": c.size,
            "normalizer": c.normalizer_order,
            "representative": " ".join(c.representative.labels()),
        }
        for c in group.lattice.classes
    ]
    return pd.DataFrame(rows).set_index("class")


def defects_frame(report: dict[str, Any]) -> pd.DataFrame:
    """One row per identity kind: how many were checked and how many failed."""
    failed: dict[str, int] = {}
    for defect in report.get("defects", []):
        failed[defect["kind"]] = failed.get(defect["kind"], 0) + 1
    rows = [
        {"identity": kind, "checked": n, "failed": failed.get(kind, 0)}
        for kind, n in report.get("checked", {}).items()
    ]
    return pd.DataFrame(rows, columns=["identity", "checked", "failed"]).set_index("identity")


def frame(data: Any) -> pd.DataFrame:
    """Best-effort flat table of a report section."""
    if isinstance(data, pd.DataFrame):
        return data
    if isinstance(data, list):
        return pd.json_normalize(data)
    return pd.json_normalize(data, max_level=1)


def render(data: dict[str, Any], output_format: str, table: pd.DataFrame | None = None) -> str:
    """Render a report as JSON, or as a table when one is supplied or derivable."""
    if output_format == "json":
        return to_json(data)
    shown = table if table is not None else frame({k: v for k, v in data.items() if k != "run"})
    with pd.option_context("display.max_columns", None, "display.width", 200):
        return shown.to_string() + "\n"
