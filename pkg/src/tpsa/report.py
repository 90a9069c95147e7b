"""Verification reports and their deterministic JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "reported", "error")


def jsonable(obj):
    """Convert labels, ideals, numpy scalars and reports into plain JSON data."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (tuple, list)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(x) for x in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "members") and hasattr(obj, "ring"):
        return {"size": len(obj), "members": jsonable(obj.members)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class VerificationReport:
    check_id: str
    status: str
    fixture: str | None = None
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    timing: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def well_formed(self) -> bool:
        """Fail and reported outcomes must carry a witness or a computed object."""
        if self.status in ("fail", "reported"):
            return bool(self.witnesses) or bool(self.details)
        return True

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "check_id": self.check_id,
            "status": self.status,
            "fixture": self.fixture,
            "witnesses": jsonable(self.witnesses),
            "details": jsonable(self.details),
            "parameters": jsonable(self.parameters),
        }
        if include_timing:
            out["timing"] = self.timing
        return out


def dumps(data) -> str:
    return json.dumps(jsonable(data), sort_keys=True, indent=2) + "\n"


def emit_report(report, path=None, fmt: str = "json", include_timing: bool = False) -> str:
    """Serialise a report (or list of reports); write it to ``path`` if given."""
    if fmt != "json":
        raise ValueError(f"unsupported report format {fmt!r}")
    if isinstance(report, VerificationReport):
        text = dumps(report.to_json(include_timing))
    elif isinstance(report, list):
        text = dumps([r.to_json(include_timing) for r in report])
    else:
        text = dumps(report)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
