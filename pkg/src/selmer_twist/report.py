"""Report documents: exact-string numerics, JSON and flat text renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = "1"


def exact(x):
    """Encode exact values as strings; containers recursively."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        raise TypeError("floats must go through approx()")
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return str(x)


def approx(x: float, method: str, digits: int = 12) -> dict:
    """A non-certified numeric, always flagged."""
    return {"value": f"{x:.{digits}g}", "empirical": True, "method": method}


@dataclass
class ReportDocument:
    command: str
    inputs: dict
    body: dict
    citations: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "body": self.body,
            "citations": [list(c) for c in self.citations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ReportDocument":
        return cls(
            command=data["command"],
            inputs=data["inputs"],
            body=data["body"],
            citations=[list(c) for c in data.get("citations", [])],
            schema_version=data["schema_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        return render_text(self.to_dict())


def flatten(obj, prefix="") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        if not obj:
            return [(prefix, "{}")]
        out = []
        for k, v in obj.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        if not obj:
            return [(prefix, "[]")]
        out = []
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}.{i}")
        return out
    return [(prefix, obj)]


def _scalar(v) -> str:
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def render_text(data: dict) -> str:
    return "".join(f"{k} = {_scalar(v)}\n" for k, v in flatten(data))


def error_document(command: str, inputs: dict, exc: BaseException, code: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "error": {"type": type(exc).__name__, "message": str(exc), "exit_code": str(code)},
    }
