"""JSON verification reports and their schema."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .compare import Verdict

__all__ = ["CheckReport", "load_schema", "validate_report", "verdict_status", "combine"]


@dataclass
class CheckReport:
    check: str
    status: str  # pass | fail | inconclusive
    samples: int = 0
    seed: int = 0
    elapsed_ms: float = 0.0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    checks: list["CheckReport"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self, timing: bool = True) -> dict:
        d = {
            "check": self.check,
            "status": self.status,
            "witnesses": self.witnesses,
            "samples": self.samples,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing else 0,
        }
        if self.details:
            d["details"] = self.details
        if self.checks:
            d["checks"] = [c.to_json(timing) for c in self.checks]
        return d

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=False)


def verdict_status(v: Verdict) -> str:
    if v.ok:
        return "pass"
    return "inconclusive" if v.status == "Inconclusive" else "fail"


def combine(check: str, parts: list[CheckReport], samples: int = 0, seed: int = 0,
            elapsed_ms: float = 0.0, details: dict | None = None) -> CheckReport:
    """Suite report: fail if any part fails, else inconclusive if any part is, else pass."""
    statuses = {p.status for p in parts}
    status = "fail" if "fail" in statuses else ("inconclusive" if "inconclusive" in statuses else "pass")
    return CheckReport(check, status, samples, seed, elapsed_ms, checks=parts, details=details or {})


def load_schema() -> dict:
    return json.loads(resources.files("cfdyn").joinpath("schemas/report.schema.json").read_text())


def validate_report(d: dict) -> None:
    """Raise ``jsonschema.ValidationError`` when ``d`` does not match the schema."""
    import jsonschema

    jsonschema.validate(d, load_schema())
