"""Check reports and canonical JSON serialization.

Every checker in the package reports through `CheckReport` so that the CLI
and the HTTP service emit byte-identical output for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

REPORT_SCHEMA = 1

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class CheckReport:
    """Outcome of one named check.

    witnesses holds counterexamples or supporting evidence (JSON-safe values);
    diagnostics holds numeric side information (residuals, counts, bounds).
    """

    name: str
    verdict: str
    module: str
    source: str | None = None
    witnesses: list[Any] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "module": self.module,
            "source": self.source,
            "witnesses": self.witnesses,
            "diagnostics": self.diagnostics,
        }

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL


def bundle(checks: list[CheckReport], seed: int | None = None) -> dict[str, Any]:
    """Aggregate reports into the versioned top-level report object."""
    counts = {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0}
    for c in checks:
        counts[c.verdict] = counts.get(c.verdict, 0) + 1
    out: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "checks": [c.to_dict() for c in checks],
        "summary": {
            "total": len(checks),
            "passed": counts[PASS],
            "failed": counts[FAIL],
            "not_applicable": counts[NOT_APPLICABLE],
        },
    }
    if seed is not None:
        out["seed"] = seed
    return out


def canonical_json(obj: Any) -> str:
    """Serialize with canonical key order; identical inputs give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def exit_code(report: dict[str, Any]) -> int:
    """0 iff every check passed (not-applicable does not fail a run)."""
    return 0 if report["summary"]["failed"] == 0 else 1
