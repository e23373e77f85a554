"""
Reports

Every pipeline returns a Report: config echo, convention record, per-item
results, witnesses, status and timing. JSON (sorted keys) is the normative
rendering; CSV and text are lossy views of the results list.
"""

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from constants import STATUS_EXIT_CODES, ReportStatus
from src.clifford import calibrate_bracket, generator_pairing
from src.fock import top_word_supertrace
from src.supercore import format_rat

BEREZIN_NORMALIZATION = "integral of the canonical top monomial (xi1..xin eta1..etan or theta1..thetam) is +1"
QTR_NORMALIZATION = "coefficient of the top odd blade theta1*...*theta(2n-1), nu = 1"
ODD_PAIRING_NOTE = (
    "odd m: G_ab read off [theta_a, theta_b] = G_ab*hbar, i.e. diag(+2, -2, ..., +2); "
    "not the uniform sum over d/dtheta_a d/dtheta_a"
)


def convention_record(m: Optional[int] = None) -> Dict[str, Any]:
    """Bracket calibration, Berezin and queertrace normalizations in force."""
    record: Dict[str, Any] = {
        "berezin": BEREZIN_NORMALIZATION,
        "qtr": QTR_NORMALIZATION,
        "supertrace": "str X = sum_i (-1)^|i| X_ii on the Fock basis, vacuum even",
    }
    if m is not None:
        record["m"] = m
        record["bracket"] = calibrate_bracket(m).describe()
        record["pairing"] = [[a, b, format_rat(c)] for (a, b), c in sorted(generator_pairing(m).items())]
        if m % 2:
            record["odd_pairing"] = ODD_PAIRING_NOTE
        if m % 2 == 0:
            record["top_word_supertrace"] = top_word_supertrace(m // 2).to_json()
    return record


def convention_hash(record: Dict[str, Any]) -> str:
    payload = json.dumps(record, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class Report:
    """Machine-readable outcome of one pipeline run"""

    command: str
    config: Dict[str, Any]
    conventions: Dict[str, Any] = field(default_factory=dict)
    status: str = ReportStatus.OK.value
    results: List[Dict[str, Any]] = field(default_factory=list)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)
    message: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT_CODES[self.status]

    def to_json(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "config": self.config,
            "conventions": self.conventions,
            "status": self.status,
            "results": self.results,
            "witnesses": self.witnesses,
        }
        if self.message:
            data["message"] = self.message
        if include_timing:
            data["timing"] = self.timing
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Report":
        return cls(
            command=data["command"],
            config=data["config"],
            conventions=data.get("conventions", {}),
            status=data["status"],
            results=data.get("results", []),
            witnesses=data.get("witnesses", []),
            timing=data.get("timing", {}),
            message=data.get("message"),
        )

    def render(self, fmt: str = "json") -> str:
        if fmt == "csv":
            return render_csv(self)
        if fmt == "text":
            return render_text(self)
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _flat(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else str(value)


def render_csv(report: Report) -> str:
    """One row per result item; nested values are JSON-encoded cells."""
    columns: List[str] = []
    for item in report.results:
        for key in item:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["status"] + columns)
    for item in report.results:
        writer.writerow([report.status] + [_flat(item.get(c)) for c in columns])
    return buffer.getvalue()


def render_text(report: Report) -> str:
    icon = {"ok": "✅", "report-only": "📋", "mismatch": "❌", "aborted": "⚠️", "invalid": "❌"}
    lines = [f"{icon.get(report.status, '')} {report.command}: {report.status}"]
    if report.message:
        lines.append(f"  {report.message}")
    for item in report.results:
        summary = ", ".join(f"{k}={_flat(v)}" for k, v in item.items() if not isinstance(v, (dict, list)))
        lines.append(f"  > {summary}")
    if report.timing:
        lines.append(f"  ⏱️ {report.timing.get('seconds', 0):.2f}s")
    return "\n".join(lines)
