"""Mission report lines, verdicts and text / machine rendering."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

REPORT_SCHEMA = "paddlesat.report/1"
SIGNIFICANT_DIGITS = 12

DOMAIN_ORDER = ("orbit", "optics", "rf", "power")


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    WARN = "warn"
    INFO = "info"


def canonical(value: float) -> float:
    """Round to 12 significant digits so reports do not depend on ulp-level noise."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"report values must be finite, got {value!r}")
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}") + 0.0


@dataclass(frozen=True)
class BudgetLine:
    domain: str
    name: str
    label: str
    value: float
    unit: str
    requirement: str = ""
    verdict: Verdict = Verdict.INFO
    note: str = ""

    def __post_init__(self):
        if not self.unit:
            raise ValueError(f"line {self.key} has no unit")
        object.__setattr__(self, "value", canonical(self.value))
        object.__setattr__(self, "verdict", Verdict(self.verdict))

    @property
    def key(self) -> str:
        return f"{self.domain}.{self.name}"

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "name": self.name,
            "label": self.label,
            "value": self.value,
            "unit": self.unit,
            "requirement": self.requirement,
            "verdict": self.verdict.value,
            "note": self.note,
        }


@dataclass(frozen=True)
class MissionReport:
    lines: tuple[BudgetLine, ...]
    provenance: dict = field(default_factory=dict)
    scenario_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    @property
    def overall_verdict(self) -> Verdict:
        return overall_verdict(self.lines)

    def line(self, key: str) -> BudgetLine:
        for ln in self.lines:
            if ln.key == key:
                return ln
        raise KeyError(key)

    def value(self, key: str) -> float:
        return self.line(key).value

    def keys(self) -> list[str]:
        return [ln.key for ln in self.lines]

    def filter(self, domain: str) -> MissionReport:
        return MissionReport(
            tuple(ln for ln in self.lines if ln.domain == domain), dict(self.provenance), self.scenario_name
        )

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "scenario": self.scenario_name,
            "overall_verdict": self.overall_verdict.value,
            "provenance": dict(self.provenance),
            "lines": [ln.to_dict() for ln in self.lines],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> MissionReport:
        if doc.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
        lines = tuple(BudgetLine(**ln) for ln in doc["lines"])
        report = cls(lines, dict(doc.get("provenance", {})), doc.get("scenario", ""))
        if doc.get("overall_verdict") != report.overall_verdict.value:
            raise ValueError("overall_verdict is inconsistent with the report lines")
        return report


def overall_verdict(lines) -> Verdict:
    return Verdict.FAIL if any(ln.verdict is Verdict.FAIL for ln in lines) else Verdict.PASS


def _fmt(value: float) -> str:
    if value == 0:
        return "0"
    mag = abs(value)
    if 1e-3 <= mag < 1e6:
        return f"{value:.6g}"
    return f"{value:.4e}"


def render_text(report: MissionReport) -> str:
    out = [f"Mission report: {report.scenario_name}"]
    prov = report.provenance
    if prov:
        out.append("  " + "  ".join(f"{k}={prov[k]}" for k in sorted(prov)))
    label_w = max((len(ln.label) for ln in report.lines), default=10)
    unit_w = max((len(ln.unit) for ln in report.lines), default=4)
    domains = [d for d in DOMAIN_ORDER if any(ln.domain == d for ln in report.lines)]
    domains += sorted({ln.domain for ln in report.lines} - set(domains))
    for domain in domains:
        out.append("")
        out.append(f"[{domain}]")
        for ln in report.lines:
            if ln.domain != domain:
                continue
            row = f"  {ln.label:<{label_w}}  {_fmt(ln.value):>14}  {ln.unit:<{unit_w}}  {ln.verdict.value:<4}"
            extra = "; ".join(s for s in (ln.requirement, ln.note) if s)
            if extra:
                row += f"  {extra}"
            out.append(row.rstrip())
    out.append("")
    out.append(f"overall: {report.overall_verdict.value.upper()}")
    return "\n".join(out) + "\n"


def render_machine(report: MissionReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def render_report(report: MissionReport, fmt: str = "text") -> bytes:
    if fmt == "text":
        return render_text(report).encode("utf-8")
    if fmt == "machine":
        return render_machine(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(data: bytes | str) -> MissionReport:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return MissionReport.from_dict(json.loads(data))
