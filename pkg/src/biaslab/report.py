"""Suite run records and bit-stable report serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import IoFailure

PASS = "pass"
FAIL = "fail"
UNTESTED = "untested"  # budget exhaustion is a distinct verdict, never a pass


@dataclass(frozen=True)
class Record:
    suite: str
    index: int
    params: dict
    lhs: str
    rhs: str
    variant: str
    verdict: str

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "index": self.index,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "variant": self.variant,
            "verdict": self.verdict,
        }


@dataclass
class Report:
    suite: str
    seed: int
    records: list[Record] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    def add(
        self,
        index: int,
        params: dict,
        verdict: str,
        lhs: str = "",
        rhs: str = "",
        variant: str = "exact",
    ) -> None:
        self.records.append(
            Record(self.suite, index, params, str(lhs), str(rhs), variant, verdict)
        )

    def note_finding(self, text: str) -> None:
        """An expected as-stated violation or informational observation."""
        self.findings.append(text)

    @property
    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, UNTESTED: 0}
        for r in self.records:
            out[r.verdict] = out.get(r.verdict, 0) + 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts.get(FAIL, 0) == 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "records": [r.to_json() for r in self.records],
            "findings": list(self.findings),
            "summary": {
                "counts": self.counts,
                "ok": self.ok,
            },
        }


CSV_COLUMNS = ["suite", "index", "p", "n", "params", "lhs", "rhs", "variant", "verdict"]


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in report.records:
            params = dict(r.params)
            p = params.pop("p", "")
            n = params.pop("n", "")
            writer.writerow(
                [
                    r.suite,
                    r.index,
                    p,
                    n,
                    json.dumps(params, sort_keys=True),
                    r.lhs,
                    r.rhs,
                    r.variant,
                    r.verdict,
                ]
            )
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(report: Report, fmt: str, out_path: str) -> None:
    """Bit-stable file emission: sorted keys, exact rationals as strings."""
    text = render(report, fmt)
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
