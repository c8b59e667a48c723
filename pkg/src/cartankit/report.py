"""Check records and report rendering (JSON lines and aligned text)."""

import json
import time
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    check: str
    inputs: dict
    residual: float
    tolerance: float
    passed: bool
    seconds: float

    def payload(self, test_mode: bool = False):
        out = {
            "schema": "cartankit/1",
            "check": self.check,
            "inputs": self.inputs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if not test_mode:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class Report:
    settings: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    def add(self, check: str, residual, tolerance, inputs=None, seconds: float = 0.0):
        passed = bool(residual <= tolerance)
        self.records.append(CheckRecord(check, inputs or {}, float(residual),
                                        float(tolerance), passed, seconds))
        return passed

    def timed(self, check: str, tolerance, fn, inputs=None):
        start = time.perf_counter()
        residual = fn()
        self.add(check, residual, tolerance, inputs, time.perf_counter() - start)
        return residual

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def sorted_records(self):
        return sorted(self.records, key=lambda r: r.check)

    def json_lines(self, test_mode: bool = False) -> str:
        lines = [json.dumps(r.payload(test_mode), sort_keys=True)
                 for r in self.sorted_records()]
        summary = {
            "schema": "cartankit/1",
            "summary": {"checks": len(self.records),
                        "failed": sum(1 for r in self.records if not r.passed),
                        "pass": self.passed},
            "settings": self.settings,
        }
        lines.append(json.dumps(summary, sort_keys=True))
        return "\n".join(lines)

    def table(self) -> str:
        rows = [("check", "inputs", "residual", "tol", "pass")]
        for r in self.sorted_records():
            inputs = ",".join(f"{k}={v}" for k, v in sorted(r.inputs.items()))
            rows.append((r.check, inputs, f"{r.residual:.3e}", f"{r.tolerance:.1e}",
                         "ok" if r.passed else "FAIL"))
        widths = [max(len(row[i]) for row in rows) for i in range(5)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                 for row in rows]
        verdict = "all checks passed" if self.passed else "FAILURES PRESENT"
        lines.append(f"{len(self.records)} checks; {verdict}")
        return "\n".join(lines)
