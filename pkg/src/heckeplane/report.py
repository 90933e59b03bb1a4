"""Machine-readable verification reports and their JSON/CSV forms."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1


def _plain(v):
    """Map a measured value to a JSON-safe scalar; exact rationals become strings."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        # big integers stay exact
        return v if abs(v) < 2 ** 53 else str(v)
    if isinstance(v, complex):
        return {"re": _plain(v.real), "im": _plain(v.imag)}
    if isinstance(v, float):
        if math.isfinite(v):
            return v
        return repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return _plain(v.item())
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


@dataclass
class Check:
    id: str
    value: object
    budget: object
    passed: bool
    note: str = ""

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"


@dataclass
class VerificationReport:
    command: str
    params: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)
    seed: int = 0
    wall_time: float = 0.0

    def add(self, id, value, budget, passed, note=""):
        self.entries.append(Check(id, _plain(value), _plain(budget), bool(passed), note))
        return self

    def extend(self, other, prefix=""):
        for e in other.entries:
            self.entries.append(Check(prefix + e.id, e.value, e.budget, e.passed, e.note))
        return self

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    @property
    def summary(self):
        return "pass" if self.passed else "fail"

    def failures(self):
        return [e for e in self.entries if not e.passed]

    def to_dict(self, timing=True):
        d = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "params": _plain(self.params),
            "seed": self.seed,
            "summary": self.summary,
            "entries": [
                {"id": e.id, "value": e.value, "budget": e.budget, "verdict": e.verdict, "note": e.note}
                for e in self.entries
            ],
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d):
        r = cls(d["command"], d.get("params", {}), seed=d.get("seed", 0), wall_time=d.get("wall_time", 0.0))
        for e in d.get("entries", []):
            r.entries.append(Check(e["id"], e["value"], e["budget"], e["verdict"] == "pass", e.get("note", "")))
        return r

    def __eq__(self, other):
        if not isinstance(other, VerificationReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


CSV_COLUMNS = ["command", "id", "value", "budget", "verdict", "note"]


def emit(report, fmt="json", timing=True):
    """Serialise a report.  JSON keeps everything; CSV flattens the entries."""
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps(report.to_dict(timing=timing), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for e in report.entries:
            w.writerow([report.command, e.id, json.dumps(e.value), json.dumps(e.budget), e.verdict, e.note])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def parse(text, fmt="json"):
    fmt = fmt.lower()
    if fmt == "json":
        return VerificationReport.from_dict(json.loads(text))
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        cmd = rows[0]["command"] if rows else ""
        r = VerificationReport(cmd)
        for row in rows:
            r.entries.append(Check(row["id"], json.loads(row["value"]), json.loads(row["budget"]),
                                   row["verdict"] == "pass", row["note"]))
        return r
    raise ValueError(f"unknown format {fmt!r}")

