import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from graphs.utils import format_fraction

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

RELATIONS = ("==", "<=", ">=", "<", ">", "is", "margin>")


class LemmaError(Exception):
    pass


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if hasattr(value, "item"):
        return value.item()
    return value


def judge(relation: str, lhs, rhs, tolerance=0) -> str:
    """
    Status of one claim lhs <relation> rhs

    "margin>" reads lhs as the sampled minimum of a quantity that must stay positive and rhs as the
    slack the sampling can hide; a positive minimum not clearing the slack is inconclusive.
    """
    if relation == "==":
        return PASS if abs(lhs - rhs) <= tolerance else FAIL
    if relation == "<=":
        return PASS if lhs <= rhs + tolerance else FAIL
    if relation == ">=":
        return PASS if lhs >= rhs - tolerance else FAIL
    if relation == "<":
        return PASS if lhs < rhs else FAIL
    if relation == ">":
        return PASS if lhs > rhs else FAIL
    if relation == "is":
        return PASS if lhs == rhs else FAIL
    if relation == "margin>":
        if lhs <= 0:
            return FAIL
        return PASS if lhs - rhs > 0 else INCONCLUSIVE
    raise LemmaError(f"unknown relation {relation!r}")


@dataclass
class Claim:
    """
    One checked inequality or identity

    Parameters:
    - name: short identifier
    - relation: one of RELATIONS
    - lhs: computed value
    - rhs: bound it is compared with
    - tolerance: absolute tolerance for ==, <= and >=
    - reference: published value for the human-readable table, if any
    """
    name: str
    relation: str
    lhs: Any
    rhs: Any
    tolerance: Any = 0
    reference: Optional[str] = None
    status: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise LemmaError(f"unknown relation {self.relation!r}")
        if not self.status:
            self.status = judge(self.relation, self.lhs, self.rhs, self.tolerance)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "tolerance": _encode(self.tolerance),
            "reference": self.reference,
            "pass": self.status == PASS,
            "status": self.status,
        }


def _decode(value: Any) -> Any:
    if isinstance(value, str) and "/" in value:
        return Fraction(value)
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


@dataclass
class LemmaReport:
    lemma: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    claims: List[Claim] = field(default_factory=list)
    values: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, relation: str, lhs, rhs, tolerance=0, reference: str = None, on_event=None) -> Claim:
        claim = Claim(name, relation, lhs, rhs, tolerance, reference)
        self.claims.append(claim)
        if on_event is not None:
            on_event({"type": "claim", "solver": self.lemma, "name": name, "status": claim.status})
        return claim

    def extend(self, other: "LemmaReport", prefix: str = "") -> None:
        for c in other.claims:
            self.claims.append(Claim(prefix + c.name, c.relation, c.lhs, c.rhs, c.tolerance, c.reference, c.status))
        for k, v in other.values.items():
            self.values[prefix + k] = v

    @property
    def status(self) -> str:
        states = {c.status for c in self.claims}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[self.status]

    def failures(self) -> List[Claim]:
        return [c for c in self.claims if c.status != PASS]

    def recheck(self) -> bool:
        """Recompute every status from the stored values and compare with the recorded ones."""
        for c in self.claims:
            stored = c.to_dict()
            lhs, rhs, tol = _decode(stored["lhs"]), _decode(stored["rhs"]), _decode(stored["tolerance"])
            if judge(c.relation, lhs, rhs, tol) != c.status:
                return False
        return True

    def to_dict(self) -> Dict:
        return {
            "lemma": self.lemma,
            "inputs": _encode(self.inputs),
            "claims": [c.to_dict() for c in self.claims],
            "values": _encode(self.values),
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary_table(self) -> str:
        rows = [("claim", "computed", "bound", "reference", "tolerance", "status")]
        for c in self.claims:
            rows.append((c.name, _short(c.lhs), f"{c.relation} {_short(c.rhs)}", c.reference or "-",
                         _short(c.tolerance), c.status))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines.append(f"{self.lemma}: {self.status}")
        return "\n".join(lines)


def _short(value: Any) -> str:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float):
        return f"{value:.8g}"
    return str(_encode(value))
