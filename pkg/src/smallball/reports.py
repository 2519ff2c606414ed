"""Structured results of single inequality checks."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .canon import to_plain

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
REJECTED = "rejected"
STATUSES = (PASS, FAIL, INCONCLUSIVE, REJECTED)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check of ``lhs <= rhs``.

    Values are exact rationals unless ``tolerance`` is nonzero.  Composite
    checks (several inequalities on the same input) list their pieces in
    ``parts``; the top-level status is then the worst part status and
    ``lhs``/``rhs`` repeat the first part.
    """

    theorem: str
    lhs: object
    rhs: object
    constant: object
    status: str
    tolerance: float = 0.0
    digest: str = ""
    notes: tuple = ()
    witness: object = None
    parts: tuple = field(default=())

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        out = {
            "kind": "verification",
            "theorem": self.theorem,
            "lhs": to_plain(self.lhs),
            "rhs": to_plain(self.rhs),
            "constant": to_plain(self.constant),
            "status": self.status,
            "tolerance": self.tolerance,
            "digest": self.digest,
            "notes": list(self.notes),
        }
        if self.witness is not None:
            out["witness"] = to_plain(self.witness)
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


def compare(lhs, rhs, tolerance=0.0):
    """Status of ``lhs <= rhs``: exact for rationals, ``lhs <= rhs + tol`` for floats."""
    if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)) and not tolerance:
        return PASS if lhs <= rhs else FAIL
    return PASS if float(lhs) <= float(rhs) + tolerance else FAIL


def worst_status(statuses):
    statuses = list(statuses)
    for s in (FAIL, REJECTED, INCONCLUSIVE):
        if s in statuses:
            return s
    return PASS


def composite(theorem, parts, *, digest="", notes=()):
    parts = tuple(parts)
    first = parts[0]
    return VerificationReport(
        theorem=theorem,
        lhs=first.lhs,
        rhs=first.rhs,
        constant=first.constant,
        status=worst_status(p.status for p in parts),
        tolerance=max(p.tolerance for p in parts),
        digest=digest,
        notes=tuple(notes),
        parts=parts,
    )


def with_notes(report, *notes):
    return replace(report, notes=report.notes + tuple(notes))
