"""Verification records shared by the exact engine, the numeric evaluators and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VERIFIED = "verified"
MISMATCH = "mismatch"


@dataclass
class VerificationReport:
    identity: str
    params: dict[str, Any]
    order: int | None
    status: str
    anchor: str = ""
    first_mismatch: dict[str, Any] | None = None
    value: Any = None
    reference: Any = None
    abs_err: float | None = None
    details: list["VerificationReport"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "identity": self.identity,
            "params": self.params,
            "order": self.order,
            "status": self.status,
        }
        if self.anchor:
            out["anchor"] = self.anchor
        if self.first_mismatch is not None:
            out["first_mismatch"] = self.first_mismatch
        if self.value is not None:
            out["value"] = self.value
        if self.reference is not None:
            out["reference"] = self.reference
        if self.abs_err is not None:
            out["abs_err"] = self.abs_err
        if self.details:
            out["details"] = [d.to_dict() for d in self.details]
        return out


def combine(identity: str, params: dict, order: int | None, parts: list[VerificationReport], anchor: str = "") -> VerificationReport:
    """Aggregate sub-reports; the first failing part supplies ``first_mismatch``."""
    failing = next((p for p in parts if not p.ok), None)
    mismatch = None
    if failing is not None:
        mismatch = {"part": failing.identity, **(failing.first_mismatch or {})}
    return VerificationReport(
        identity=identity,
        params=params,
        order=order,
        status=MISMATCH if failing else VERIFIED,
        anchor=anchor,
        first_mismatch=mismatch,
        details=parts,
    )
