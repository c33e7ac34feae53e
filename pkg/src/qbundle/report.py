"""Check records shared by all verification routines."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass(frozen=True)
class Check:
    id: str
    ref: str
    status: str
    witness: str = ""
    budget: int | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return asdict(self)


def check(id: str, ref: str, ok: bool, witness: str = "", budget: int | None = None) -> Check:
    return Check(id, ref, PASS if ok else FAIL, "" if ok else witness, budget)


def skipped(id: str, ref: str, why: str) -> Check:
    return Check(id, ref, SKIPPED, why)


def all_ok(checks: Iterable[Check]) -> bool:
    return all(c.ok for c in checks)


def failures(checks: Iterable[Check]) -> list[Check]:
    return [c for c in checks if not c.ok]
