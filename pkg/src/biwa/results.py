"""Small verdict records shared by the equivalence and decision procedures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Equivalence:
    """Outcome of an equivalence check.  Truthy iff equivalent; otherwise
    ``counterexample`` is a word on which the two sides differ."""

    equivalent: bool
    counterexample: Optional[str] = None

    def __bool__(self):
        return self.equivalent


@dataclass(frozen=True)
class Decision:
    """Bideterminisability verdict.

    ``stage`` names the step that settled the verdict (``"empty"``,
    ``"minimal"``, ``"skeleton"``, ``"system"``, ``"equivalence"``).  YES
    verdicts carry a bideterministic ``witness``; NO verdicts carry a
    ``reason`` plus whatever evidence the stage produced in ``details``.
    """

    bideterminisable: bool
    stage: str
    witness: Any = None
    reason: Optional[str] = None
    counterexample: Optional[str] = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.bideterminisable

    @property
    def verdict(self) -> str:
        return "yes" if self.bideterminisable else "no"
