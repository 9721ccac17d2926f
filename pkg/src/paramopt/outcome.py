from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional


class Status(Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"
    INCONSISTENT = "inconsistent"
    FALLBACK = "fallback"


@dataclass
class LpOutcome:
    """Result of any solver in the package.

    ``x`` holds the decision variables and ``slacks`` the slack/surplus values of
    the rows in the order they were given. A ``FALLBACK`` outcome carries the
    oracle's answer in ``value``/``x``/``slacks`` and its status in ``resolved``.
    """

    tag: Status
    value: Optional[Fraction] = None
    x: tuple[Fraction, ...] = ()
    slacks: tuple[Fraction, ...] = ()
    trace: list[str] = field(default_factory=list)
    resolved: Optional[Status] = None
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def final_status(self) -> Status:
        """Status after resolving a fallback; INCONSISTENT counts as INFEASIBLE."""
        s = self.resolved if self.tag is Status.FALLBACK and self.resolved else self.tag
        return Status.INFEASIBLE if s is Status.INCONSISTENT else s

    @property
    def assignment(self) -> tuple[Fraction, ...]:
        return self.x + self.slacks
