from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from ..indices import DiversityValue
from ..model import Committee


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverOutcome:
    """Result of a constrained diversity maximization.

    ``committee`` and ``diversity`` are present iff the status is optimal.
    ``info`` carries solver-specific diagnostics (knapsack bounds etc.).
    """

    status: Status
    committee: Committee | None = None
    diversity: DiversityValue | None = None
    score: Fraction | None = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.committee is not None) != (self.status is Status.OPTIMAL):
            raise ValueError("committee must be present exactly when the outcome is optimal")

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @classmethod
    def infeasible(cls, **info) -> SolverOutcome:
        return cls(Status.INFEASIBLE, info=info)
