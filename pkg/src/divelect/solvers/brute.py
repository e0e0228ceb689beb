"""Exhaustive oracle over all size-k committees."""

from __future__ import annotations

import itertools
import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from ..errors import SizeLimitError
from ..indices import IndexKind, value_from_counts
from ..model import Election
from ..scoring import ScoreKind, SeparableWeights, score_function
from .outcome import SolverOutcome, Status

BRUTE_FORCE_CAP = 5 * 10**6


@dataclass(frozen=True)
class ScoreConstraint:
    """Committee score (a rule's score or separable weights) at least ``beta``."""

    score: ScoreKind | SeparableWeights
    beta: Fraction | int = 0


@dataclass(frozen=True)
class FloorConstraint:
    """Per-agent satisfaction floors; agents not listed have floor 0."""

    floors: Mapping[str, int]


def _scorer(election: Election, score):
    if score is None:
        return None
    if isinstance(score, SeparableWeights):
        return score.score_of
    return score_function(election, score)


def iter_committees(election: Election, *, cap: int = BRUTE_FORCE_CAP):
    total = math.comb(election.n, election.k)
    if total > cap:
        raise SizeLimitError(f"C({election.n},{election.k})={total} committees exceed the cap {cap}")
    return itertools.combinations(range(election.n), election.k)


def floor_vector(election: Election, floors: Mapping[str, int]) -> tuple[int, ...]:
    unknown = set(floors) - set(election.agents)
    if unknown:
        raise ValueError(f"floors given for unknown agents {sorted(unknown)}")
    return tuple(int(floors.get(a, 0)) for a in election.agents)


def brute_force(
    election: Election,
    index_kind: IndexKind | str,
    constraint: ScoreConstraint | FloorConstraint | None = None,
    *,
    score: ScoreKind | SeparableWeights | None = None,
    cap: int = BRUTE_FORCE_CAP,
) -> SolverOutcome:
    """Diversity-maximal committee meeting ``constraint``.

    Ties go to the higher score (the constraint's score, else ``score``),
    then to the lexicographically smallest sorted index sequence.
    """
    kind = IndexKind.parse(index_kind)
    if isinstance(constraint, ScoreConstraint):
        score = constraint.score
    score_of = _scorer(election, score)
    beta = Fraction(constraint.beta) if isinstance(constraint, ScoreConstraint) else None
    floors = floor_vector(election, constraint.floors) if isinstance(constraint, FloorConstraint) else None
    demanding = [(b, h) for b, h in zip(election.ballots, floors)] if floors else []
    demanding = [(b, h) for b, h in demanding if h > 0]

    memo = {}
    best = None  # (diversity, score, indices)
    for combo in iter_committees(election, cap=cap):
        s = score_of(combo) if score_of is not None else None
        if beta is not None and s < beta:
            continue
        if demanding:
            chosen = frozenset(combo)
            if any(len(b & chosen) < h for b, h in demanding):
                continue
        counts = election.counts_of(combo)
        d = memo.get(counts)
        if d is None:
            d = memo[counts] = value_from_counts(kind, counts, election.k, election.weights)
        if best is None:
            best = (d, s, combo)
            continue
        c = d._cmp(best[0])
        if c > 0 or (c == 0 and s is not None and s > best[1]):
            best = (d, s, combo)

    if best is None:
        return SolverOutcome.infeasible()
    d, s, combo = best
    return SolverOutcome(Status.OPTIMAL, election.committee_of(combo), d, s, info={"indices": combo})


def all_diversity_values(election: Election, index_kind, members: list[tuple[int, ...]]):
    kind = IndexKind.parse(index_kind)
    return [value_from_counts(kind, election.counts_of(c), election.k, election.weights) for c in members]
