"""Committee scoring: separable AV/SAV weights, CC and PAV scores.

Separable weights are kept twice: as exact rationals and as integers after
multiplying by a common scale (1 for AV, the lcm of ballot sizes for SAV).
Solvers work on the integer form.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import SizeLimitError
from .model import Committee, Election, satisfaction_of

EXACT_SCORE_LIMIT = 24


class ScoreKind(str, enum.Enum):
    AV = "av"
    SAV = "sav"
    CC = "cc"
    PAV = "pav"

    @property
    def separable(self) -> bool:
        return self in (ScoreKind.AV, ScoreKind.SAV)

    @classmethod
    def parse(cls, text: str | ScoreKind) -> ScoreKind:
        return text if isinstance(text, ScoreKind) else cls(text.strip().lower())


@dataclass(frozen=True)
class SeparableWeights:
    candidates: tuple[str, ...]
    scaled: tuple[int, ...]
    scale: int = 1

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.scale) for w in self.scaled)

    @property
    def alpha(self) -> int:
        return max(self.scaled, default=0)

    def by_candidate(self) -> dict[str, Fraction]:
        return dict(zip(self.candidates, self.weights))

    def scaled_score(self, indices: Sequence[int]) -> int:
        return sum(self.scaled[i] for i in indices)

    def score_of(self, indices: Sequence[int]) -> Fraction:
        return Fraction(self.scaled_score(indices), self.scale)

    def scale_bound(self, beta) -> int:
        """Smallest integer scaled score meeting the rational bound ``beta``."""
        return math.ceil(Fraction(beta) * self.scale)


def av_weights(election: Election) -> SeparableWeights:
    tally = [0] * election.n
    for ballot in election.ballots:
        for c in ballot:
            tally[c] += 1
    return SeparableWeights(election.candidates, tuple(tally), 1)


def sav_weights(election: Election) -> SeparableWeights:
    sizes = {len(b) for b in election.ballots if b}
    ell = reduce(lambda a, b: a * b // math.gcd(a, b), sizes, 1)
    tally = [0] * election.n
    for ballot in election.ballots:
        if not ballot:
            continue
        share = ell // len(ballot)
        for c in ballot:
            tally[c] += share
    return SeparableWeights(election.candidates, tuple(tally), ell)


def separable_weights(election: Election, kind: ScoreKind | str) -> SeparableWeights:
    kind = ScoreKind.parse(kind)
    if kind is ScoreKind.AV:
        return av_weights(election)
    if kind is ScoreKind.SAV:
        return sav_weights(election)
    raise ValueError(f"{kind.value} is not separable")


def separable_score(weights: SeparableWeights, committee: Committee) -> Fraction:
    lookup = weights.by_candidate()
    return sum((lookup[c] for c in committee.members), Fraction(0))


def cc_score(election: Election, committee: Committee) -> int:
    idx = frozenset(election.indices_of(committee, check_size=False))
    return sum(1 for b in election.ballots if b & idx)


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def pav_score(election: Election, committee: Committee) -> Fraction:
    idx = election.indices_of(committee, check_size=False)
    return sum((_harmonic(s) for s in satisfaction_of(election, idx)), Fraction(0))


def score_function(election: Election, kind: ScoreKind | str) -> Callable[[Sequence[int]], Fraction]:
    """Score of a committee given as dense candidate indices."""
    kind = ScoreKind.parse(kind)
    if kind.separable:
        weights = separable_weights(election, kind)
        return weights.score_of
    if kind is ScoreKind.CC:
        return lambda idx: Fraction(_cc_indices(election, idx))
    harmonic = [_harmonic(i) for i in range(election.k + 1)]
    return lambda idx: sum((harmonic[s] for s in satisfaction_of(election, idx)), Fraction(0))


def _cc_indices(election: Election, idx) -> int:
    chosen = frozenset(idx)
    return sum(1 for b in election.ballots if b & chosen)


def committee_score(election: Election, kind: ScoreKind | str, committee: Committee) -> Fraction:
    return score_function(election, kind)(election.indices_of(committee))


def top_k(weights: SeparableWeights, k: int) -> tuple[int, ...]:
    """Indices of a top-k-by-weight committee, ties by candidate input order."""
    order = sorted(range(len(weights.scaled)), key=lambda i: (-weights.scaled[i], i))
    return tuple(sorted(order[:k]))


def max_separable_committee(election: Election, weights: SeparableWeights) -> tuple[Committee, Fraction]:
    chosen = top_k(weights, election.k)
    return election.committee_of(chosen), weights.score_of(chosen)


def all_max_separable(election: Election, weights: SeparableWeights) -> list[tuple[int, ...]]:
    """Every score-maximal committee of a separable score."""
    k = election.k
    order = sorted(range(election.n), key=lambda i: (-weights.scaled[i], i))
    threshold = weights.scaled[order[k - 1]]
    above = [i for i in order if weights.scaled[i] > threshold]
    tied = sorted(i for i in order if weights.scaled[i] == threshold)
    need = k - len(above)
    return [tuple(sorted(above + list(extra))) for extra in itertools.combinations(tied, need)]


class _CoverageSearch:
    """Depth-first branch and bound for CC / PAV.

    Both scores are submodular in the committee, so the current score plus
    the best remaining marginal gains bounds every completion. Scores are
    integers: PAV is scaled by lcm(1..k).
    """

    def __init__(self, election: Election, kind: ScoreKind):
        self.election = election
        self.k = election.k
        k = self.k
        if kind is ScoreKind.CC:
            self.gain = [1] + [0] * k  # gain[s]: value of the (s+1)-th approved member
        else:
            scale = reduce(lambda a, b: a * b // math.gcd(a, b), range(1, k + 1), 1)
            self.gain = [scale // (s + 1) for s in range(k)] + [0]
            self.scale = scale
        self.kind = kind
        self.approvers = [[] for _ in range(election.n)]
        for a, ballot in enumerate(election.ballots):
            for c in ballot:
                self.approvers[c].append(a)

    def run(self, collect_all: bool):
        n, k = self.election.n, self.k
        sat = [0] * len(self.election.ballots)
        chosen: list[int] = []
        best = [-1, []]

        def marginal(c):
            return sum(self.gain[sat[a]] for a in self.approvers[c])

        def visit(pos: int, score: int):
            if len(chosen) == k:
                if score > best[0]:
                    best[0] = score
                    best[1] = [tuple(chosen)]
                elif collect_all and score == best[0]:
                    best[1].append(tuple(chosen))
                return
            remaining = k - len(chosen)
            if n - pos < remaining:
                return
            gains = sorted((marginal(c) for c in range(pos, n)), reverse=True)[:remaining]
            bound = score + sum(gains)
            if bound < best[0] or (bound == best[0] and not collect_all):
                return
            c = pos
            delta = marginal(c)
            chosen.append(c)
            for a in self.approvers[c]:
                sat[a] += 1
            visit(pos + 1, score + delta)
            for a in self.approvers[c]:
                sat[a] -= 1
            chosen.pop()
            visit(pos + 1, score)

        visit(0, 0)
        return best[0], best[1]

    def to_fraction(self, score: int) -> Fraction:
        return Fraction(score) if self.kind is ScoreKind.CC else Fraction(score, self.scale)


def _check_limit(election: Election, limit: int) -> None:
    if election.n > limit:
        raise SizeLimitError(f"|C|={election.n} exceeds the exhaustive limit {limit}")


def max_score_exact(
    election: Election, score_kind: ScoreKind | str, *, limit: int = EXACT_SCORE_LIMIT
) -> tuple[Committee, Fraction]:
    """Exact maximizer of the CC or PAV score (lexicographically first optimum)."""
    kind = ScoreKind.parse(score_kind)
    if kind.separable:
        return max_separable_committee(election, separable_weights(election, kind))
    _check_limit(election, limit)
    search = _CoverageSearch(election, kind)
    score, winners = search.run(collect_all=False)
    return election.committee_of(winners[0]), search.to_fraction(score)


def all_winning_committees(
    election: Election, score_kind: ScoreKind | str, *, limit: int = EXACT_SCORE_LIMIT
) -> list[tuple[int, ...]]:
    kind = ScoreKind.parse(score_kind)
    if kind.separable:
        return all_max_separable(election, separable_weights(election, kind))
    _check_limit(election, limit)
    _, winners = _CoverageSearch(election, kind).run(collect_all=True)
    return winners
