"""Score-constrained lexicographic-counting optimum by candidate exchanges.

Starting from a score-maximal committee, labels occurring j times are raised
to j+1 occurrences one at a time (for j = 0, 1, ...), each time trading the
best unused candidate of such a label for the cheapest member of a label
occurring more than j+1 times, as long as the score bound survives.
"""

from __future__ import annotations

from fractions import Fraction

from ..indices import IndexKind, value_from_counts
from ..model import Election
from ..scoring import SeparableWeights, top_k
from .outcome import SolverOutcome, Status


def dscr_exchange_lc(
    election: Election,
    weights: SeparableWeights,
    beta,
    index_kind: IndexKind | str = IndexKind.LEX_COUNT,
) -> SolverOutcome:
    """LC-maximal (hence richness-maximal) committee with score at least ``beta``.

    ``beta`` is in score units; it is compared against the integer scaled
    weights after rounding up. Ties between candidates go to the lower index.
    """
    kind = IndexKind.parse(index_kind)
    if kind not in (IndexKind.LEX_COUNT, IndexKind.RICHNESS):
        raise ValueError(f"the exchange algorithm optimizes lc or ri, not {kind.value}")
    w = weights.scaled
    bound = weights.scale_bound(beta)
    k, lab_of = election.k, election.cand_label

    committee = set(top_k(weights, k))
    score = sum(w[c] for c in committee)
    if score < bound:
        return SolverOutcome.infeasible(max_score=Fraction(score, weights.scale))

    counts = list(election.counts_of(committee))
    total = [len(m) for m in election.label_members]
    swaps = 0
    j = 0
    while j < k:
        pool = []
        for lab in range(election.m):
            if counts[lab] == j and total[lab] > j:
                outside = [c for c in election.label_members[lab] if c not in committee]
                pool.append(min(outside, key=lambda c: (-w[c], c)))
        while pool:
            c_a = min(pool, key=lambda c: (-w[c], c))
            donors = [c for c in committee if counts[lab_of[c]] > j + 1]
            if not donors:
                break
            c_r = min(donors, key=lambda c: (w[c], c))
            if score - w[c_r] + w[c_a] < bound:
                break
            committee.remove(c_r)
            committee.add(c_a)
            counts[lab_of[c_r]] -= 1
            counts[lab_of[c_a]] += 1
            score += w[c_a] - w[c_r]
            swaps += 1
            pool.remove(c_a)
        j += 1

    chosen = tuple(sorted(committee))
    diversity = value_from_counts(kind, tuple(counts), k)
    return SolverOutcome(
        Status.OPTIMAL,
        election.committee_of(chosen),
        diversity,
        Fraction(score, weights.scale),
        info={"indices": chosen, "swaps": swaps},
    )
