"""Diversity maximization under per-agent satisfaction floors.

Exact depth-first search over candidates grouped by label, include before
exclude. Two conservative prunings keep it fast at desk scale:

* feasibility: an agent's unmet floor must not exceed the remaining slots
  or its remaining undecided approved candidates;
* diversity: a greedy completion of the partial label profile, ignoring
  approvals, bounds every completion from above. Branches that cannot beat
  the incumbent strictly are cut.
"""

from __future__ import annotations

from collections.abc import Mapping

from ..errors import SizeLimitError
from ..indices import IndexKind, value_from_counts
from ..model import Election
from .brute import floor_vector
from .greedy import fill_counts
from .outcome import SolverOutcome, Status

DSAT_LIMIT = 30

# kinds whose optimum over completions of a profile is the greedy fill
_BOUNDED = {IndexKind.RICHNESS, IndexKind.SIMPSON, IndexKind.SHANNON, IndexKind.LEX_COUNT, IndexKind.W_SIMPSON}


def dsat_exact(
    election: Election,
    index_kind: IndexKind | str,
    floors: Mapping[str, int],
    *,
    limit: int = DSAT_LIMIT,
) -> SolverOutcome:
    kind = IndexKind.parse(index_kind)
    if election.n > limit:
        raise SizeLimitError(f"|C|={election.n} exceeds the exhaustive limit {limit}")
    k, m = election.k, election.m
    h = floor_vector(election, floors)
    ballots = election.ballots
    for ballot, need in zip(ballots, h):
        if need > len(ballot) or need > k:
            return SolverOutcome.infeasible(reason="a floor exceeds what the agent can reach")

    order = [c for members in election.label_members for c in members]
    lab_of = election.cand_label
    label_w = election.weights
    approvers = [[] for _ in range(election.n)]
    for a, ballot in enumerate(ballots):
        for c in ballot:
            approvers[c].append(a)

    residual = list(h)  # unmet part of each floor
    supply = [len(b) for b in ballots]  # undecided approved candidates
    counts = [0] * m
    room = [len(members) for members in election.label_members]  # undecided per label
    chosen: list[int] = []
    best: list = [None, None]  # (diversity, indices)
    memo: dict = {}
    nodes = [0]

    def value(cs):
        key = tuple(cs)
        v = memo.get(key)
        if v is None:
            v = memo[key] = value_from_counts(kind, key, k, label_w)
        return v

    def viable(slots):
        return all(r <= 0 or (r <= slots and r <= s) for r, s in zip(residual, supply))

    def visit(pos: int):
        nodes[0] += 1
        slots = k - len(chosen)
        if slots == 0:
            if all(r <= 0 for r in residual):
                v = value(counts)
                if best[0] is None or v > best[0]:
                    best[0], best[1] = v, tuple(sorted(chosen))
            return
        if len(order) - pos < slots or not viable(slots):
            return
        if best[0] is not None and kind in _BOUNDED:
            filled = fill_counts(counts, room, slots, label_w if kind.weighted else None)
            if filled is None or value(filled) <= best[0]:
                return
        c = order[pos]
        lab = lab_of[c]
        room[lab] -= 1
        for a in approvers[c]:
            supply[a] -= 1
        # include
        chosen.append(c)
        counts[lab] += 1
        for a in approvers[c]:
            residual[a] -= 1
        visit(pos + 1)
        for a in approvers[c]:
            residual[a] += 1
        counts[lab] -= 1
        chosen.pop()
        # exclude
        visit(pos + 1)
        for a in approvers[c]:
            supply[a] += 1
        room[lab] += 1

    visit(0)
    if best[0] is None:
        return SolverOutcome.infeasible(nodes=nodes[0])
    idx = best[1]
    return SolverOutcome(
        Status.OPTIMAL, election.committee_of(idx), best[0], None,
        info={"indices": idx, "nodes": nodes[0]},
    )
