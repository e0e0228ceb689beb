"""Unconstrained diversity maximization by balancing label occurrences."""

from __future__ import annotations

from collections.abc import Sequence

from ..errors import ConfigurationError
from ..indices import IndexKind
from ..model import Committee, Election


def _pick_label(counts, available, weights) -> int | None:
    best = None
    for lab, (n, room) in enumerate(zip(counts, available)):
        if room <= 0:
            continue
        if best is None:
            best = lab
        elif weights is None:
            if n < counts[best]:
                best = lab
        # marginal Si' loss (2n+1)/w, compared by cross-multiplication
        elif (2 * n + 1) * weights[best] < (2 * counts[best] + 1) * weights[lab]:
            best = lab
    return best


def fill_counts(
    counts: Sequence[int],
    available: Sequence[int],
    slots: int,
    weights: Sequence[int] | None = None,
) -> tuple[int, ...] | None:
    """Complete an occurrence vector with ``slots`` more members.

    Each step adds to the least-occurring label that still has room
    (``available`` per label); with ``weights`` the label whose weighted
    Simpson loss grows least. Returns None if the room runs out.
    """
    counts = list(counts)
    room = list(available)
    for _ in range(slots):
        lab = _pick_label(counts, room, weights)
        if lab is None:
            return None
        counts[lab] += 1
        room[lab] -= 1
    return tuple(counts)


def greedy_indices(election: Election, weights: Sequence[int] | None = None) -> tuple[int, ...]:
    counts = [0] * election.m
    taken = [0] * election.m
    chosen = []
    available = [len(members) for members in election.label_members]
    for _ in range(election.k):
        lab = _pick_label(counts, [a - t for a, t in zip(available, taken)], weights)
        chosen.append(election.label_members[lab][taken[lab]])
        taken[lab] += 1
        counts[lab] += 1
    return tuple(sorted(chosen))


def max_diversity_greedy(election: Election, index_kind: IndexKind | str = IndexKind.SIMPSON) -> Committee:
    """A most diverse committee, ignoring approvals.

    All unweighted indices share the same optimal occurrence profile, so the
    result does not depend on ``index_kind`` unless it is weighted Simpson,
    where labels are filled by smallest marginal loss instead.
    Ties go to the lower label index, and within a label to the lower
    candidate index.
    """
    kind = IndexKind.parse(index_kind)
    if kind.weighted:
        if kind is not IndexKind.W_SIMPSON:
            raise ConfigurationError(f"no greedy optimum is known for {kind.value}")
        if election.weights is None:
            raise ConfigurationError("weighted Simpson needs label weights")
        return election.committee_of(greedy_indices(election, election.weights))
    return election.committee_of(greedy_indices(election))
