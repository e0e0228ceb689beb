"""Election data model, occurrence statistics and agent satisfaction.

An :class:`Election` keeps the opaque string ids a user supplied, and maps
them once to dense integer indices. All algorithms in the package work on
those indices; the string-level functions here are thin wrappers.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType

from .errors import InvalidCommittee, InvalidElection


def _freeze_mapping(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class Election:
    """An approval election with labelled candidates.

    ``approvals`` maps every agent to the set of candidates it approves,
    ``label_of`` maps every candidate to exactly one label. ``label_weights``
    is optional; when present every label needs a positive integer weight.
    """

    agents: tuple[str, ...]
    candidates: tuple[str, ...]
    approvals: Mapping[str, frozenset[str]]
    k: int
    labels: tuple[str, ...]
    label_of: Mapping[str, str]
    label_weights: Mapping[str, int] | None = None

    # dense views, filled in __post_init__
    cand_index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    label_index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    cand_label: tuple[int, ...] = field(init=False, repr=False, compare=False)
    ballots: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    label_members: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    weights: tuple[int, ...] | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        agents = tuple(self.agents)
        candidates = tuple(self.candidates)
        labels = tuple(self.labels)
        if len(set(agents)) != len(agents):
            raise InvalidElection("duplicate agent id")
        if len(set(candidates)) != len(candidates):
            raise InvalidElection("duplicate candidate id")
        if len(set(labels)) != len(labels):
            raise InvalidElection("duplicate label id")
        if not 0 < self.k <= len(candidates):
            raise InvalidElection(
                f"committee size k={self.k} must satisfy 0 < k <= |C|={len(candidates)}"
            )

        cand_index = {c: i for i, c in enumerate(candidates)}
        label_index = {l: i for i, l in enumerate(labels)}

        approvals = {}
        for a in agents:
            ballot = frozenset(self.approvals.get(a, ()))
            unknown = ballot - cand_index.keys()
            if unknown:
                raise InvalidElection(f"agent {a!r} approves unknown candidates {sorted(unknown)}")
            approvals[a] = ballot
        stray = set(self.approvals) - set(agents)
        if stray:
            raise InvalidElection(f"approvals given for unknown agents {sorted(stray)}")

        cand_label = []
        for c in candidates:
            if c not in self.label_of:
                raise InvalidElection(f"candidate {c!r} has no label")
            lab = self.label_of[c]
            if lab not in label_index:
                raise InvalidElection(f"candidate {c!r} has unknown label {lab!r}")
            cand_label.append(label_index[lab])

        weights = None
        if self.label_weights is not None:
            lw = dict(self.label_weights)
            missing = [l for l in labels if l not in lw]
            if missing:
                raise InvalidElection(f"labels without weight: {missing}")
            for l, w in lw.items():
                if isinstance(w, bool) or not isinstance(w, int) or w <= 0:
                    raise InvalidElection(f"label weight for {l!r} must be a positive integer, got {w!r}")
            weights = tuple(lw[l] for l in labels)
            object.__setattr__(self, "label_weights", _freeze_mapping({l: lw[l] for l in labels}))

        members = [[] for _ in labels]
        for i, lab in enumerate(cand_label):
            members[lab].append(i)

        set_ = object.__setattr__
        set_(self, "agents", agents)
        set_(self, "candidates", candidates)
        set_(self, "labels", labels)
        set_(self, "approvals", _freeze_mapping(approvals))
        set_(self, "label_of", _freeze_mapping({c: self.label_of[c] for c in candidates}))
        set_(self, "cand_index", _freeze_mapping(cand_index))
        set_(self, "label_index", _freeze_mapping(label_index))
        set_(self, "cand_label", tuple(cand_label))
        set_(self, "ballots", tuple(frozenset(cand_index[c] for c in approvals[a]) for a in agents))
        set_(self, "label_members", tuple(tuple(m) for m in members))
        set_(self, "weights", weights)

    def __reduce__(self):
        # mapping proxies do not pickle; rebuild from plain dicts instead
        lw = dict(self.label_weights) if self.label_weights is not None else None
        return (
            Election,
            (self.agents, self.candidates, dict(self.approvals), self.k, self.labels, dict(self.label_of), lw),
        )

    @classmethod
    def build(
        cls,
        approvals: Mapping[str, Iterable[str]],
        label_of: Mapping[str, str],
        k: int,
        *,
        agents: Iterable[str] | None = None,
        candidates: Iterable[str] | None = None,
        labels: Iterable[str] | None = None,
        label_weights: Mapping[str, int] | None = None,
    ) -> Election:
        """Convenience constructor; orders default to first appearance."""
        if candidates is None:
            candidates = list(label_of)
        if labels is None:
            labels = list(dict.fromkeys(label_of[c] for c in candidates))
        if agents is None:
            agents = list(approvals)
        return cls(
            agents=tuple(agents),
            candidates=tuple(candidates),
            approvals={a: frozenset(v) for a, v in approvals.items()},
            k=k,
            labels=tuple(labels),
            label_of=dict(label_of),
            label_weights=label_weights,
        )

    @property
    def n(self) -> int:
        return len(self.candidates)

    @property
    def m(self) -> int:
        return len(self.labels)

    def with_k(self, k: int) -> Election:
        return replace(self, k=k)

    def with_label_weights(self, label_weights: Mapping[str, int] | None) -> Election:
        return replace(self, label_weights=label_weights)

    def indices_of(self, committee: Committee, *, check_size: bool = True) -> tuple[int, ...]:
        """Sorted dense indices of a committee's members."""
        try:
            idx = tuple(sorted(self.cand_index[c] for c in committee.members))
        except KeyError as exc:
            raise InvalidCommittee(f"unknown candidate {exc.args[0]!r}") from None
        if check_size and len(idx) != self.k:
            raise InvalidCommittee(f"committee has {len(idx)} members, expected k={self.k}")
        return idx

    def committee_of(self, indices: Iterable[int]) -> Committee:
        return Committee(frozenset(self.candidates[i] for i in indices))

    def counts_of(self, indices: Iterable[int]) -> tuple[int, ...]:
        """Per-label occurrence counts for a set of candidate indices."""
        counts = [0] * self.m
        for i in indices:
            counts[self.cand_label[i]] += 1
        return tuple(counts)


@dataclass(frozen=True)
class Committee:
    members: frozenset[str]

    @classmethod
    def of(cls, members: Iterable[str]) -> Committee:
        members = list(members)
        if len(set(members)) != len(members):
            raise InvalidCommittee("duplicate committee member")
        return cls(frozenset(members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


@dataclass(frozen=True)
class DistrVector:
    """Occurrence histogram: ``entries[j]`` counts labels occurring j times.

    Stored 0-based; ``entries[0]`` counts absent labels.
    """

    entries: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, j: int) -> int:
        return self.entries[j]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def distr_from_counts(counts: Iterable[int], k: int) -> tuple[int, ...]:
    entries = [0] * (k + 1)
    for n in counts:
        entries[n] += 1
    return tuple(entries)


def distr(election: Election, committee: Committee) -> DistrVector:
    idx = election.indices_of(committee)
    return DistrVector(distr_from_counts(election.counts_of(idx), election.k))


def label_counts(election: Election, committee: Committee) -> dict[str, int]:
    """Occurrences of every label (zeros included) among the members.

    The size is not checked, so partial committees are accepted.
    """
    idx = election.indices_of(committee, check_size=False)
    return dict(zip(election.labels, election.counts_of(idx)))


def satisfaction(election: Election, committee: Committee) -> dict[str, int]:
    idx = frozenset(election.indices_of(committee))
    return {a: len(b & idx) for a, b in zip(election.agents, election.ballots)}


def satisfaction_of(election: Election, indices: Iterable[int]) -> tuple[int, ...]:
    idx = frozenset(indices)
    return tuple(len(b & idx) for b in election.ballots)
