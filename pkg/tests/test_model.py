import pytest
from hypothesis import given

from conftest import elections
from divelect.errors import InvalidCommittee, InvalidElection
from divelect.model import (
    Committee,
    Election,
    distr,
    distr_from_counts,
    label_counts,
    satisfaction,
    satisfaction_of,
)


def test_example_distr_vectors(example1, example_committees):
    assert distr(example1, example_committees["S1"]).entries == (0, 0, 0, 2, 1, 0, 0, 0, 0, 0, 0)
    assert distr(example1, example_committees["S2"]).entries == (0, 2, 0, 0, 0, 0, 0, 0, 1, 0, 0)
    assert distr(example1, example_committees["S3"]).entries == (1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0)


def test_label_counts_include_zeros(example1, example_committees):
    assert label_counts(example1, example_committees["S3"]) == {"health": 0, "education": 5, "sport": 5}


def test_label_counts_accept_partial_committees(example1):
    assert label_counts(example1, Committee.of(["h1", "s2"])) == {"health": 1, "education": 0, "sport": 1}


def test_satisfaction(example1, example_committees):
    assert satisfaction(example1, example_committees["S2"]) == {"a1": 4, "a2": 2, "a3": 4}


def test_distr_rejects_wrong_size(example1):
    with pytest.raises(InvalidCommittee):
        distr(example1, Committee.of(["h1", "h2"]))


def test_unknown_candidate_in_committee(example1):
    with pytest.raises(InvalidCommittee):
        example1.indices_of(Committee.of(["zz"] + [f"s{i}" for i in range(1, 10)]))


def test_committee_rejects_duplicates():
    with pytest.raises(InvalidCommittee):
        Committee.of(["a", "a"])


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"k": 0}, "committee size"),
        ({"k": 3}, "committee size"),
        ({"label_of": {"x": "A"}}, "no label"),
        ({"label_of": {"x": "A", "y": "Q"}}, "unknown label"),
        ({"approvals": {"v": {"zz"}}}, "unknown candidates"),
        ({"approvals": {"ghost": {"x"}}}, "unknown agents"),
        ({"label_weights": {"A": 1}}, "without weight"),
        ({"label_weights": {"A": 0, "B": 1}}, "positive integer"),
        ({"label_weights": {"A": 1.5, "B": 1}}, "positive integer"),
    ],
)
def test_invalid_elections(kwargs, message):
    base = dict(
        agents=("v",),
        candidates=("x", "y"),
        approvals={"v": frozenset({"x"})},
        k=1,
        labels=("A", "B"),
        label_of={"x": "A", "y": "B"},
    )
    base.update(kwargs)
    with pytest.raises(InvalidElection, match=message):
        Election(**base)


def test_duplicate_ids_rejected():
    with pytest.raises(InvalidElection):
        Election(("v", "v"), ("x",), {}, 1, ("A",), {"x": "A"})
    with pytest.raises(InvalidElection):
        Election(("v",), ("x", "x"), {}, 1, ("A",), {"x": "A"})


def test_election_is_immutable_and_comparable(example1):
    with pytest.raises(Exception):
        example1.k = 3
    assert example1 == example1.with_k(10)
    assert example1 != example1.with_k(9)


def test_agents_without_ballot_approve_nothing():
    e = Election(("v", "w"), ("x", "y"), {"v": {"x"}}, 1, ("A",), {"x": "A", "y": "A"})
    assert e.approvals["w"] == frozenset()
    assert e.ballots == (frozenset({0}), frozenset())


@given(elections())
def test_distr_sums(election):
    idx = tuple(range(election.k))
    counts = election.counts_of(idx)
    d = distr_from_counts(counts, election.k)
    assert len(d) == election.k + 1
    assert sum(d) == election.m
    assert sum(j * x for j, x in enumerate(d)) == election.k


@given(elections())
def test_satisfaction_views_agree(election):
    committee = election.committee_of(range(election.k))
    sat = satisfaction(election, committee)
    assert tuple(sat[a] for a in election.agents) == satisfaction_of(election, range(election.k))
