import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from divelect.model import Committee, Election


def example_election(k: int = 10) -> Election:
    """Three labels (health, education, sport) with 3/5/8 candidates."""
    label_of = {}
    label_of.update({f"h{i}": "health" for i in range(1, 4)})
    label_of.update({f"e{i}": "education" for i in range(1, 6)})
    label_of.update({f"s{i}": "sport" for i in range(1, 9)})
    approvals = {
        "a1": {"s1", "s2", "s3", "e1"},
        "a2": {"h1", "e2", "s4"},
        "a3": {"s5", "s6", "s7", "s8"},
    }
    return Election.build(approvals, label_of, k, labels=["health", "education", "sport"])


EXAMPLE_COMMITTEES = {
    "S1": ["h1", "h2", "h3", "e1", "e2", "e3", "s1", "s2", "s3", "s4"],
    "S2": ["h1", "e1", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"],
    "S3": ["e1", "e2", "e3", "e4", "e5", "s1", "s2", "s3", "s4", "s5"],
}


@pytest.fixture
def example1():
    return example_election()


@pytest.fixture
def example_committees():
    return {name: Committee.of(members) for name, members in EXAMPLE_COMMITTEES.items()}


def random_election(
    rng: random.Random,
    *,
    n_range=(4, 14),
    k_range=(3, 6),
    m_range=(2, 6),
    agents_range=(1, 10),
    weights=None,
) -> Election:
    """Seeded random instance; ``weights`` is a sequence of allowed label weights."""
    n = rng.randint(*n_range)
    k = rng.randint(min(k_range[0], n - 1), min(k_range[1], n - 1))
    m = rng.randint(*m_range)
    candidates = [f"c{i}" for i in range(n)]
    # every one of the m labels gets at least one candidate (when n allows)
    label_ids = [i if i < m else rng.randrange(m) for i in range(n)]
    rng.shuffle(label_ids)
    label_of = {c: f"l{x}" for c, x in zip(candidates, label_ids)}
    agents = [f"a{i}" for i in range(rng.randint(*agents_range))]
    approvals = {a: rng.sample(candidates, rng.randint(0, n)) for a in agents}
    labels = sorted(set(label_of.values()))
    label_weights = {l: rng.choice(weights) for l in labels} if weights else None
    return Election.build(approvals, label_of, k, agents=agents, labels=labels, label_weights=label_weights)


@st.composite
def elections(draw, max_n=10, max_m=4, max_agents=6, weighted=False):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, n))
    m = draw(st.integers(1, max_m))
    candidates = [f"c{i}" for i in range(n)]
    labels_drawn = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    label_of = {c: f"l{x}" for c, x in zip(candidates, labels_drawn)}
    n_agents = draw(st.integers(0, max_agents))
    approvals = {
        f"a{i}": draw(st.sets(st.sampled_from(candidates), max_size=n)) for i in range(n_agents)
    }
    labels = sorted(set(label_of.values()))
    label_weights = None
    if weighted:
        label_weights = {l: draw(st.integers(1, 3)) for l in labels}
    return Election.build(approvals, label_of, k, labels=labels, label_weights=label_weights)


def frac(x) -> Fraction:
    return Fraction(x)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}")
