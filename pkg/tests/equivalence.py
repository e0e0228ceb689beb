"""Solver-versus-oracle comparison over one election.

``check_election`` runs every solver on an instance, compares each result
against :func:`brute_force` under the same constraint, and returns a list of
human-readable mismatch descriptions (empty when all agree).
"""

from fractions import Fraction

from divelect.indices import UNWEIGHTED, IndexKind, value_from_counts
from divelect.scoring import av_weights, sav_weights, top_k
from divelect.solvers import (
    FloorConstraint,
    ScoreConstraint,
    brute_force,
    dsat_exact,
    dscr_exchange_lc,
    dscr_knapsack_decision,
    dscr_knapsack_max,
    dscr_weighted_si,
    max_diversity_greedy,
    shifted_simpson,
)

SH_TOL = 1e-9


def same_value(kind, a, b) -> bool:
    if a is None or b is None:
        return a is b
    if kind.base is IndexKind.SHANNON:
        return abs(a.value - b.value) <= SH_TOL
    return a == b


def _check_outcome(name, kind, election, outcome, oracle, problems, *, beta=None, weights=None, floors=None):
    if outcome.optimal != oracle.optimal:
        problems.append(f"{name}/{kind.value}: status {outcome.status.value} vs oracle {oracle.status.value}")
        return
    if not outcome.optimal:
        return
    idx = election.indices_of(outcome.committee)
    actual = value_from_counts(kind, election.counts_of(idx), election.k, election.weights)
    if actual != outcome.diversity and not same_value(kind, actual, outcome.diversity):
        problems.append(f"{name}/{kind.value}: reported diversity does not match its committee")
    if not same_value(kind, actual, oracle.diversity):
        problems.append(f"{name}/{kind.value}: diversity {actual.value} vs oracle {oracle.diversity.value}")
    if weights is not None and weights.score_of(idx) < beta:
        problems.append(f"{name}/{kind.value}: score {weights.score_of(idx)} below beta {beta}")
    if floors is not None:
        chosen = set(outcome.committee.members)
        for agent, need in floors.items():
            if len(election.approvals[agent] & chosen) < need:
                problems.append(f"{name}/{kind.value}: floor of {agent} violated")


def _fraction_of(weights, election, rng):
    best = weights.score_of(top_k(weights, election.k))
    return best * Fraction(rng.randint(0, 100), 100)


def check_election(election, rng, stats=None) -> list[str]:
    """Compare every solver with the oracle; ``election`` must carry label weights."""
    problems: list[str] = []
    stats = {} if stats is None else stats

    def record(outcome):
        if outcome.info.get("decode_checked"):
            stats["decode_checks"] = stats.get("decode_checks", 0) + 1

    for kind in list(UNWEIGHTED) + [IndexKind.W_SIMPSON]:
        oracle = brute_force(election, kind)
        got = max_diversity_greedy(election, kind)
        value = value_from_counts(kind, election.counts_of(election.indices_of(got)), election.k, election.weights)
        if not same_value(kind, value, oracle.diversity):
            problems.append(f"greedy/{kind.value}: {value.value} vs oracle {oracle.diversity.value}")

    av = av_weights(election)
    beta = _fraction_of(av, election, rng)
    for kind in (IndexKind.LEX_COUNT, IndexKind.RICHNESS):
        oracle = brute_force(election, kind, ScoreConstraint(av, beta))
        _check_outcome("exchange", kind, election, dscr_exchange_lc(election, av, beta, kind), oracle,
                       problems, beta=beta, weights=av)
    for kind in (IndexKind.SIMPSON, IndexKind.SHANNON):
        oracle = brute_force(election, kind, ScoreConstraint(av, beta))
        outcome = dscr_knapsack_max(election, av, beta, kind)
        record(outcome)
        _check_outcome("knapsack_max", kind, election, outcome, oracle, problems, beta=beta, weights=av)
    oracle = brute_force(election, IndexKind.W_SIMPSON, ScoreConstraint(av, beta))
    outcome = dscr_weighted_si(election, av, beta)
    record(outcome)
    _check_outcome("weighted_si", IndexKind.W_SIMPSON, election, outcome, oracle, problems, beta=beta, weights=av)

    sav = sav_weights(election)
    beta_s = _fraction_of(sav, election, rng)
    oracle = brute_force(election, IndexKind.SIMPSON, ScoreConstraint(sav, beta_s))
    if oracle.optimal:
        target = shifted_simpson(election.counts_of(oracle.info["indices"]), election.k)
        # the oracle value is reachable; one more is not
        hit = dscr_knapsack_decision(election, sav, beta_s, target, IndexKind.SIMPSON)
        _check_outcome("decision", IndexKind.SIMPSON, election, hit, oracle, problems, beta=beta_s, weights=sav)
        miss = dscr_knapsack_decision(election, sav, beta_s, target + 1, IndexKind.SIMPSON)
        if miss.optimal:
            problems.append("decision/si: threshold above the optimum reported feasible")
    else:
        if dscr_knapsack_decision(election, sav, beta_s, 0, IndexKind.SIMPSON).optimal:
            problems.append("decision/si: infeasible instance reported feasible")

    base = brute_force(election, IndexKind.SIMPSON, score="pav").committee
    floors = {a: max(0, len(election.approvals[a] & base.members) - 1) for a in election.agents}
    for kind in list(UNWEIGHTED) + [IndexKind.W_SIMPSON]:
        oracle = brute_force(election, kind, FloorConstraint(floors))
        _check_outcome("dsat", kind, election, dsat_exact(election, kind, floors), oracle, problems,
                       floors=floors)
    return problems
