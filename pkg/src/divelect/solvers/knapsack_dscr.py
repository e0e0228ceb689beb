"""Score-constrained Simpson/Shannon optima through 0-1 knapsack encodings.

Both encodings write the index as a sum of per-occurrence terms
``D = sum_l sum_{i <= n_l} t(i)`` with ``t`` positive and strictly
decreasing, and rank the candidates of each label by weight (``pi``), so
that taking the first ``n_l`` candidates of a label adds exactly its share
of ``D``.

* maximization: item weight ``n*alpha + 1 - w(c)``, value ``t(pi(c)) + eta``;
  any subset of value at least ``k*eta`` is a committee meeting the bound.
* decision: item weight ``eta - t(pi(c))``, value ``w(c) + n*alpha + 1``;
  the capacity encodes the diversity threshold, the value the score bound.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from fractions import Fraction
from functools import reduce

from ..errors import ConfigurationError, InvariantViolation
from .. import indices as _indices
from ..indices import IndexKind, value_from_counts
from ..model import Election
from ..scoring import SeparableWeights, top_k
from .knapsack import KnapsackInstance, knapsack_dp
from .outcome import SolverOutcome, Status


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def label_ranks(election: Election, scaled: Sequence[int]) -> tuple[int, ...]:
    """1-based rank of each candidate within its label, by weight descending."""
    rank = [0] * election.n
    for members in election.label_members:
        for pos, c in enumerate(sorted(members, key=lambda c: (-scaled[c], c)), start=1):
            rank[c] = pos
    return tuple(rank)


def _usable(rank, k) -> list[int]:
    # a committee never needs a label's candidates beyond its k best
    return [c for c, r in enumerate(rank) if r <= k]


def simpson_terms(k: int) -> list[int]:
    """t(1..k) with sum over a label of 2k*n - n^2."""
    return [2 * k + 1 - 2 * i for i in range(1, k + 1)]


def shannon_terms(k: int) -> list[float]:
    """t(1..k) with sum over a label of n*(ln k + 2) - n ln n."""
    def xlogx(x):
        return x * math.log(x) if x > 0 else 0.0

    return [-xlogx(i) + xlogx(i - 1) + math.log(k) + 2 for i in range(1, k + 1)]


def weighted_simpson_terms(k: int, weights: Sequence[int]) -> tuple[int, list[list[int]]]:
    """Integer per-label terms ``L*(2k + (1-2i)/w_l)`` with ``L = lcm(w)``."""
    scale = _lcm(weights)
    return scale, [[2 * k * scale + scale * (1 - 2 * i) // w for i in range(1, k + 1)] for w in weights]


def shifted_simpson(counts: Sequence[int], k: int, weights: Sequence[int] | None = None) -> int:
    """The integer ``D`` the Simpson encodings work with for given counts."""
    if weights is None:
        return 2 * k * k - sum(n * n for n in counts)
    scale = _lcm(weights)
    return sum(scale * (2 * k * n) - scale * n * n // w for n, w in zip(counts, weights))


def shifted_threshold(value, k: int, weights: Sequence[int] | None = None) -> int:
    """Smallest integer ``D`` whose Simpson (or weighted Simpson) value is at least ``value``."""
    scale = 1 if weights is None else _lcm(weights)
    return math.ceil(scale * k * k * (2 + Fraction(value)))


def _decode_check(chosen, k, instance: KnapsackInstance, total, threshold):
    if len(chosen) != k:
        raise InvariantViolation(f"knapsack solution of value {total} has {len(chosen)} items, expected {k}")
    used = sum(instance.weights[i] for i in chosen)
    if used > instance.capacity:
        raise InvariantViolation(f"knapsack solution weight {used} exceeds capacity {instance.capacity}")
    if total < threshold:
        raise InvariantViolation("knapsack solution below the decoding threshold")


def _knapsack_max(
    election: Election,
    weights: SeparableWeights,
    beta,
    term: Callable[[int, int], object],
    top_term,
    kind: IndexKind,
) -> SolverOutcome:
    k, n = election.k, election.n
    w = weights.scaled
    alpha = weights.alpha
    bound = max(0, weights.scale_bound(beta))
    if bound > k * alpha:
        return SolverOutcome.infeasible(reason="beta exceeds k*alpha")

    rank = label_ranks(election, w)
    items = _usable(rank, k)
    eta = k * top_term + 1
    capacity = k * (n * alpha + 1) - bound
    instance = KnapsackInstance(
        tuple(n * alpha + 1 - w[c] for c in items),
        tuple(term(election.cand_label[c], rank[c]) + eta for c in items),
        capacity,
    )
    picked, total = knapsack_dp(instance)
    info = {"eta": eta, "capacity": capacity, "dp_value": total, "alpha": alpha, "scaled_beta": bound}
    if total < k * eta:
        return SolverOutcome.infeasible(**info)
    if __debug__:
        _decode_check(picked, k, instance, total, k * eta)
    info["decode_checked"] = __debug__
    chosen = tuple(sorted(items[i] for i in picked))
    counts = election.counts_of(chosen)
    score = weights.score_of(chosen)
    diversity = value_from_counts(kind, counts, k, election.weights)
    return SolverOutcome(
        Status.OPTIMAL, election.committee_of(chosen), diversity, score,
        info={"indices": chosen, **info},
    )


def _swap_repair(election, weights, bound, chosen, kind):
    """Hill-climb single swaps that raise Shannon beyond tolerance.

    The float DP should already be optimal; this guards against rounding
    in its value comparisons. Returns the (possibly) improved indices and
    the number of swaps applied.
    """
    w = weights.scaled
    chosen = list(chosen)
    repairs = 0
    improved = True
    while improved:
        improved = False
        score = sum(w[c] for c in chosen)
        current = value_from_counts(kind, election.counts_of(chosen), election.k)
        outside = [c for c in range(election.n) if c not in chosen]
        for pos, out in enumerate(chosen):
            for new in outside:
                if score - w[out] + w[new] < bound:
                    continue
                trial = chosen[:pos] + [new] + chosen[pos + 1:]
                value = value_from_counts(kind, election.counts_of(trial), election.k)
                if value.value > current.value + _indices.SHANNON_TOL:
                    chosen, improved, repairs = trial, True, repairs + 1
                    break
            if improved:
                break
    return tuple(sorted(chosen)), repairs


def dscr_knapsack_max(
    election: Election,
    weights: SeparableWeights,
    beta,
    index_kind: IndexKind | str = IndexKind.SIMPSON,
) -> SolverOutcome:
    """Simpson- or Shannon-maximal committee with score at least ``beta``."""
    kind = IndexKind.parse(index_kind)
    k = election.k
    if kind is IndexKind.SIMPSON:
        terms = simpson_terms(k)
    elif kind is IndexKind.SHANNON:
        terms = shannon_terms(k)
    else:
        raise ValueError(f"the knapsack maximization handles si or sh, not {kind.value}")
    outcome = _knapsack_max(election, weights, beta, lambda lab, i: terms[i - 1], terms[0], kind)
    if kind is IndexKind.SHANNON and outcome.optimal:
        bound = max(0, weights.scale_bound(beta))
        chosen, repairs = _swap_repair(election, weights, bound, outcome.info["indices"], kind)
        if repairs:
            counts = election.counts_of(chosen)
            return SolverOutcome(
                Status.OPTIMAL, election.committee_of(chosen),
                value_from_counts(kind, counts, k), weights.score_of(chosen),
                info={**outcome.info, "indices": chosen, "swap_repairs": repairs},
            )
        outcome.info["swap_repairs"] = 0
    return outcome


def dscr_weighted_si(election: Election, weights: SeparableWeights, beta) -> SolverOutcome:
    """Weighted-Simpson-maximal committee with score at least ``beta``."""
    if election.weights is None:
        raise ConfigurationError("weighted Simpson needs label weights")
    _, terms = weighted_simpson_terms(election.k, election.weights)
    top = max(t[0] for t in terms)
    return _knapsack_max(
        election, weights, beta, lambda lab, i: terms[lab][i - 1], top, IndexKind.W_SIMPSON
    )


def _decision_terms(election: Election, kind: IndexKind):
    k = election.k
    if kind is IndexKind.SIMPSON:
        terms = simpson_terms(k)
        return (lambda lab, i: terms[i - 1]), terms[0], None
    if kind is IndexKind.W_SIMPSON:
        if election.weights is None:
            raise ConfigurationError("weighted Simpson needs label weights")
        _, terms = weighted_simpson_terms(k, election.weights)
        return (lambda lab, i: terms[lab][i - 1]), max(t[0] for t in terms), election.weights
    raise ValueError(f"the knapsack decision handles si or wsi, not {kind.value}")


def dscr_knapsack_decision(
    election: Election,
    weights: SeparableWeights,
    beta,
    delta: int,
    index_kind: IndexKind | str = IndexKind.SIMPSON,
) -> SolverOutcome:
    """A committee with score at least ``beta`` and shifted Simpson at least ``delta``.

    ``delta`` is a threshold on the integer :func:`shifted_simpson` value;
    :func:`shifted_threshold` converts an index value into it.
    """
    kind = IndexKind.parse(index_kind)
    term, zeta, label_w = _decision_terms(election, kind)
    k, n = election.k, election.n
    w = weights.scaled
    bound = max(0, weights.scale_bound(beta))

    if delta > k * zeta:
        return SolverOutcome.infeasible(reason="delta exceeds k*zeta", zeta=zeta)
    if delta <= 0:
        chosen = top_k(weights, k)
        if weights.scaled_score(chosen) < bound:
            return SolverOutcome.infeasible(reason="score bound unreachable")
        return _decided(election, weights, chosen, kind, {"zeta": zeta})

    alpha = weights.alpha
    rank = label_ranks(election, w)
    items = _usable(rank, k)
    eta = k * zeta + zeta + 1
    capacity = k * eta - delta
    instance = KnapsackInstance(
        tuple(eta - term(election.cand_label[c], rank[c]) for c in items),
        tuple(w[c] + n * alpha + 1 for c in items),
        capacity,
    )
    picked, total = knapsack_dp(instance)
    target = bound + k * (n * alpha + 1)
    info = {"eta": eta, "zeta": zeta, "capacity": capacity, "dp_value": total, "threshold": target}
    if total < target:
        return SolverOutcome.infeasible(**info)
    if __debug__:
        _decode_check(picked, k, instance, total, target)
    chosen = tuple(sorted(items[i] for i in picked))
    if __debug__:
        if shifted_simpson(election.counts_of(chosen), k, label_w) < delta:
            raise InvariantViolation("decoded committee misses the diversity threshold")
    return _decided(election, weights, chosen, kind, info)


def _decided(election, weights, chosen, kind, info) -> SolverOutcome:
    counts = election.counts_of(chosen)
    return SolverOutcome(
        Status.OPTIMAL, election.committee_of(chosen),
        value_from_counts(kind, counts, election.k, election.weights),
        weights.score_of(chosen), info={"indices": tuple(chosen), **info},
    )


def dscr_decision_max(
    election: Election,
    weights: SeparableWeights,
    beta,
    index_kind: IndexKind | str = IndexKind.SIMPSON,
) -> SolverOutcome:
    """Maximize (weighted) Simpson by binary search over the decision threshold.

    This avoids the maximization encoding, whose capacity grows with the
    largest weight; it is the route for SAV-style scaled weights.
    """
    kind = IndexKind.parse(index_kind)
    _, zeta, _ = _decision_terms(election, kind)
    best = dscr_knapsack_decision(election, weights, beta, 0, kind)
    if not best.optimal:
        return best
    label_w = election.weights if kind is IndexKind.W_SIMPSON else None
    lo = shifted_simpson(election.counts_of(best.info["indices"]), election.k, label_w)
    hi = election.k * zeta
    probes = 1
    # invariant: some feasible committee reaches lo; none reaches hi + 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        outcome = dscr_knapsack_decision(election, weights, beta, mid, kind)
        probes += 1
        if outcome.optimal:
            best = outcome
            lo = shifted_simpson(election.counts_of(outcome.info["indices"]), election.k, label_w)
        else:
            hi = mid - 1
    best.info["probes"] = probes
    best.info["shifted_value"] = lo
    return best
