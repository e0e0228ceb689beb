"""Reduced distribution vectors and explainable diversity comparisons.

Two committees are compared on the positions where their distr vectors
differ. Each ``explain_*`` function decides the comparison from as few of
those positions as its index allows; the decision kernels only ever receive
the entries they are allowed to look at.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation
from . import indices as _indices
from .indices import IndexKind, Verdict
from .model import Committee, Election, distr


@dataclass(frozen=True)
class ComparisonTriple:
    """``rdistr_a``/``rdistr_b`` are the distr entries of the two committees at
    the 1-based positions ``rho``. ``k`` is carried along for Shannon scaling."""

    rdistr_a: tuple[int, ...]
    rdistr_b: tuple[int, ...]
    rho: tuple[int, ...]
    k: int | None = None

    @property
    def r(self) -> int:
        return len(self.rho)

    def swapped(self) -> ComparisonTriple:
        return ComparisonTriple(self.rdistr_b, self.rdistr_a, self.rho, self.k)


def reduce_distr(distr_a: Sequence[int], distr_b: Sequence[int]) -> ComparisonTriple:
    if len(distr_a) != len(distr_b):
        raise InvariantViolation("distr vectors of different dimension")
    rho = tuple(i + 1 for i, (x, y) in enumerate(zip(distr_a, distr_b)) if x != y)
    return ComparisonTriple(
        tuple(distr_a[i - 1] for i in rho),
        tuple(distr_b[i - 1] for i in rho),
        rho,
        len(distr_a) - 1,
    )


def reduce(election: Election, committee_a: Committee, committee_b: Committee) -> ComparisonTriple:
    return reduce_distr(distr(election, committee_a).entries, distr(election, committee_b).entries)


def validate(triple: ComparisonTriple) -> None:
    a, b, rho = triple.rdistr_a, triple.rdistr_b, triple.rho
    if not len(a) == len(b) == len(rho):
        raise InvariantViolation("triple vectors differ in dimension")
    if any(p <= 0 for p in rho) or any(x >= y for x, y in zip(rho, rho[1:])):
        raise InvariantViolation("rho must be strictly increasing positive positions")
    if triple.k is not None and rho and rho[-1] > triple.k + 1:
        raise InvariantViolation("rho position beyond k+1")
    if any(x == y for x, y in zip(a, b)):
        raise InvariantViolation("rdistr entries must differ at every position")
    if any(x < 0 for x in a + b):
        raise InvariantViolation("negative rdistr entry")
    if sum(a) != sum(b):
        raise InvariantViolation("rdistr vectors count different numbers of labels")
    if sum(p * x for p, x in zip(rho, a)) != sum(p * y for p, y in zip(rho, b)):
        raise InvariantViolation("rdistr vectors describe committees of different size")


def _lc_kernel(a1: int, b1: int) -> Verdict:
    return Verdict.MORE if a1 < b1 else Verdict.LESS


def _ri_kernel(rho1: int, a1: int, b1: int) -> Verdict:
    if rho1 > 1:
        return Verdict.EQUAL
    return Verdict.MORE if a1 < b1 else Verdict.LESS


def explain_lc(triple: ComparisonTriple) -> Verdict:
    """Uses index 1 of the rdistr vectors only."""
    validate(triple)
    if triple.r == 0:
        return Verdict.EQUAL
    return _lc_kernel(triple.rdistr_a[0], triple.rdistr_b[0])


def explain_ri(triple: ComparisonTriple) -> Verdict:
    """Uses index 1 of rho and index 1 of the rdistr vectors."""
    validate(triple)
    if triple.r == 0:
        return Verdict.EQUAL
    return _ri_kernel(triple.rho[0], triple.rdistr_a[0], triple.rdistr_b[0])


def reconstruct_last(
    head_a: Sequence[int], head_b: Sequence[int], head_rho: Sequence[int]
) -> tuple[int, Fraction]:
    """Recover the withheld last position from the first r-1 entries.

    Returns ``(x, y)`` with ``x = sum(b - a)`` over the head (so the last
    entries satisfy ``a_r - b_r = x``) and ``y`` the reconstructed ``rho_r``.
    """
    x = sum(bi - ai for ai, bi in zip(head_a, head_b))
    if x == 0:
        raise InvariantViolation("cannot reconstruct last position: head sums agree")
    y = Fraction(sum(p * (bi - ai) for p, ai, bi in zip(head_rho, head_a, head_b)), x)
    return x, y


def _si_kernel(head_a, head_b, head_rho) -> Verdict:
    # k^2 * (Si(b) - Si(a)); the positive factor k^2 does not change the sign
    x, y = reconstruct_last(head_a, head_b, head_rho)
    h = -sum((bi - ai) * (p - 1) ** 2 for p, ai, bi in zip(head_rho, head_a, head_b))
    h += x * (y - 1) ** 2
    return Verdict.from_sign(-((h > 0) - (h < 0)))


def _sh_kernel(head_a, head_b, head_rho, k: int) -> Verdict:
    x, y = reconstruct_last(head_a, head_b, head_rho)

    def plogp(occ) -> float:
        occ = float(occ)
        return (occ / k) * math.log(occ / k) if occ > 0 else 0.0

    h = -sum((bi - ai) * plogp(p - 1) for p, ai, bi in zip(head_rho, head_a, head_b))
    h += x * plogp(y - 1)
    if abs(h) <= _indices.SHANNON_TOL:
        return Verdict.EQUAL
    return Verdict.LESS if h > 0 else Verdict.MORE


def explain_si(triple: ComparisonTriple) -> Verdict:
    """Uses all but the last index of rho and of the rdistr vectors."""
    validate(triple)
    if triple.r == 0:
        return Verdict.EQUAL
    return _si_kernel(triple.rdistr_a[:-1], triple.rdistr_b[:-1], triple.rho[:-1])


def explain_sh(triple: ComparisonTriple) -> Verdict:
    """Same reads as :func:`explain_si`, float arithmetic with tolerance."""
    validate(triple)
    if triple.r == 0:
        return Verdict.EQUAL
    k = triple.k if triple.k is not None else 1
    return _sh_kernel(triple.rdistr_a[:-1], triple.rdistr_b[:-1], triple.rho[:-1], k)


EXPLAINERS = {
    IndexKind.LEX_COUNT: explain_lc,
    IndexKind.RICHNESS: explain_ri,
    IndexKind.SIMPSON: explain_si,
    IndexKind.SHANNON: explain_sh,
}


def explain(kind: IndexKind | str, triple: ComparisonTriple) -> Verdict:
    kind = IndexKind.parse(kind)
    if kind not in EXPLAINERS:
        raise ValueError(f"no explainable comparator for {kind.value}")
    return EXPLAINERS[kind](triple)


def consulted(kind: IndexKind | str, r: int) -> dict[str, list[int]]:
    """1-based positions each comparator reads for a triple of dimension r."""
    kind = IndexKind.parse(kind)
    if r == 0:
        return {"rho": [], "rdistr": []}
    if kind is IndexKind.LEX_COUNT:
        return {"rho": [], "rdistr": [1]}
    if kind is IndexKind.RICHNESS:
        return {"rho": [1], "rdistr": [1]}
    head = list(range(1, r))
    return {"rho": head, "rdistr": list(head)}
