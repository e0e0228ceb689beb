"""Diversity indices: richness, Simpson, Shannon and lexicographic counting.

Every index is evaluated from the per-label occurrence counts of a committee
and returned as a :class:`DiversityValue`, which is totally ordered within
its kind. Exact kinds (richness, Simpson, lexicographic counting) compare
without tolerance; Shannon values compare structurally first and fall back
to an absolute float tolerance.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import ConfigurationError
from .model import Committee, Election, distr_from_counts

SHANNON_TOL = 1e-9


def set_shannon_tolerance(tol: float) -> None:
    """Change the absolute tolerance for Shannon comparisons (process-wide)."""
    global SHANNON_TOL
    if not tol >= 0:
        raise ConfigurationError(f"tolerance must be nonnegative, got {tol!r}")
    SHANNON_TOL = float(tol)


class IndexKind(str, enum.Enum):
    RICHNESS = "ri"
    SIMPSON = "si"
    SHANNON = "sh"
    LEX_COUNT = "lc"
    # label-weighted variants
    W_RICHNESS = "wri"
    W_SIMPSON = "wsi"
    W_SHANNON = "wsh"
    W_LEX_COUNT = "wlc"

    @property
    def weighted(self) -> bool:
        return self.value.startswith("w")

    @property
    def base(self) -> IndexKind:
        return IndexKind(self.value[1:]) if self.weighted else self

    def as_weighted(self) -> IndexKind:
        return self if self.weighted else IndexKind("w" + self.value)

    @classmethod
    def parse(cls, text: str | IndexKind) -> IndexKind:
        if isinstance(text, IndexKind):
            return text
        aliases = {
            "richness": "ri", "simpson": "si", "shannon": "sh", "lexcount": "lc",
            "lex_count": "lc", "ri'": "wri", "si'": "wsi", "sh'": "wsh", "lc'": "wlc",
        }
        key = text.strip().lower()
        return cls(aliases.get(key, key))


UNWEIGHTED = (IndexKind.RICHNESS, IndexKind.SIMPSON, IndexKind.SHANNON, IndexKind.LEX_COUNT)
WEIGHTED = tuple(kind.as_weighted() for kind in UNWEIGHTED)


class Verdict(str, enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    MORE = "more"

    @classmethod
    def from_sign(cls, sign: int) -> Verdict:
        return cls.MORE if sign > 0 else cls.LESS if sign < 0 else cls.EQUAL

    def flipped(self) -> Verdict:
        return {Verdict.LESS: Verdict.MORE, Verdict.MORE: Verdict.LESS}.get(self, self)


@dataclass(frozen=True, eq=False)
class DiversityValue:
    """A diversity index value with a total order inside its kind.

    ``value`` is an ``int`` (richness), a ``Fraction`` (Simpson), a ``float``
    (Shannon) or the tuple ``(|sigma_1|, ..., |sigma_Z|)`` (lexicographic
    counting). ``structure`` identifies the occurrence profile the value was
    computed from and decides Shannon equality before any float comparison.
    """

    kind: IndexKind
    value: int | Fraction | float | tuple[int, ...]
    structure: tuple = ()
    base: int = 0
    fingerprint: float | None = None

    __hash__ = None  # tolerance-based equality is not hash-compatible

    def _cmp(self, other: DiversityValue) -> int:
        if not isinstance(other, DiversityValue):
            return NotImplemented
        if other.kind is not self.kind:
            raise TypeError(f"cannot compare {self.kind.value} with {other.kind.value}")
        if self.kind.base is IndexKind.SHANNON:
            if self.structure == other.structure:
                return 0
            diff = self.value - other.value
            if abs(diff) <= SHANNON_TOL:
                return 0
            return 1 if diff > 0 else -1
        return (self.value > other.value) - (self.value < other.value)

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def scalar(self) -> int | Fraction | float:
        """Numeric form; for lexicographic counting the big-integer sum."""
        if self.kind.base is IndexKind.LEX_COUNT:
            z = len(self.value)
            return sum(self.base ** (z - i) * s for i, s in enumerate(self.value))
        return self.value

    def __float__(self) -> float:
        return float(self.scalar())

    def __repr__(self) -> str:
        return f"DiversityValue({self.kind.value}, {self.value!r})"


def _lcm(values: Sequence[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _xlogx(n: int) -> float:
    return n * math.log(n) if n > 0 else 0.0


def value_from_counts(
    kind: IndexKind | str,
    counts: Sequence[int],
    k: int,
    weights: Sequence[int] | None = None,
) -> DiversityValue:
    """Evaluate an index on a label-occurrence vector of a size-k committee."""
    kind = IndexKind.parse(kind)
    m = len(counts)
    if kind.weighted:
        if weights is None:
            raise ConfigurationError(f"index {kind.value} needs label weights")
        return _weighted_value(kind, counts, k, weights)

    if kind is IndexKind.RICHNESS:
        return DiversityValue(kind, sum(1 for n in counts if n > 0))
    if kind is IndexKind.SIMPSON:
        return DiversityValue(kind, Fraction(-sum(n * n for n in counts), k * k))
    d = distr_from_counts(counts, k)
    if kind is IndexKind.SHANNON:
        # summing over the distr vector makes the float a function of distr alone
        h = -sum(cnt * (j / k) * math.log(j / k) for j, cnt in enumerate(d) if j > 0 and cnt)
        fp = sum(cnt * _xlogx(j) for j, cnt in enumerate(d) if cnt)
        return DiversityValue(kind, h + 0.0, structure=d, fingerprint=fp)
    if kind is IndexKind.LEX_COUNT:
        sigma = []
        at_least = m
        for i in range(1, k + 1):
            at_least -= d[i - 1]
            sigma.append(at_least)
        return DiversityValue(kind, tuple(sigma), base=min(m, k) + 1)
    raise ValueError(kind)


def _weighted_value(kind, counts, k, weights) -> DiversityValue:
    base = kind.base
    if base is IndexKind.RICHNESS:
        return DiversityValue(kind, sum(w for n, w in zip(counts, weights) if n > 0))
    if base is IndexKind.SIMPSON:
        return DiversityValue(kind, -sum(Fraction(n * n, w) for n, w in zip(counts, weights)) / (k * k))
    if base is IndexKind.SHANNON:
        h = -sum((n / k) * math.log(n / k) / w for n, w in zip(counts, weights) if n > 0)
        structure = tuple(sorted((n, w) for n, w in zip(counts, weights) if n > 0))
        return DiversityValue(kind, h + 0.0, structure=structure)
    if base is IndexKind.LEX_COUNT:
        c = _lcm(weights)
        z = c * k
        # label l is in sigma'_i iff c*n_l/w_l >= i, i.e. for i <= floor(c*n_l/w_l)
        reach = sorted((c * n) // w for n, w in zip(counts, weights))
        sigma = []
        pos = 0
        for i in range(1, z + 1):
            while pos < len(reach) and reach[pos] < i:
                pos += 1
            sigma.append(len(reach) - pos)
        return DiversityValue(kind, tuple(sigma), base=min(len(counts), k) + 1)
    raise ValueError(kind)


def index_value(kind: IndexKind | str, election: Election, committee: Committee) -> DiversityValue:
    kind = IndexKind.parse(kind)
    idx = election.indices_of(committee)
    if kind.weighted and election.weights is None:
        raise ConfigurationError(f"index {kind.value} needs label weights on the election")
    return value_from_counts(kind, election.counts_of(idx), election.k, election.weights)


def richness(election: Election, committee: Committee) -> DiversityValue:
    return index_value(IndexKind.RICHNESS, election, committee)


def simpson(election: Election, committee: Committee) -> DiversityValue:
    return index_value(IndexKind.SIMPSON, election, committee)


def shannon(election: Election, committee: Committee) -> DiversityValue:
    return index_value(IndexKind.SHANNON, election, committee)


def lex_count(election: Election, committee: Committee) -> DiversityValue:
    return index_value(IndexKind.LEX_COUNT, election, committee)


def weighted_index(kind: IndexKind | str, election: Election, committee: Committee) -> DiversityValue:
    """Label-weighted variant of ``kind`` (accepts either ``si`` or ``wsi``)."""
    return index_value(IndexKind.parse(kind).as_weighted(), election, committee)


def compare(kind: IndexKind | str, election: Election, committee_a: Committee, committee_b: Committee) -> Verdict:
    """Whether ``committee_a`` is less, equally or more diverse than ``committee_b``."""
    a = index_value(kind, election, committee_a)
    b = index_value(kind, election, committee_b)
    return Verdict.from_sign(a._cmp(b))


def compare_values(a: DiversityValue, b: DiversityValue) -> Verdict:
    return Verdict.from_sign(a._cmp(b))
