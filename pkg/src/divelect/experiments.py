"""Experiment harness: how much diversity do standard and relaxed rules reach?

For every instance, committee size and index the harness computes the
unconstrained optimum and, for each baseline rule R,

* ``R``: the rule's (lexicographically first) winning committee,
* ``R_best`` / ``R_worst``: the most / least diverse winning committee,
* ``R_sat-1``: the most diverse committee in which no agent loses more than
  one approved member relative to R's committee,
* ``R_scr<p>``: the most diverse committee keeping p% of R's best score
  (separable R only),

and reports each as a proportion of the optimum.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
import statistics
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from . import indices as _indices
from .errors import DivelectError, SizeLimitError
from .indices import DiversityValue, IndexKind, value_from_counts
from .ingest import FilterVerdict, LabelMode, derive_labels, filter_instance, read_pabulib
from .model import Committee, Election
from .scoring import (
    EXACT_SCORE_LIMIT,
    ScoreKind,
    SeparableWeights,
    all_winning_committees,
    max_score_exact,
    score_function,
    separable_weights,
    top_k,
)
from .solvers import (
    BRUTE_FORCE_CAP,
    DSAT_LIMIT,
    ScoreConstraint,
    SolverOutcome,
    brute_force,
    dscr_decision_max,
    dscr_exchange_lc,
    dscr_knapsack_max,
    dscr_weighted_si,
    dsat_exact,
    max_diversity_greedy,
)

log = logging.getLogger(__name__)

REPORT_HEADER = ("instance", "k", "index", "rule", "proportion", "achieved_optimal", "score", "beta")
SI_NORMALIZATION = "simpson proportions are (Si + 1) / (Si_opt + 1)"


@dataclass(frozen=True)
class ReportRow:
    instance: str
    k: int
    index: IndexKind
    rule: str
    proportion: Fraction | float
    achieved_optimal: bool
    score: Fraction | None = None
    beta: Fraction | None = None

    def cells(self) -> list[str]:
        return [
            self.instance,
            str(self.k),
            self.index.value,
            self.rule,
            f"{float(self.proportion):.6f}",
            "true" if self.achieved_optimal else "false",
            format_number(self.score),
            format_number(self.beta),
        ]


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


# ---------------------------------------------------------------- rules


def optimum(election: Election, index_kind: IndexKind | str, *, cap: int = BRUTE_FORCE_CAP) -> DiversityValue:
    """Unconstrained maximal diversity."""
    kind = IndexKind.parse(index_kind)
    if not kind.weighted or kind is IndexKind.W_SIMPSON:
        committee = max_diversity_greedy(election, kind)
        return _value(election, kind, election.indices_of(committee))
    return brute_force(election, kind, cap=cap).diversity


def _value(election: Election, kind: IndexKind, idx) -> DiversityValue:
    return value_from_counts(kind, election.counts_of(idx), election.k, election.weights)


def scr_beta(weights: SeparableWeights, k: int, p) -> Fraction:
    """``ceil(p/100 * max score)`` on the grid of representable scores."""
    p = Fraction(p)
    if not 0 < p <= 100:
        raise ValueError(f"p must lie in (0, 100], got {p}")
    best = weights.scaled_score(top_k(weights, k))
    return Fraction(math.ceil(p / 100 * best), weights.scale)


def dscr(
    election: Election, index_kind: IndexKind | str, weights: SeparableWeights, beta, *, cap: int = BRUTE_FORCE_CAP
) -> SolverOutcome:
    """Route a score-constrained problem to the matching exact solver.

    Integer-valued weights (AV, or SAV when all ballots have one size) use the
    maximization knapsack; rescaled SAV weights use the decision knapsack for
    Simpson and exhaustive search for Shannon.
    """
    kind = IndexKind.parse(index_kind)
    integral = weights.scale == 1
    if kind in (IndexKind.LEX_COUNT, IndexKind.RICHNESS):
        return dscr_exchange_lc(election, weights, beta, kind)
    if kind is IndexKind.SIMPSON:
        return dscr_knapsack_max(election, weights, beta, kind) if integral else dscr_decision_max(election, weights, beta, kind)
    if kind is IndexKind.SHANNON and integral:
        return dscr_knapsack_max(election, weights, beta, kind)
    if kind is IndexKind.W_SIMPSON:
        return dscr_weighted_si(election, weights, beta) if integral else dscr_decision_max(election, weights, beta, kind)
    return brute_force(election, kind, ScoreConstraint(weights, beta), cap=cap)


def rule_scr_p(
    election: Election, index_kind: IndexKind | str, weights: SeparableWeights, p, *, cap: int = BRUTE_FORCE_CAP
) -> SolverOutcome:
    beta = scr_beta(weights, election.k, p)
    outcome = dscr(election, index_kind, weights, beta, cap=cap)
    outcome.info["beta"] = beta
    return outcome


def sat_minus1_floors(election: Election, baseline: Committee) -> dict[str, int]:
    chosen = baseline.members
    return {a: max(0, len(election.approvals[a] & chosen) - 1) for a in election.agents}


def rule_sat_minus1(
    election: Election, index_kind: IndexKind | str, baseline: Committee, *, limit: int = DSAT_LIMIT
) -> SolverOutcome:
    election.indices_of(baseline)
    return dsat_exact(election, index_kind, sat_minus1_floors(election, baseline), limit=limit)


def all_winning_tiebreak(
    election: Election,
    score_kind: ScoreKind | str,
    index_kind: IndexKind | str,
    *,
    limit: int = EXACT_SCORE_LIMIT,
    cap: int = BRUTE_FORCE_CAP,
) -> tuple[DiversityValue, DiversityValue]:
    """(most, least) diverse value among all score-maximal committees."""
    kind = IndexKind.parse(index_kind)
    winners = _winners(election, ScoreKind.parse(score_kind), limit=limit, cap=cap)
    values = [_value(election, kind, w) for w in winners]
    best = worst = values[0]
    for v in values[1:]:
        if v > best:
            best = v
        if v < worst:
            worst = v
    return best, worst


def _winners(election: Election, kind: ScoreKind, *, limit: int, cap: int) -> list[tuple[int, ...]]:
    if kind.separable:
        weights = separable_weights(election, kind)
        order = sorted(weights.scaled, reverse=True)
        threshold = order[election.k - 1]
        tied = sum(1 for w in weights.scaled if w == threshold)
        need = election.k - sum(1 for w in weights.scaled if w > threshold)
        if math.comb(tied, need) > cap:
            raise SizeLimitError(f"{math.comb(tied, need)} winning committees exceed the cap {cap}")
    return all_winning_committees(election, kind, limit=limit)


def proportion(value: DiversityValue, best: DiversityValue) -> Fraction | float:
    """Share of the optimal diversity; 1 when the optimum is 0."""
    base = value.kind.base
    if base is IndexKind.SIMPSON:
        num, den = value.value + 1, best.value + 1
    elif base is IndexKind.LEX_COUNT:
        num, den = Fraction(value.scalar()), Fraction(best.scalar())
    elif base is IndexKind.SHANNON:
        if value == best:
            return 1.0
        num, den = float(value.value), float(best.value)
        return 1.0 if den == 0 else num / den
    else:
        num, den = Fraction(value.value), Fraction(best.value)
    if den == 0:
        return Fraction(1)
    return Fraction(num) / Fraction(den)


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class SuiteConfig:
    ks: tuple[int, ...] = (10,)
    indices: tuple[IndexKind, ...] = _indices.UNWEIGHTED
    rules: tuple[ScoreKind, ...] = (ScoreKind.AV, ScoreKind.SAV, ScoreKind.CC, ScoreKind.PAV)
    ps: tuple[int, ...] = (100, 90, 80, 70, 60, 50)
    modes: tuple[LabelMode, ...] = (LabelMode.CATEGORIES, LabelMode.TARGETS, LabelMode.UNION)
    seed: int = 0
    sample: int = 0
    workers: int = 1
    dsat_limit: int = DSAT_LIMIT
    score_limit: int = EXACT_SCORE_LIMIT
    brute_cap: int = BRUTE_FORCE_CAP
    tolerance: float = _indices.SHANNON_TOL


_LIST_PARSERS = {
    "ks": int,
    "indices": IndexKind.parse,
    "rules": ScoreKind.parse,
    "ps": int,
    "modes": LabelMode,
}
_ALIASES = {"k": "ks", "p": "ps", "index": "indices", "rule": "rules", "mode": "modes"}


def parse_config(text: str, base: SuiteConfig | None = None) -> SuiteConfig:
    """Read ``key = value`` lines; lists are comma-separated, ``#`` comments."""
    known = {f.name: f for f in fields(SuiteConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _LIST_PARSERS:
                values[key] = tuple(_LIST_PARSERS[key](tok.strip()) for tok in raw.split(",") if tok.strip())
            elif key == "tolerance":
                values[key] = float(raw)
            else:
                values[key] = int(float(raw)) if key == "brute_cap" else int(raw)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from None
    cfg = base or SuiteConfig()
    return SuiteConfig(**{**cfg.__dict__, **values})


def load_config(path: str | Path) -> SuiteConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- suite


@dataclass
class _Task:
    instance: str
    election: Election
    config: SuiteConfig


@dataclass
class InstanceResult:
    instance: str
    rows: list[ReportRow] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    filtered: dict[int, str] = field(default_factory=dict)


def evaluate_instance(instance: str, election: Election, config: SuiteConfig) -> InstanceResult:
    """All report rows for one instance; cell-level failures are recorded, not raised."""
    _indices.set_shannon_tolerance(config.tolerance)
    result = InstanceResult(instance)
    for k in config.ks:
        verdict = filter_instance(election, k)
        if verdict is not FilterVerdict.KEEP:
            result.filtered[k] = verdict.value
            continue
        ek = election.with_k(k)
        baselines = {}
        for rule in config.rules:
            try:
                committee, score = max_score_exact(ek, rule, limit=config.score_limit)
                baselines[rule] = (committee, score)
            except DivelectError as exc:
                result.errors.append(f"{instance} k={k} {rule.value}: {exc}")
        for kind in config.indices:
            try:
                best = optimum(ek, kind, cap=config.brute_cap)
            except DivelectError as exc:
                result.errors.append(f"{instance} k={k} {kind.value} optimum: {exc}")
                continue
            for rule in config.rules:
                if rule not in baselines:
                    continue
                result.rows.extend(_rule_rows(instance, ek, kind, rule, baselines[rule], best, config, result.errors))
    return result


def _rule_rows(instance, election, kind, rule, baseline, best, config, errors) -> list[ReportRow]:
    committee, score = baseline
    tag = rule.value.upper()
    score_of = score_function(election, rule)
    rows = []

    def row(name, value, s, beta=None):
        rows.append(ReportRow(instance, election.k, kind, name, proportion(value, best), value == best, s, beta))

    def attempt(name, fn):
        try:
            fn()
        except DivelectError as exc:
            errors.append(f"{instance} k={election.k} {kind.value} {name}: {exc}")

    row(tag, _value(election, kind, election.indices_of(committee)), score)

    def tiebreak():
        hi, lo = all_winning_tiebreak(election, rule, kind, limit=config.score_limit, cap=config.brute_cap)
        row(f"{tag}_best", hi, score)
        row(f"{tag}_worst", lo, score)

    attempt(f"{tag}_best", tiebreak)

    def sat():
        out = rule_sat_minus1(election, kind, committee, limit=config.dsat_limit)
        if not out.optimal:  # the baseline itself is feasible
            raise AssertionError("floor relaxation of a feasible committee reported infeasible")
        row(f"{tag}_sat-1", out.diversity, score_of(out.info["indices"]))

    attempt(f"{tag}_sat-1", sat)

    if rule.separable:
        weights = separable_weights(election, rule)
        for p in config.ps:
            def scr(p=p):
                out = rule_scr_p(election, kind, weights, p, cap=config.brute_cap)
                if not out.optimal:
                    raise AssertionError("score relaxation below the maximum reported infeasible")
                row(f"{tag}_scr{p}", out.diversity, out.score, out.info["beta"])

            attempt(f"{tag}_scr{p}", scr)
    return rows


def _run_task(task: _Task) -> InstanceResult:
    return evaluate_instance(task.instance, task.election, task.config)


def corpus_tasks(corpus: str | Path, config: SuiteConfig) -> tuple[list[_Task], list[str]]:
    """One task per (file, label mode); files are read in name order."""
    paths = sorted(Path(corpus).glob("*.pb"))
    if config.sample and config.sample < len(paths):
        paths = sorted(random.Random(config.seed).sample(paths, config.sample))
    tasks, errors = [], []
    for path in paths:
        try:
            raw = read_pabulib(path)
        except (DivelectError, OSError, UnicodeDecodeError) as exc:
            errors.append(f"{path.name}: {exc}")
            continue
        for mode in config.modes:
            instance = f"{path.stem}/{mode.value}"
            try:
                tasks.append(_Task(instance, derive_labels(raw, mode, 1), config))
            except DivelectError as exc:
                errors.append(f"{instance}: {exc}")
    return tasks, errors


@dataclass
class SuiteResult:
    rows: list[ReportRow]
    errors: list[str]
    filtered: dict[str, dict[int, str]]
    config: SuiteConfig

    def report_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in self.rows:
            writer.writerow(r.cells())
        return out.getvalue()

    def cells(self) -> list[dict]:
        groups: dict[tuple, list[ReportRow]] = {}
        for r in self.rows:
            groups.setdefault((r.k, r.index.value, r.rule), []).append(r)
        out = []
        for (k, index, rule), rows in groups.items():
            props = [float(r.proportion) for r in rows]
            out.append({
                "k": k,
                "index": index,
                "rule": rule,
                "instances": len(rows),
                "mean": round(statistics.fmean(props), 6),
                "median": round(statistics.median(props), 6),
                "achieved_rate": round(sum(r.achieved_optimal for r in rows) / len(rows), 6),
            })
        return out

    def summary(self) -> dict:
        return {
            "rows": len(self.rows),
            "instances": len({r.instance for r in self.rows}),
            "errors": len(self.errors),
            "error_messages": list(self.errors),
            "filtered": {name: {str(k): v for k, v in ks.items()} for name, ks in sorted(self.filtered.items())},
            "normalization": SI_NORMALIZATION,
            "cells": self.cells(),
        }

    def table_csv(self, metric: str) -> str:
        """Rules as rows, (index, k) as columns, percentages with 2 decimals.

        ``metric`` is ``mean`` (average share of the optimum) or
        ``achieved_rate`` (share of instances reaching the optimum).
        """
        cells = {(c["rule"], c["index"], c["k"]): c[metric] for c in self.cells()}
        rules = list(dict.fromkeys(c["rule"] for c in self.cells()))
        columns = [(kind.value, k) for kind in self.config.indices for k in self.config.ks]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["rule"] + [f"{index}_k{k}" for index, k in columns])
        for rule in rules:
            line = [rule]
            for index, k in columns:
                v = cells.get((rule, index, k))
                line.append("" if v is None else f"{100 * v:.2f}")
            writer.writerow(line)
        return out.getvalue()

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = {
            "report": (out_dir / "report.csv", self.report_csv()),
            "summary": (out_dir / "summary.json", json.dumps(self.summary(), indent=2) + "\n"),
            "table1": (out_dir / "table1.csv", self.table_csv("mean")),
            "table2": (out_dir / "table2.csv", self.table_csv("achieved_rate")),
        }
        for path, text in files.values():
            path.write_text(text, encoding="utf-8")
        return {name: path for name, (path, _) in files.items()}


def run_tasks(tasks: Sequence[_Task], workers: int = 1) -> list[InstanceResult]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    return sorted(results, key=lambda r: r.instance)


def _collect(tasks: Sequence[_Task], config: SuiteConfig, errors: list[str], workers: int) -> SuiteResult:
    rows: list[ReportRow] = []
    filtered = {}
    for res in run_tasks(tasks, workers):
        rows.extend(res.rows)
        errors.extend(res.errors)
        if res.filtered:
            filtered[res.instance] = res.filtered
    for message in errors:
        log.warning("skipped: %s", message)
    return SuiteResult(rows, errors, filtered, config)


def run_suite(
    corpus: str | Path,
    config: SuiteConfig | None = None,
    *,
    out_dir: str | Path | None = None,
    workers: int | None = None,
) -> SuiteResult:
    """Run every configured cell on a directory of ``.pb`` files.

    The report is sorted by instance id, so it does not depend on the number
    of worker processes.
    """
    config = config or SuiteConfig()
    tasks, errors = corpus_tasks(corpus, config)
    suite = _collect(tasks, config, errors, config.workers if workers is None else workers)
    if out_dir is not None:
        suite.write(out_dir)
    return suite


def elections_suite(named: Iterable[tuple[str, Election]], config: SuiteConfig | None = None) -> SuiteResult:
    """Like :func:`run_suite` for elections already in memory."""
    config = config or SuiteConfig()
    return _collect([_Task(name, e, config) for name, e in named], config, [], config.workers)
