"""Command-line front end.

Exit codes: 0 success, 1 infeasible, 2 usage or input error, 3 size or
resource limit exceeded. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import experiments, indices
from .errors import DivelectError, ResourceLimitError, SizeLimitError
from .explain import consulted, explain, reduce
from .indices import UNWEIGHTED, WEIGHTED, DiversityValue, IndexKind, index_value
from .ingest import (
    FilterVerdict,
    LabelMode,
    derive_labels,
    election_to_json,
    filter_instance,
    load_election,
    read_pabulib,
)
from .model import Committee, Election, distr
from .scoring import EXACT_SCORE_LIMIT, ScoreKind, max_score_exact, separable_weights
from .solvers import (
    BRUTE_FORCE_CAP,
    DSAT_LIMIT,
    SolverOutcome,
    Status,
    brute_force,
    dscr_knapsack_decision,
    dsat_exact,
    max_diversity_greedy,
    shifted_threshold,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def format_number(x) -> str:
    return experiments.format_number(x)


def value_doc(v: DiversityValue) -> dict:
    doc = {"index": v.kind.value, "value": format_number(v.scalar())}
    if v.kind.base is IndexKind.LEX_COUNT:
        doc["sigma"] = list(v.value)
    return doc


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_committee(text: str) -> Committee:
    return Committee.of(tok.strip() for tok in text.split(",") if tok.strip())


def read_label_weights(path: str) -> dict[str, int]:
    weights = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip() in ("", "label"):
                continue
            if len(row) != 2:
                raise UsageError(f"{path}: expected label,weight rows")
            try:
                weights[row[0].strip()] = int(row[1])
            except ValueError:
                raise UsageError(f"{path}: weight {row[1]!r} is not an integer") from None
    return weights


def read_floors(path: str) -> dict[str, int]:
    floors = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip() in ("", "agent"):
                continue
            if len(row) != 2:
                raise UsageError(f"{path}: expected agent,floor rows")
            try:
                floors[row[0].strip()] = int(row[1])
            except ValueError:
                raise UsageError(f"{path}: floor {row[1]!r} is not an integer") from None
    return floors


# ---------------------------------------------------------------- output


def emit(doc: dict, fmt: str, text_lines: list[str], csv_rows: list[list[str]] | None = None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        for row in csv_rows or []:
            writer.writerow(row)
        sys.stdout.write(out.getvalue())
    else:
        sys.stdout.write("".join(line + "\n" for line in text_lines))


def outcome_doc(election: Election, outcome: SolverOutcome, extra: dict | None = None) -> dict:
    doc = {"status": outcome.status.value}
    if outcome.optimal:
        doc["committee"] = sorted(outcome.committee.members, key=election.cand_index.__getitem__)
        doc["diversity"] = value_doc(outcome.diversity)
        doc["distr"] = list(distr(election, outcome.committee).entries)
        if outcome.score is not None:
            doc["score"] = format_number(outcome.score)
    doc.update(extra or {})
    return doc


def emit_outcome(args, election: Election, outcome: SolverOutcome, extra: dict | None = None) -> int:
    doc = outcome_doc(election, outcome, extra)
    lines = [f"status={doc['status']}"]
    rows = [["field", "value"], ["status", doc["status"]]]
    for key in ("committee", "diversity", "distr", "score", "beta", "delta"):
        if key not in doc:
            continue
        value = doc[key]
        if key == "committee":
            value = ",".join(value)
        elif key == "diversity":
            value = f"{value['index']}={value['value']}"
        elif key == "distr":
            value = "(" + ",".join(map(str, value)) + ")"
        lines.append(f"{key}={value}")
        rows.append([key, str(value)])
    emit(doc, args.format, lines, rows)
    return EXIT_OK if outcome.optimal else EXIT_INFEASIBLE


# ---------------------------------------------------------------- commands


def load(args) -> Election:
    election = load_election(args.election, k=args.k, mode=args.mode, sidecar=args.sidecar)
    if getattr(args, "label_weights", None):
        election = election.with_label_weights(read_label_weights(args.label_weights))
    return election


def _kinds(election: Election, requested: str | None) -> list[IndexKind]:
    if requested:
        return [IndexKind.parse(requested)]
    return list(UNWEIGHTED) + (list(WEIGHTED) if election.weights is not None else [])


def cmd_index(args) -> int:
    election = load(args)
    committee = parse_committee(args.committee)
    values = [index_value(kind, election, committee) for kind in _kinds(election, args.index)]
    d = distr(election, committee)
    doc = {
        "committee": sorted(committee.members, key=election.cand_index.__getitem__),
        "k": election.k,
        "distr": list(d.entries),
        "indices": [value_doc(v) for v in values],
    }
    lines = [f"distr=({','.join(map(str, d.entries))})"] + [f"{v.kind.value}={format_number(v.scalar())}" for v in values]
    rows = [["index", "value"]] + [[v.kind.value, format_number(v.scalar())] for v in values]
    emit(doc, args.format, lines, rows)
    return EXIT_OK


def _tuple(xs) -> str:
    return "(" + ",".join(map(str, xs)) + ")"


def cmd_compare(args) -> int:
    election = load(args)
    a, b = parse_committee(args.committee), parse_committee(args.other)
    triple = reduce(election, a, b)
    kinds = [IndexKind.parse(args.index)] if args.index else list(UNWEIGHTED)
    verdicts = []
    for kind in kinds:
        verdict = explain(kind, triple)
        reads = consulted(kind, triple.r)
        verdicts.append({"index": kind.value, "verdict": verdict.value.capitalize(), "consulted": reads})
    doc = {
        "rho": list(triple.rho),
        "rdistr_a": list(triple.rdistr_a),
        "rdistr_b": list(triple.rdistr_b),
        "verdicts": verdicts,
    }
    lines = [f"rho={_tuple(triple.rho)}", f"rdistr_a={_tuple(triple.rdistr_a)}", f"rdistr_b={_tuple(triple.rdistr_b)}"]
    for v in verdicts:
        reads = v["consulted"]
        lines.append(
            f"{v['index']}: verdict={v['verdict']} (reads rho{_tuple(reads['rho'])} rdistr{_tuple(reads['rdistr'])})"
        )
    if len(verdicts) == 1:
        lines.append(f"verdict {verdicts[0]['verdict']}")
    rows = [["index", "verdict"]] + [[v["index"], v["verdict"]] for v in verdicts]
    emit(doc, args.format, lines, rows)
    return EXIT_OK


def cmd_optimal(args) -> int:
    election = load(args)
    kind = IndexKind.parse(args.index)
    if kind.weighted and kind is not IndexKind.W_SIMPSON:
        outcome = brute_force(election, kind, cap=args.brute_cap)
    else:
        committee = max_diversity_greedy(election, kind)
        outcome = SolverOutcome(Status.OPTIMAL, committee, index_value(kind, election, committee))
    return emit_outcome(args, election, outcome)


def cmd_solve_dscr(args) -> int:
    election = load(args)
    kind = IndexKind.parse(args.index)
    score = ScoreKind.parse(args.score)
    if not score.separable:
        raise UsageError("solve-dscr needs a separable score (av or sav)")
    weights = separable_weights(election, score)
    if (args.p is None) == (args.beta is None):
        raise UsageError("give exactly one of --p and --beta")
    if args.p is not None:
        beta = experiments.scr_beta(weights, election.k, parse_rational(args.p))
    else:
        beta = parse_rational(args.beta)
    extra = {"beta": format_number(beta)}
    if args.delta is not None:
        if kind not in (IndexKind.SIMPSON, IndexKind.W_SIMPSON):
            raise UsageError("--delta is supported for si and wsi")
        label_w = election.weights if kind is IndexKind.W_SIMPSON else None
        delta = parse_rational(args.delta)
        threshold = shifted_threshold(delta, election.k, label_w)
        outcome = dscr_knapsack_decision(election, weights, beta, threshold, kind)
        extra["delta"] = format_number(delta)
    else:
        outcome = experiments.dscr(election, kind, weights, beta, cap=args.brute_cap)
    return emit_outcome(args, election, outcome, extra)


def cmd_solve_dsat(args) -> int:
    election = load(args)
    kind = IndexKind.parse(args.index)
    if (args.floors is None) == (args.from_baseline is None):
        raise UsageError("give exactly one of --floors and --from-baseline")
    if args.floors is not None:
        floors = read_floors(args.floors)
    else:
        baseline, _ = max_score_exact(election, args.from_baseline, limit=args.score_limit)
        floors = experiments.sat_minus1_floors(election, baseline)
    outcome = dsat_exact(election, kind, floors, limit=args.dsat_limit)
    return emit_outcome(args, election, outcome)


def cmd_ingest(args) -> int:
    raw = read_pabulib(args.input)
    election = derive_labels(raw, args.mode, 1)
    verdict = filter_instance(election, args.k)
    doc = {"input": Path(args.input).name, "mode": LabelMode(args.mode).value, "k": args.k,
           "verdict": verdict.value, "candidates": election.n, "labels": election.m,
           "agents": len(election.agents)}
    if verdict is FilterVerdict.KEEP:
        election = election.with_k(args.k)
        doc["election"] = election_to_json(election)
        if args.out:
            Path(args.out).write_text(json.dumps(doc["election"], indent=2) + "\n", encoding="utf-8")
    print(f"{doc['input']} [{doc['mode']}]: {verdict.value}", file=sys.stderr)
    lines = [f"verdict={verdict.value}", f"candidates={election.n}", f"labels={election.m}", f"agents={len(election.agents)}"]
    rows = [["field", "value"]] + [[key, str(doc[key])] for key in ("verdict", "candidates", "labels", "agents")]
    emit(doc, args.format, lines, rows)
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = experiments.load_config(args.config) if args.config else experiments.SuiteConfig()
    overrides = []
    if args.ks:
        overrides.append(f"ks={args.ks}")
    if args.ps:
        overrides.append(f"ps={args.ps}")
    if args.indices:
        overrides.append(f"indices={args.indices}")
    if args.rules:
        overrides.append(f"rules={args.rules}")
    if args.modes:
        overrides.append(f"modes={args.modes}")
    if overrides:
        config = experiments.parse_config("\n".join(overrides), config)
    suite = experiments.run_suite(args.corpus, config, out_dir=args.out, workers=args.workers)
    summary = suite.summary()
    if args.format == "json":
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    elif args.format == "csv":
        sys.stdout.write(suite.report_csv())
    else:
        print(f"rows={summary['rows']} instances={summary['instances']} errors={summary['errors']}")
        if args.out:
            print(f"written to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _election_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("election", help="election file: .json, .pb, or a ballots file with --sidecar")
    p.add_argument("--k", type=int, help="committee size (required unless the JSON stores it)")
    p.add_argument("--mode", default="categories", choices=[m.value for m in LabelMode],
                   help="label derivation for .pb input")
    p.add_argument("--sidecar", help="candidate,label CSV for a ballots file")
    p.add_argument("--label-weights", help="label,weight CSV for weighted indices")


def _common_args(p: argparse.ArgumentParser, defaults: bool) -> None:
    # accepted before and after the subcommand; only the top level sets defaults
    def d(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--format", choices=["text", "json", "csv"], default=d("text"))
    p.add_argument("--cap-cells", type=int, default=d(None),
                   help="knapsack table cap (overrides DIVELECT_CAP_CELLS)")
    p.add_argument("--dsat-limit", type=int, default=d(DSAT_LIMIT), help="largest |C| for the floor search")
    p.add_argument("--score-limit", type=int, default=d(EXACT_SCORE_LIMIT), help="largest |C| for exact CC/PAV")
    p.add_argument("--brute-cap", type=int, default=d(BRUTE_FORCE_CAP), help="most committees to enumerate")
    p.add_argument("--tolerance", type=float, default=d(None), help="absolute tolerance for Shannon comparisons")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divelect", description="Diversity of labelled committees.")
    _common_args(parser, True)
    common = argparse.ArgumentParser(add_help=False)
    _common_args(common, False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="all diversity indices of a committee")
    _election_args(p)
    p.add_argument("--committee", required=True, help="comma-separated candidate ids")
    p.add_argument("--index")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("compare", parents=[common], help="compare two committees from their reduced distr vectors")
    _election_args(p)
    p.add_argument("--committee", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--index", choices=[k.value for k in UNWEIGHTED])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("optimal", parents=[common], help="most diverse committee, ignoring approvals")
    _election_args(p)
    p.add_argument("--index", default="si")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("solve-dscr", parents=[common], help="most diverse committee with a score bound")
    _election_args(p)
    p.add_argument("--index", required=True)
    p.add_argument("--score", default="av", choices=["av", "sav"])
    p.add_argument("--p", help="keep at least p%% of the maximal score")
    p.add_argument("--beta", help="absolute score bound")
    p.add_argument("--delta", help="decision mode: require Simpson at least this value")
    p.set_defaults(func=cmd_solve_dscr)

    p = sub.add_parser("solve-dsat", parents=[common], help="most diverse committee with satisfaction floors")
    _election_args(p)
    p.add_argument("--index", required=True)
    p.add_argument("--floors", help="agent,floor CSV")
    p.add_argument("--from-baseline", choices=[s.value for s in ScoreKind],
                   help="floors one below each agent's satisfaction with this rule's committee")
    p.set_defaults(func=cmd_solve_dsat)

    p = sub.add_parser("ingest", parents=[common], help="parse a .pb file, derive labels, classify and serialize")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", default="categories", choices=[m.value for m in LabelMode])
    p.add_argument("--out", help="write the election JSON here when the instance is kept")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("experiment", parents=[common], help="run the experiment suite on a directory of .pb files")
    p.add_argument("corpus")
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--out", help="output directory for report.csv, summary.json, table1.csv, table2.csv")
    p.add_argument("--workers", type=int)
    p.add_argument("--ks", help="comma-separated committee sizes")
    p.add_argument("--ps", help="comma-separated score percentages")
    p.add_argument("--indices")
    p.add_argument("--rules")
    p.add_argument("--modes")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.cap_cells is not None:
        os.environ["DIVELECT_CAP_CELLS"] = str(args.cap_cells)
    try:
        if args.tolerance is not None:
            indices.set_shannon_tolerance(args.tolerance)
        return args.func(args)
    except (SizeLimitError, ResourceLimitError) as exc:
        print(f"divelect: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (DivelectError, UsageError, ValueError, OSError) as exc:
        print(f"divelect: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
