"""Reading elections from participatory-budgeting files and simple ballot files.

Pabulib ``.pb`` files consist of the sections ``META``, ``PROJECTS`` and
``VOTES``. Each section line is followed by a ``;``-separated header row and
``;``-separated data rows; ``category``, ``target`` and ``vote`` cells hold
comma-separated lists. Unknown columns are kept verbatim, ``cost`` is read
but plays no role.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DerivationError, ParseError
from .model import Election

SECTIONS = ("META", "PROJECTS", "VOTES")
_ID_COLUMN = {"META": "key", "PROJECTS": "project_id", "VOTES": "voter_id"}


@dataclass(frozen=True)
class RawInstance:
    """A parsed ``.pb`` file. Attribute maps keep the header's column order."""

    meta: dict[str, str]
    projects: tuple[tuple[str, dict[str, str]], ...]
    votes: tuple[tuple[str, tuple[str, ...]], ...]
    project_columns: tuple[str, ...] = ("project_id",)
    vote_columns: tuple[str, ...] = ("voter_id", "vote")
    voter_attributes: tuple[dict[str, str], ...] = field(default=())

    @property
    def project_ids(self) -> tuple[str, ...]:
        return tuple(pid for pid, _ in self.projects)


def split_list(cell: str) -> list[str]:
    return [tok.strip() for tok in cell.split(",") if tok.strip()]


def _rows(text: str):
    """Yield (line number, fields) for non-blank lines."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = next(csv.reader([line], delimiter=";"))
        yield lineno, [f.strip() for f in fields]


def parse_pabulib(text: str) -> RawInstance:
    section = None
    header: list[str] | None = None
    seen: list[str] = []
    meta: dict[str, str] = {}
    projects: dict[str, dict[str, str]] = {}
    votes: dict[str, tuple[str, ...]] = {}
    voter_attrs: list[dict[str, str]] = []
    columns = {"PROJECTS": ("project_id",), "VOTES": ("voter_id", "vote")}
    pending_votes = []
    last_line = 0

    for lineno, fields in _rows(text):
        last_line = lineno
        if len(fields) == 1 and fields[0].upper() in SECTIONS:
            name = fields[0].upper()
            if name in seen:
                raise ParseError(f"section {name} appears twice", lineno)
            seen.append(name)
            section, header = name, None
            continue
        if section is None:
            raise ParseError("content before the first section header", lineno)
        if header is None:
            if _ID_COLUMN[section] not in fields or len(set(fields)) != len(fields):
                raise ParseError(
                    f"malformed {section} header row; expected a {_ID_COLUMN[section]!r} column", lineno
                )
            if section == "VOTES" and "vote" not in fields:
                raise ParseError("malformed VOTES header row; expected a 'vote' column", lineno)
            header = fields
            if section in columns:
                columns[section] = tuple(fields)
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(fields)}", lineno)
        row = dict(zip(header, fields))
        if section == "META":
            if "value" in row:
                meta[row["key"]] = row["value"]
            else:
                meta[row["key"]] = ";".join(v for c, v in row.items() if c != "key")
        elif section == "PROJECTS":
            pid = row.pop("project_id")
            if not pid:
                raise ParseError("empty project id", lineno)
            if pid in projects:
                raise ParseError(f"duplicate project id {pid!r}", lineno)
            projects[pid] = row
        else:
            vid = row.pop("voter_id")
            if vid in votes:
                raise ParseError(f"duplicate voter id {vid!r}", lineno)
            ballot = tuple(split_list(row.pop("vote")))
            if len(set(ballot)) != len(ballot):
                raise ParseError(f"voter {vid!r} approves a project twice", lineno)
            votes[vid] = ballot
            voter_attrs.append(row)
            pending_votes.append((lineno, vid, ballot))

    for name in SECTIONS:
        if name not in seen:
            raise ParseError(f"missing section {name}", last_line or None)
    for lineno, vid, ballot in pending_votes:
        for pid in ballot:
            if pid not in projects:
                raise ParseError(f"voter {vid!r} approves unknown project {pid!r}", lineno)

    return RawInstance(
        meta=meta,
        projects=tuple(projects.items()),
        votes=tuple(votes.items()),
        project_columns=columns["PROJECTS"],
        vote_columns=columns["VOTES"],
        voter_attributes=tuple(voter_attrs),
    )


def read_pabulib(path: str | Path) -> RawInstance:
    return parse_pabulib(Path(path).read_text(encoding="utf-8"))


def dump_pabulib(raw: RawInstance) -> str:
    """Canonical ``.pb`` text; :func:`parse_pabulib` reads it back unchanged."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=";", lineterminator="\n")
    out.write("META\n")
    writer.writerow(["key", "value"])
    for key, value in raw.meta.items():
        writer.writerow([key, value])
    out.write("PROJECTS\n")
    writer.writerow(raw.project_columns)
    for pid, attrs in raw.projects:
        writer.writerow([pid if c == "project_id" else attrs.get(c, "") for c in raw.project_columns])
    out.write("VOTES\n")
    writer.writerow(raw.vote_columns)
    extras = raw.voter_attributes or tuple({} for _ in raw.votes)
    for (vid, ballot), attrs in zip(raw.votes, extras):
        cells = []
        for c in raw.vote_columns:
            cells.append(vid if c == "voter_id" else ",".join(ballot) if c == "vote" else attrs.get(c, ""))
        writer.writerow(cells)
    return out.getvalue()


class LabelMode(str, enum.Enum):
    CATEGORIES = "categories"
    TARGETS = "targets"
    UNION = "union"


_MODE_COLUMNS = {
    LabelMode.CATEGORIES: ("category",),
    LabelMode.TARGETS: ("target",),
    LabelMode.UNION: ("category", "target"),
}


def label_of_tokens(tokens: Iterable[str]) -> str:
    """Canonical label for a token set: sorted, deduplicated, comma-joined."""
    return ",".join(sorted(set(tokens)))


def project_label(pid: str, attrs: Mapping[str, str], mode: LabelMode | str) -> str:
    mode = LabelMode(mode)
    tokens = []
    for column in _MODE_COLUMNS[mode]:
        found = split_list(attrs.get(column, ""))
        if not found:
            raise DerivationError(f"project {pid!r} has no {column} for label mode {mode.value}")
        tokens.extend(found)
    return label_of_tokens(tokens)


def derive_labels(raw: RawInstance, mode: LabelMode | str, k: int) -> Election:
    """Election whose labels are the projects' category/target token sets."""
    label_of = {pid: project_label(pid, attrs, mode) for pid, attrs in raw.projects}
    return Election.build(
        {vid: ballot for vid, ballot in raw.votes},
        label_of,
        k,
        agents=[vid for vid, _ in raw.votes],
        candidates=raw.project_ids,
        labels=sorted(set(label_of.values())),
    )


class FilterVerdict(str, enum.Enum):
    KEEP = "keep"
    DROP_DISTINCT_LABELS = "drop(|C|=m)"
    DROP_TOO_FEW = "drop(|C|<=k)"


def filter_instance(election: Election, k: int) -> FilterVerdict:
    """Whether an instance is informative for committee size ``k``.

    Instances where every candidate has its own label make all committees
    equally diverse; instances with at most k candidates have one committee.
    """
    if election.n == election.m:
        return FilterVerdict.DROP_DISTINCT_LABELS
    if election.n <= k:
        return FilterVerdict.DROP_TOO_FEW
    return FilterVerdict.KEEP


def parse_ballots(text: str) -> list[tuple[str, ...]]:
    """One ballot per line, comma-separated candidate ids; ``#`` starts a comment.

    A line holding only ``-`` is an empty ballot.
    """
    ballots = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        ballots.append(() if line == "-" else tuple(split_list(line)))
    return ballots


def parse_sidecar(text: str) -> dict[str, str]:
    """Two-column CSV ``candidate_id,label``; a header row is optional."""
    label_of: dict[str, str] = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, found {len(row)}", lineno)
        cand, label = row[0].strip(), row[1].strip()
        if lineno == 1 and (cand, label) == ("candidate_id", "label"):
            continue
        if cand in label_of:
            raise ParseError(f"duplicate candidate {cand!r}", lineno)
        if not cand or not label:
            raise ParseError("empty candidate id or label", lineno)
        label_of[cand] = label
    return label_of


def ballots_election(ballots_text: str, sidecar_text: str, k: int) -> Election:
    label_of = parse_sidecar(sidecar_text)
    approvals = {}
    lineno = 0
    for lineno, ballot in enumerate(parse_ballots(ballots_text), start=1):
        unknown = [c for c in ballot if c not in label_of]
        if unknown:
            raise ParseError(f"ballot {lineno} approves unknown candidates {unknown}")
        approvals[f"v{lineno}"] = ballot
    return Election.build(approvals, label_of, k, labels=sorted(set(label_of.values())))


def election_to_json(election: Election) -> dict:
    order = election.cand_index
    doc = {
        "agents": list(election.agents),
        "candidates": list(election.candidates),
        "approvals": {a: sorted(election.approvals[a], key=order.__getitem__) for a in election.agents},
        "labels": list(election.labels),
        "label_of": dict(election.label_of),
        "k": election.k,
    }
    if election.label_weights is not None:
        doc["label_weights"] = dict(election.label_weights)
    return doc


def election_from_json(doc: Mapping) -> Election:
    try:
        return Election(
            agents=tuple(doc["agents"]),
            candidates=tuple(doc["candidates"]),
            approvals={a: frozenset(v) for a, v in doc["approvals"].items()},
            k=int(doc["k"]),
            labels=tuple(doc["labels"]),
            label_of=dict(doc["label_of"]),
            label_weights=dict(doc["label_weights"]) if doc.get("label_weights") is not None else None,
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"malformed election document: {exc}") from None


def dumps_election(election: Election) -> str:
    return json.dumps(election_to_json(election), indent=2) + "\n"


def load_election(
    path: str | Path,
    *,
    k: int | None = None,
    mode: LabelMode | str = LabelMode.CATEGORIES,
    sidecar: str | Path | None = None,
) -> Election:
    """Load ``.json``, ``.pb`` or a ballots file (with ``sidecar``).

    ``k`` overrides the committee size stored in a JSON document and is
    required for the other formats.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        election = election_from_json(doc)
        return election if k is None else election.with_k(k)
    if k is None:
        raise ValueError("a committee size k is needed for this input format")
    if sidecar is not None:
        return ballots_election(text, Path(sidecar).read_text(encoding="utf-8"), k)
    return derive_labels(parse_pabulib(text), mode, k)
