import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, strategies as st

from conftest import elections
from divelect.errors import DerivationError, InvalidElection, ParseError
from divelect.ingest import (
    FilterVerdict,
    LabelMode,
    ballots_election,
    derive_labels,
    dump_pabulib,
    dumps_election,
    election_from_json,
    election_to_json,
    filter_instance,
    load_election,
    parse_ballots,
    parse_pabulib,
    parse_sidecar,
    read_pabulib,
)
from divelect.model import Election

SCHEMAS = Path(__file__).resolve().parents[1] / "src" / "divelect" / "schemas"
CORPUS = Path(__file__).resolve().parents[1] / "src" / "divelect" / "data" / "minicorpus"

MINIMAL = """META
key;value
description;tiny
PROJECTS
project_id;cost;category;target
1;100;education;children
2;200;sport,education;adults
VOTES
voter_id;vote
v1;1
v2;1,2
"""


def test_minimal_fixture():
    raw = parse_pabulib(MINIMAL)
    assert raw.meta == {"description": "tiny"}
    assert raw.project_ids == ("1", "2")
    assert raw.votes == (("v1", ("1",)), ("v2", ("1", "2")))
    assert dict(raw.projects)["2"] == {"cost": "200", "category": "sport,education", "target": "adults"}


def test_empty_votes_section():
    text = MINIMAL.split("VOTES")[0] + "VOTES\nvoter_id;vote\n"
    raw = parse_pabulib(text)
    assert raw.votes == ()
    e = derive_labels(raw, "categories", 1)
    assert e.agents == ()


def test_unknown_columns_are_preserved():
    text = MINIMAL.replace("project_id;cost;category;target", "project_id;cost;category;target;colour")
    text = text.replace("1;100;education;children", "1;100;education;children;red")
    text = text.replace("2;200;sport,education;adults", "2;200;sport,education;adults;")
    raw = parse_pabulib(text)
    assert dict(raw.projects)["1"]["colour"] == "red"
    assert raw.project_columns[-1] == "colour"


@pytest.mark.parametrize(
    "mutate, line, message",
    [
        (lambda t: t.replace("META\n", "", 1).replace("key;value\ndescription;tiny\n", ""), None, "missing section META"),
        (lambda t: t.replace("project_id;cost", "id;cost"), 5, "malformed PROJECTS header"),
        (lambda t: t.replace("voter_id;vote", "voter_id;ballot"), 9, "malformed VOTES header"),
        (lambda t: t.replace("2;200;", "1;200;"), 7, "duplicate project id"),
        (lambda t: t.replace("v2;1,2", "v2;1,3"), 11, "unknown project"),
        (lambda t: t.replace("v2;1,2", "v1;1,2"), 11, "duplicate voter"),
        (lambda t: t.replace("1;100;education;children", "1;100;education"), 6, "expected 4 fields"),
        (lambda t: t + "PROJECTS\n", 12, "appears twice"),
        (lambda t: "stray\n" + t, 1, "before the first section"),
    ],
)
def test_parse_errors_carry_line_numbers(mutate, line, message):
    with pytest.raises(ParseError, match=message) as info:
        parse_pabulib(mutate(MINIMAL))
    if line is not None:
        assert info.value.line == line


def test_labels_use_set_semantics():
    text = MINIMAL.replace("1;100;education;children", "1;100;education,sport;children")
    e = derive_labels(parse_pabulib(text), "categories", 1)
    assert e.label_of["1"] == e.label_of["2"]
    assert e.m == 1


def test_union_mode_combines_categories_and_targets():
    e = derive_labels(parse_pabulib(MINIMAL), LabelMode.UNION, 1)
    assert e.label_of["1"] == "children,education"
    assert e.label_of["2"] == "adults,education,sport"
    text = MINIMAL.replace("1;100;education;children", "1;100;a;x")
    assert derive_labels(parse_pabulib(text), "union", 1).label_of["1"] == "a,x"


def test_missing_attribute_names_the_project():
    text = MINIMAL.replace("2;200;sport,education;adults", "2;200;;adults")
    with pytest.raises(DerivationError, match="'2'"):
        derive_labels(parse_pabulib(text), "categories", 1)
    with pytest.raises(DerivationError):
        derive_labels(parse_pabulib(text), "union", 1)
    assert derive_labels(parse_pabulib(text), "targets", 1).m == 2


def test_filter_cases():
    distinct = Election.build({}, {"a": "x", "b": "y", "c": "z"}, 1)
    assert filter_instance(distinct, 1) is FilterVerdict.DROP_DISTINCT_LABELS
    assert FilterVerdict.DROP_DISTINCT_LABELS.value == "drop(|C|=m)"
    shared = Election.build({}, {"a": "x", "b": "x", "c": "z"}, 3)
    assert filter_instance(shared, 3) is FilterVerdict.DROP_TOO_FEW
    assert FilterVerdict.DROP_TOO_FEW.value == "drop(|C|<=k)"
    assert filter_instance(shared.with_k(2), 2) is FilterVerdict.KEEP


def test_pabulib_round_trip_on_corpus():
    for path in sorted(CORPUS.glob("*.pb")):
        raw = read_pabulib(path)
        again = parse_pabulib(dump_pabulib(raw))
        assert again == raw
        assert dump_pabulib(again) == dump_pabulib(raw)


token = st.text(alphabet="abcdefgh", min_size=1, max_size=4)


@given(
    st.lists(st.tuples(st.lists(token, min_size=1, max_size=3), st.lists(token, min_size=1, max_size=2)),
             min_size=1, max_size=6),
    st.lists(st.lists(st.integers(0, 5), max_size=4, unique=True), max_size=5),
)
def test_pabulib_round_trip_property(projects, ballots):
    lines = ["META", "key;value", "num;1", "PROJECTS", "project_id;category;target"]
    for i, (cats, targets) in enumerate(projects):
        lines.append(f"p{i};{','.join(cats)};{','.join(targets)}")
    lines += ["VOTES", "voter_id;vote"]
    for j, ballot in enumerate(ballots):
        lines.append(f"v{j};{','.join(f'p{i}' for i in ballot if i < len(projects))}")
    raw = parse_pabulib("\n".join(lines) + "\n")
    assert parse_pabulib(dump_pabulib(raw)) == raw
    shuffled = derive_labels(raw, "union", 1)
    # reversing token order must not change labels
    rev = ["META", "key;value", "num;1", "PROJECTS", "project_id;category;target"]
    for i, (cats, targets) in enumerate(projects):
        rev.append(f"p{i};{','.join(reversed(cats))};{','.join(reversed(targets))}")
    rev += lines[lines.index("VOTES"):]
    assert derive_labels(parse_pabulib("\n".join(rev)), "union", 1).label_of == shuffled.label_of


def test_ballots_and_sidecar():
    ballots = parse_ballots("a,b\n# comment\n-\n\nc  # trailing note\n")
    assert ballots == [("a", "b"), (), ("c",)]
    label_of = parse_sidecar("candidate_id,label\na,F\nb,M\nc,F\n")
    assert label_of == {"a": "F", "b": "M", "c": "F"}
    assert parse_sidecar("a,F\n") == {"a": "F"}
    e = ballots_election("a,b\n-\nc\n", "a,F\nb,M\nc,F\n", 2)
    assert e.agents == ("v1", "v2", "v3")
    assert e.approvals["v2"] == frozenset()
    assert e.labels == ("F", "M")


def test_sidecar_errors():
    with pytest.raises(ParseError, match="2 columns"):
        parse_sidecar("a,F,x\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_sidecar("a,F\na,M\n")
    with pytest.raises(ParseError, match="unknown candidates"):
        ballots_election("a,z\n", "a,F\n", 1)


def test_json_round_trip(example1):
    doc = election_to_json(example1)
    schema = json.loads((SCHEMAS / "election.schema.json").read_text())
    jsonschema.validate(doc, schema)
    assert election_from_json(json.loads(dumps_election(example1))) == example1
    weighted = example1.with_label_weights({"health": 3, "education": 2, "sport": 1})
    jsonschema.validate(election_to_json(weighted), schema)
    assert election_from_json(election_to_json(weighted)) == weighted


@given(elections(weighted=True))
def test_json_round_trip_property(election):
    assert election_from_json(json.loads(dumps_election(election))) == election


def test_malformed_json_document():
    with pytest.raises(ParseError):
        election_from_json({"agents": []})
    with pytest.raises(InvalidElection):
        election_from_json({**election_to_json(Election.build({}, {"a": "x"}, 1)), "k": 5})


def test_load_election_formats(tmp_path, example1):
    path = tmp_path / "e.json"
    path.write_text(dumps_election(example1))
    assert load_election(path) == example1
    assert load_election(path, k=4).k == 4
    pb = tmp_path / "x.pb"
    pb.write_text(MINIMAL)
    assert load_election(pb, k=1, mode="targets").labels == ("adults", "children")
    with pytest.raises(ValueError):
        load_election(pb)
    ballots, side = tmp_path / "b.txt", tmp_path / "s.csv"
    ballots.write_text("a\nb\n")
    side.write_text("a,F\nb,M\n")
    assert load_election(ballots, k=1, sidecar=side).n == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  oops")
    with pytest.raises(ParseError) as info:
        load_election(bad)
    assert info.value.line == 2
