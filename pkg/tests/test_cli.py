import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from divelect.cli import main
from divelect.ingest import dumps_election

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "src" / "divelect" / "schemas"
CORPUS = ROOT / "src" / "divelect" / "data" / "minicorpus"
S2 = "h1,e1,s1,s2,s3,s4,s5,s6,s7,s8"
S3 = "e1,e2,e3,e4,e5,s1,s2,s3,s4,s5"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, name):
    schema = REGISTRY.contents(f"{name}.schema.json")
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


@pytest.fixture
def election_file(tmp_path, example1):
    path = tmp_path / "example.json"
    path.write_text(dumps_election(example1))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compare_prints_reduced_vectors_and_verdict(capsys, election_file):
    code, out, _ = run(capsys, "compare", election_file, "--committee", S2, "--other", S3, "--index", "lc")
    assert code == 0
    assert "rho=(1,2,6,9)" in out
    assert "rdistr_a=(0,2,0,1)" in out and "rdistr_b=(1,0,2,0)" in out
    assert out.strip().splitlines()[-1] == "verdict More"


def test_compare_json(capsys, election_file):
    code, out, _ = run(capsys, "--format", "json", "compare", election_file, "--committee", S2, "--other", S3)
    doc = json.loads(out)
    validate(doc, "compare")
    assert {v["index"]: v["verdict"] for v in doc["verdicts"]} == {"ri": "More", "si": "Less", "sh": "Less", "lc": "More"}


def test_index_command(capsys, election_file):
    code, out, _ = run(capsys, "index", election_file, "--committee", "h1,h2,h3,e1,e2,e3,s1,s2,s3,s4")
    assert code == 0
    assert "si=-17/50" in out and "lc=4145152" in out
    code, out, _ = run(capsys, "index", election_file, "--committee", S2, "--format", "json")
    validate(json.loads(out), "index")
    code, out, _ = run(capsys, "index", election_file, "--committee", S2, "--format", "csv", "--index", "ri")
    assert out == "index,value\nri,3\n"


def test_weighted_index_with_label_weights(capsys, election_file, tmp_path):
    weights = tmp_path / "w.csv"
    weights.write_text("label,weight\nhealth,3\neducation,2\nsport,1\n")
    code, out, _ = run(capsys, "index", election_file, "--committee", S2, "--label-weights", str(weights))
    assert code == 0 and "wri=6" in out


def test_optimal(capsys, election_file):
    code, out, _ = run(capsys, "optimal", election_file, "--index", "si", "--format", "json")
    doc = json.loads(out)
    validate(doc, "outcome")
    assert code == 0 and doc["diversity"]["value"] == "-17/50"


def test_solve_dscr_full_score(capsys, election_file):
    code, out, _ = run(capsys, "solve-dscr", election_file, "--index", "si", "--p", "100")
    assert code == 0
    assert "status=optimal" in out and "score=10" in out
    code, out, _ = run(capsys, "solve-dscr", election_file, "--index", "sh", "--score", "sav", "--p", "80",
                       "--format", "json")
    validate(json.loads(out), "outcome")


def test_solve_dscr_infeasible_and_decision(capsys, election_file):
    code, out, _ = run(capsys, "solve-dscr", election_file, "--index", "lc", "--beta", "11")
    assert code == 1 and "status=infeasible" in out
    code, out, _ = run(capsys, "solve-dscr", election_file, "--index", "si", "--beta", "5", "--delta", "-0.34")
    assert code == 0 and "delta=-17/50" in out
    code, out, _ = run(capsys, "solve-dscr", election_file, "--index", "si", "--beta", "10", "--delta", "-0.34",
                       "--format", "json")
    validate(json.loads(out), "outcome")
    assert code == 1


def test_solve_dsat(capsys, election_file, tmp_path):
    floors = tmp_path / "f.csv"
    floors.write_text("agent,floor\na2,3\na3,4\n")
    code, out, _ = run(capsys, "solve-dsat", election_file, "--index", "si", "--floors", str(floors))
    assert code == 0
    floors.write_text("a2,4\n")
    code, out, _ = run(capsys, "solve-dsat", election_file, "--index", "si", "--floors", str(floors),
                       "--format", "json")
    assert code == 1
    validate(json.loads(out), "outcome")
    code, out, _ = run(capsys, "solve-dsat", election_file, "--index", "lc", "--from-baseline", "pav")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["compare", "{e}", "--committee", S2],
        ["solve-dscr", "{e}", "--index", "si"],
        ["solve-dscr", "{e}", "--index", "si", "--p", "abc"],
        ["solve-dscr", "{e}", "--index", "lc", "--beta", "3", "--delta", "1"],
        ["solve-dsat", "{e}", "--index", "si"],
        ["index", "{e}", "--committee", "h1,h2"],
        ["index", "{e}", "--committee", S2, "--index", "wsi"],
        ["index", "/nonexistent.json", "--committee", S2],
        ["index", "{e}", "--committee", S2, "--tolerance", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, election_file, argv):
    code, _, _ = run(capsys, *[a.replace("{e}", election_file) for a in argv])
    assert code == 2


def test_size_limits_exit_3(capsys, election_file, monkeypatch):
    # main() exports --cap-cells to the environment; make sure it is undone
    monkeypatch.setenv("DIVELECT_CAP_CELLS", "100000000")
    code, _, err = run(capsys, "solve-dsat", election_file, "--index", "si", "--from-baseline", "av",
                       "--dsat-limit", "5")
    assert code == 3 and "limit" in err
    code, _, _ = run(capsys, "--cap-cells", "10", "solve-dscr", election_file, "--index", "si", "--p", "50")
    assert code == 3
    code, _, _ = run(capsys, "optimal", election_file, "--index", "wlc", "--brute-cap", "10",
                     "--label-weights", str(_weights(Path(election_file).parent)))
    assert code == 3


def _weights(directory):
    path = directory / "weights.csv"
    path.write_text("health,2\neducation,1\nsport,1\n")
    return path


def test_ingest(capsys, tmp_path):
    out_file = tmp_path / "e.json"
    code, out, err = run(capsys, "ingest", str(CORPUS / "riverside.pb"), "--k", "4", "--out", str(out_file),
                         "--format", "json")
    assert code == 0 and "keep" in err
    doc = json.loads(out)
    validate(doc, "ingest")
    validate(json.loads(out_file.read_text()), "election")
    code, out, _ = run(capsys, "ingest", str(CORPUS / "hillside.pb"), "--k", "4", "--mode", "union")
    assert code == 0 and "verdict=drop(|C|=m)" in out


def test_ingest_reports_parse_line(capsys, tmp_path):
    bad = tmp_path / "bad.pb"
    bad.write_text("META\nkey;value\nPROJECTS\nid;cost\n")
    code, _, err = run(capsys, "ingest", str(bad), "--k", "2")
    assert code == 2 and "line 4" in err


def test_experiment(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", str(CORPUS), "--ks", "4", "--indices", "si", "--rules", "av",
                       "--ps", "100,50", "--out", str(tmp_path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "summary")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["report.csv", "summary.json", "table1.csv", "table2.csv"]


def test_options_before_or_after_subcommand(capsys, election_file):
    a = run(capsys, "--format", "csv", "optimal", election_file)
    b = run(capsys, "optimal", election_file, "--format", "csv")
    assert a == b and a[1].startswith("field,value\n")


def test_ballots_with_sidecar(capsys, tmp_path):
    ballots, side = tmp_path / "b.txt", tmp_path / "s.csv"
    ballots.write_text("a,b\nc\n-\n")
    side.write_text("candidate_id,label\na,F\nb,M\nc,F\nd,M\n")
    code, out, _ = run(capsys, "optimal", str(ballots), "--sidecar", str(side), "--k", "2", "--index", "ri")
    assert code == 0 and "ri=2" in out


def test_console_entry_point(election_file):
    proc = subprocess.run(
        [sys.executable, "-m", "divelect.cli", "compare", election_file, "--committee", S2, "--other", S3,
         "--index", "lc"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "verdict More" in proc.stdout
