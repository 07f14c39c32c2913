import json

import jsonschema
import pytest

from conftest import SISTER_TP1, TP1
from trioeval.cli import main
from trioeval.points import EvaluationPoint
from trioeval.reports import SCHEMAS, load_schema


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def validate(doc, name):
    jsonschema.validate(doc, load_schema(name))


@pytest.fixture
def files(tmp_path):
    truth = tmp_path / "tp1.json"
    truth.write_text(json.dumps(TP1.to_dict()))
    return tmp_path, truth


def test_schemas_are_valid_documents():
    for name in SCHEMAS:
        jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    doc = json.loads(out)
    assert code == 0 and doc["prng"] == "numpy-PCG64/SeedSequence"
    assert set(doc["schemas"]) == set(SCHEMAS)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert main([]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "x.json", "--exact", "--float"])
    assert exc.value.code == 2


def test_round_trip_synth_stream_sketch_eval(capsys, files):
    tmp, truth = files
    code, out, _ = run(capsys, "synth", truth, "--exact")
    assert code == 0
    synth = json.loads(out)
    validate(synth, "sketch")
    assert synth["frequencies"]["aaa"] == "39/125"
    assert synth["minimal_test_size"] == 500 and synth["materialization_size"] == 2500

    csv_path = tmp / "d.csv"
    assert run(capsys, "stream", truth, "--seed", 3, "-o", csv_path)[0] == 0
    code, out, _ = run(capsys, "sketch", csv_path)
    sketch = json.loads(out)
    validate(sketch, "sketch")
    sk_path = tmp / "sk.json"
    sk_path.write_text(out)

    code, out, _ = run(capsys, "eval", sk_path, "--exact")
    report = json.loads(out)
    validate(report, "report")
    assert report["independent"]["exact"] is True
    points = {EvaluationPoint.from_dict(p) for p in report["independent"]["points"]}
    assert points == {TP1, SISTER_TP1}


def test_eval_on_synth_fixture_and_decode(capsys, files):
    tmp, truth = files
    _, out, _ = run(capsys, "synth", truth)
    sk = tmp / "s.json"
    sk.write_text(out)
    code, out, _ = run(capsys, "eval", sk, "--decode", "assume-prevalence-near", "--prevalence", "0.55")
    report = json.loads(out)
    validate(report, "report")
    assert [EvaluationPoint.from_dict(p) for p in report["independent"]["decoded"]] == [TP1]
    assert report["mv"]["prevalence"] == "313/500"
    assert run(capsys, "eval", sk, "--decode", "assume-prevalence-near")[0] == 1


def test_float_mode_from_environment(capsys, files, monkeypatch):
    tmp, truth = files
    _, out, _ = run(capsys, "synth", truth)
    sk = tmp / "s.json"
    sk.write_text(out)
    monkeypatch.setenv("TRIOEVAL_MODE", "float")
    report = json.loads(run(capsys, "eval", sk)[1])
    validate(report, "report")
    assert report["independent"]["exact"] is False
    assert report["independent"]["points"][1]["prevalence"] == pytest.approx(0.6)
    report = json.loads(run(capsys, "eval", sk, "--exact")[1])
    assert report["independent"]["exact"] is True


def test_failure_mode_is_exit_zero(capsys, tmp_path):
    sk = tmp_path / "s.json"
    counts = dict(zip(["aaa", "aab", "aba", "abb", "baa", "bab", "bba", "bbb"], [8, 40, 32, 45, 25, 30, 48, 36]))
    sk.write_text(json.dumps({"n": sum(counts.values()), "counts": counts}))
    code, out, _ = run(capsys, "eval", sk)
    report = json.loads(out)
    validate(report, "report")
    assert code == 0 and report["independent"]["failure"]["kind"] == "UnresolvedSquareRoot"


def test_data_errors_exit_one(capsys, tmp_path):
    empty = tmp_path / "e.json"
    empty.write_text(json.dumps({"n": 0, "counts": {}}))
    code, _, err = run(capsys, "eval", empty)
    assert code == 1 and json.loads(err)["error"] == "EmptySketch"
    bad = tmp_path / "bad.csv"
    bad.write_text("c1,c2,c3\na,a,a\na,x,a\n")
    code, _, err = run(capsys, "sketch", bad)
    assert code == 1 and "row 2" in json.loads(err)["message"]
    code, _, err = run(capsys, "eval", tmp_path / "missing.json")
    assert code == 1
    truth = tmp_path / "t.json"
    truth.write_text(json.dumps(TP1.to_dict()))
    code, _, err = run(capsys, "stream", truth, "--n", 500)
    assert code == 1 and json.loads(err)["error"] == "IndivisibleTestSize"


def test_stream_is_deterministic(capsys, files):
    tmp, truth = files
    a, b, c = tmp / "a.csv", tmp / "b.csv", tmp / "c.csv"
    run(capsys, "stream", truth, "--seed", 7, "-o", a)
    run(capsys, "stream", truth, "--seed", 7, "-o", b)
    run(capsys, "stream", truth, "--seed", 8, "-o", c)
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    run(capsys, "stream", truth, "--sample", "--n", 300, "--seed", 1, "-o", a)
    run(capsys, "stream", truth, "--sample", "--n", 300, "--seed", 1, "-o", b)
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 301


def test_project_and_diagnose(capsys, files):
    tmp, truth = files
    _, out, _ = run(capsys, "synth", truth)
    sk = tmp / "s.json"
    sk.write_text(out)
    code, out, _ = run(capsys, "project", sk, truth, "--grid", 64, "--refinements", 30)
    proj = json.loads(out)
    validate(proj, "projection")
    assert proj["distance"] < 1e-9
    assert proj["residuals_at_input"]["linear"] == ["0", "0", "0"]
    code, out, _ = run(capsys, "diagnose", sk, "--point", truth)
    diag = json.loads(out)
    validate(diag, "diagnostics")
    assert [row["g"] for row in diag["blind_spots"]] == ["7/10", "3/10", "1/2"]
    assert diag["platanios"]["c_is_rational_square"] is False


def test_correlated_truth_file(capsys, tmp_path):
    doc = TP1.to_dict()
    doc["corr"] = {"pairs": {"12": {"a": "1/20", "b": "0"}}}
    truth = tmp_path / "c.json"
    truth.write_text(json.dumps(doc))
    validate(doc, "truth")
    _, out, _ = run(capsys, "synth", truth)
    sk = tmp_path / "s.json"
    sk.write_text(out)
    report = json.loads(run(capsys, "eval", sk)[1])
    assert report["independent"]["status"] == "failure"


def test_profile_and_scatter_outputs(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"test_sizes": [100, 1000], "trials_per_size": 5, "corr_cap": 0.1}))
    code, out, _ = run(capsys, "profile", cfg)
    assert code == 0 and out.splitlines()[0].startswith("test_size,trials")
    assert len(out.splitlines()) == 3
    code, out, _ = run(capsys, "scatter", cfg, "--format", "jsonl")
    lines = [json.loads(x) for x in out.splitlines()]
    assert "_meta" in lines[0] and len(lines) == 11
    dest = tmp_path / "p.csv"
    run(capsys, "profile", cfg, "-o", dest)
    meta = json.loads((tmp_path / "p.csv.meta.json").read_text())
    assert meta["prng"] == "numpy-PCG64/SeedSequence"
