import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncx.cli import job_from_doc, main, parse_input, parse_module, render, run
from ncx.errors import ParseError, SchemaError
from ncx.rings import ZZ

JOBS = [
    {"command": "koszul", "N": 3, "elements": [2, 3]},
    {"command": "koszul", "ring": {"kind": "F", "p": 7}, "N": 3, "elements": [2], "module": {"free": 1}},
    {"command": "cech", "N": 3, "elements": [2], "module": "Z^1 + Z/4"},
    {"command": "telescope", "N": 3, "x": 2, "stage": 3},
    {"command": "proregular", "N": 3, "elements": [4, 6], "stages": 4},
    {"command": "localcoh", "N": 3, "ideal": [3], "module": {"free": 1, "factors": [9]}},
    {"command": "complete", "N": 3, "ideal": [2], "module": "Z/12"},
    {"command": "mgm", "N": 3, "ideal": [2], "module": "Z^1"},
    {"command": "invariants", "N": 3, "ideal": [2], "module": "Z^1", "t": 1},
    {"command": "check", "suite": "koszul", "seed": 1, "count": 3},
    {"command": "validate", "N": 3, "complex": {"lo": 0, "modules": [1, 1, 1], "differentials": [[[1]], [[2]]]}},
    {"command": "coh", "N": 3, "complex": {"lo": 0, "modules": [1, 1], "differentials": [[[4]]]}},
]


@pytest.mark.parametrize("doc", JOBS, ids=lambda d: d["command"])
def test_job_round_trip(doc):
    job = job_from_doc(doc)
    again = parse_input(json.dumps(job.to_json()))
    assert again.to_json() == job.to_json()


@pytest.mark.parametrize("doc", JOBS, ids=lambda d: d["command"])
def test_reports_render_stably(doc):
    report = run(job_from_doc(doc))
    text = render(report, "json")
    assert render(json.loads(text), "json") == text
    assert render(run(job_from_doc(doc)), "json") == text
    assert "verdict:" in render(report, "text")
    assert report["verdict"]["pass"]


def test_frozen_local_cohomology_report():
    report = run(job_from_doc({"command": "localcoh", "N": 3, "ideal": [2], "module": "Z^1 + Z/4"}))
    text = render(report, "text")
    for line in ("H^0_1 = Z/4", "H^1_2 = Pruefer(2)^1", "H^2_1 = Pruefer(2)^1", "verdict: PASS"):
        assert line in text


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_input('{"command": "koszul",\n  "N": }')
    assert "line 2" in str(err.value)


@pytest.mark.parametrize("doc, field", [
    ({"command": "nope"}, "command"),
    ({"command": "koszul", "elements": [2]}, "N"),
    ({"command": "koszul", "N": 1, "elements": [2]}, "N"),
    ({"command": "koszul", "N": 3}, "elements"),
    ({"command": "koszul", "N": 3, "elements": [2], "ring": {"kind": "F", "p": 8}}, "ring"),
    ({"command": "check", "suite": "bogus", "seed": 1, "count": 1}, "suite"),
    ({"command": "check", "suite": "les", "seed": 1, "count": 0}, "count"),
    ({"command": "localcoh", "N": 3, "ideal": [2], "module": {"gens": 2, "relations": [[1]]}}, "module.relations"),
])
def test_schema_errors_name_the_field(doc, field):
    with pytest.raises(SchemaError) as err:
        job_from_doc(doc)
    assert err.value.field == field


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.lists(st.integers(2, 30), max_size=3))
def test_module_literals_agree(free, factors):
    a = parse_module({"free": free, "factors": factors}, ZZ)
    b = parse_module(a.classify().render(), ZZ) if not a.is_zero() else a
    assert a.classify() == b.classify()


@pytest.fixture
def files(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "m.json").write_text('"Z^1 + Z/4"')
    (tmp_path / "ok.json").write_text(json.dumps(
        {"N": 3, "lo": 0, "modules": [1, 1, 1], "differentials": [[[2]], [[3]]]}))
    (tmp_path / "bad.json").write_text(json.dumps(
        {"N": 2, "lo": 0, "modules": [1, 1, 1], "differentials": [[[2]], [[3]]]}))
    (tmp_path / "job.json").write_text(json.dumps({"command": "koszul", "N": 3, "elements": [2]}))
    (tmp_path / "broken.json").write_text('{"N": 3,')
    return tmp_path


@pytest.mark.parametrize("argv, code", [
    (["koszul", "--N", "3", "--elements", "2,3"], 0),
    (["validate", "ok.json"], 0),
    (["validate", "bad.json"], 1),
    (["coh", "ok.json", "--t", "1"], 0),
    (["localcoh", "--N", "3", "--ideal", "2", "--module", "m.json"], 0),
    (["complete", "--N", "3", "--ideal", "2", "--module", "m.json"], 0),
    (["invariants", "--N", "3", "--ideal", "2", "--module", "m.json", "--t", "2"], 0),
    (["telescope", "--N", "3", "--x", "2", "--stage", "2"], 0),
    (["check", "--suite", "routes", "--seed", "1", "--count", "2"], 0),
    (["validate", "job.json"], 2),
    (["validate", "broken.json"], 2),
    (["validate", "missing.json"], 2),
    (["frobnicate"], 2),
    (["koszul", "--N", "3"], 2),
    (["koszul", "--N", "3", "--elements", "2", "--ring", "F:9"], 2),
])
def test_exit_codes(files, capsys, argv, code):
    assert main(argv) == code


def test_json_output_is_byte_stable(files, capsys):
    argv = ["--format", "json", "check", "--suite", "les", "--seed", "5", "--count", "3"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    assert json.loads(first)["verdict"]["pass"]


def test_errors_go_to_stderr(files, capsys):
    main(["validate", "broken.json"])
    out = capsys.readouterr()
    assert out.out == "" and out.err.startswith("error:")
