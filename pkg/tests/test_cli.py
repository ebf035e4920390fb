import io
import json
import sys
from pathlib import Path

import jsonschema
import pytest

from kummerlab import schema
from kummerlab.cli import run

FIXTURES = Path(__file__).parent / "fixtures"
BIG = "1000000000000000000000000000057000000000000000000000000000799"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def check_schema(name, text):
    data = json.loads(text)
    jsonschema.validate(data, schema.OUTPUT_SCHEMAS[name])
    return data


def test_hilbert_command():
    code, out = call("hilbert", "-a", "2", "-b", "3", "-v", "3")
    assert code == 0
    assert check_schema("hilbert", out)["symbol"] == -1
    code, out = call("hilbert", "-a", "-1", "-b", "-1", "-v", "inf")
    assert json.loads(out)["symbol"] == -1


def test_selmer_command():
    code, out = call("selmer", '{"c":[0,1,-1],"d":1}')
    data = check_schema("selmer", out)
    assert code == 0 and data["dim"] == 2 and len(data["basis"]) == 2


def test_kummer_check_witness_fixture():
    code, out = call("kummer-check", str(FIXTURES / "witness.json"))
    data = check_schema("kummer-check", out)
    assert code == 0 and data["accept"] is True and data["failed"] == []


def test_kummer_check_rejection():
    spec = {"a": [0, 7, 11, 13, 17, 19], "b": [1, 2, 3, 5, 30, 1], "M": [7, 11, 13, 17, 19]}
    code, out = call("kummer-check", json.dumps(spec))
    data = check_schema("kummer-check", out)
    assert code == 1 and data["failed"] == ["nondegenerate"]


def test_stdin_input(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO('{"c":[0,3,10]}'))
    code, out = call("selmer", "-")
    assert code == 0 and json.loads(out)["dim"] == 3


@pytest.mark.parametrize("argv, name", [
    (["kummer-build", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,1,1]}'], "kummer-build"),
    (["kummer-els", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,1,1]}'], "kummer-els"),
    (["search-point", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,1,1]}', "--height", "2"], "search-point"),
    (["mazur-rubin", '{"c":[0,3,10],"d":5}'], "mazur-rubin"),
    (["twist-scan", '{"c":[0,3,10],"twists":[-1,2,5]}'], "twist-scan"),
    (["two-structure", '{"c":[0,3,10],"M":[3,5,7],"extended":true}'], "two-structure"),
    (["admissible", '{"c":[0,3,10],"M":[5,7],"alpha":[1,1]}'], "admissible"),
    (["find-prime", '{"conditions":[[3,-1],[5,1]]}'], "find-prime"),
    (["find-prime", "--cond", "3:-1", "--cond", "5:1"], "find-prime"),
])
def test_success_outputs_match_schema(argv, name):
    code, out = call(*argv)
    assert code == 0, out
    check_schema(name, out)


def test_golden_values():
    assert json.loads(call("find-prime", "--cond", "3:-1", "--cond", "5:1")[1])["prime"] == 19
    pt = json.loads(call("search-point", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,1,1]}',
                         "--height", "1")[1])["point"]
    assert pt == [1] * 6


@pytest.mark.parametrize("argv, name", [
    (["kummer-els", '{"a":[0,1,2,3,4,5],"b":[-1,1,-1,1,-1,1]}'], "kummer-els"),
    (["two-structure", '{"c":[0,3,10],"M":[3]}'], "two-structure"),
    (["find-prime", "--cond", "2:1", "--cond", "3:1", "--cond", "6:-1"], "find-prime"),
    (["admissible", '{"c":[0,3,10],"M":[5,7],"alpha":[2,3]}'], "admissible"),
])
def test_rejections_exit_1(argv, name):
    code, out = call(*argv)
    assert code == 1, out
    check_schema(name, out)


@pytest.mark.parametrize("argv, pointer", [
    (["selmer", '{"c":[0,1]}'], "/c"),
    (["selmer", '{"c":[0,1,1]}'], "/c"),
    (["selmer", '{"c":[0,1,2],"d":4}'], "/c"),
    (["selmer", '{"c":[0,1,'], ""),
    (["selmer", "no-such-file.json"], ""),
    (["kummer-build", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,"x",1]}'], "/b/4"),
    (["kummer-check", '{"a":[0,1,2,3,4,5],"b":[1,1,1,1,1,1]}'], "/M"),
    (["mazur-rubin", '{"c":[0,3,10],"d":5,"T":[3]}'], "/T"),
    (["twist-scan", '{"c":[0,3,10],"twists":[1,8]}'], "/twists/1"),
    (["find-prime", "--cond", "0:1"], "/conditions/0/0"),
])
def test_input_errors_exit_2(argv, pointer):
    code, out = call(*argv)
    data = check_schema("error", out)
    assert code == 2
    assert data["pointer"] == pointer


def test_unknown_subcommand_exit_2(capsys):
    assert run(["bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_undecided_exit_3():
    code, out = call("selmer", '{"c":[0,1,%s]}' % BIG)
    assert code == 3
    check_schema("error", out)


def test_deterministic_output():
    argv = ["kummer-els", '{"a":[0,1,2,3,4,5],"b":[-1,1,-1,1,-1,1]}']
    assert call(*argv) == call(*argv)


def test_twist_scan_threads_and_tsv(monkeypatch):
    argv = ["--format", "tsv", "twist-scan", '{"c":[0,1,-1],"bound":10}']
    monkeypatch.setenv("KUMMERLAB_THREADS", "1")
    serial = call(*argv)
    monkeypatch.setenv("KUMMERLAB_THREADS", "3")
    parallel = call(*argv)
    assert serial == parallel
    lines = serial[1].strip().splitlines()
    assert lines[0].split("\t")[0] == "d"
    ds = [int(l.split("\t")[0]) for l in lines[1:]]
    assert ds == sorted(ds) and 1 in ds and 4 not in ds


def test_file_input(tmp_path):
    path = tmp_path / "curve.json"
    path.write_text('{"c": [0, 3, 10], "d": -1}', encoding="utf-8")
    code, out = call("selmer", str(path))
    assert code == 0 and json.loads(out)["curve"]["d"] == -1
