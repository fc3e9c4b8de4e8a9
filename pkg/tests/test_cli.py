import json

import pytest

from puremin.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def dold_file(tmp_path, capsys):
    path = tmp_path / "dold.json"
    assert main(["example", "dold", "--emit", str(path)]) == 0
    capsys.readouterr()
    return str(path)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_validate_and_homology(capsys, tmp_path):
    path = tmp_path / "k.json"
    assert main(["example", "koszul22", "--emit", str(path)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "--json", "homology", str(path))
    assert code == 0
    h = json.loads(out)["homology"]
    assert h["0"] == {"divisors": [2], "free_rank": 0}
    assert h["1"] == {"divisors": [2], "free_rank": 0}
    assert h["2"] == {"divisors": [], "free_rank": 0}
    code, out, _ = run(capsys, "validate", str(path), "--json")
    assert code == 0 and json.loads(out)["valid"] is True


def test_diagnose_dold(capsys, dold_file):
    code, out, _ = run(capsys, "--json", "diagnose", dold_file)
    assert code == 0
    f = json.loads(out)
    assert (f["acyclic"], f["pure_acyclic"], f["contractible"]) == (True, False, False)
    assert (f["split_minimal"], f["pure_minimal"], f["minimal"]) == (True, True, "yes")
    code, out, _ = run(capsys, "diagnose", dold_file)
    assert "decision path:" in out and "acyclic = true" in out


def test_diagnose_exa_f_shows_witness(capsys, tmp_path):
    path = tmp_path / "f.json"
    main(["example", "exaF", "--emit", str(path)])
    capsys.readouterr()
    code, out, _ = run(capsys, "diagnose", str(path))
    assert code == 0 and "minimal = no" in out and "sigma = {0: ((1,),)}" in out


def test_reduce_trace(capsys, tmp_path):
    src, trace, red = tmp_path / "disk.json", tmp_path / "t.json", tmp_path / "r.json"
    main(["example", "disk", "--emit", str(src)])
    capsys.readouterr()
    code, out, _ = run(capsys, "reduce", str(src), "--trace", str(trace), "--emit", str(red))
    assert code == 0 and "moves: 1" in out and "contractible" in out
    t = json.loads(trace.read_text())
    assert len(t["moves"]) == 1 and set(t) >= {"split_part", "reduced", "iso_data"}
    assert json.loads(red.read_text())["shape"]["kind"] == "bounded"


def test_dimension_of_module(capsys, tmp_path):
    m = write(tmp_path, "z2.json", {"ring": "Z/4", "generators": 1, "relations": {"rows": 1, "cols": 1, "entries": [[2]]}})
    code, out, _ = run(capsys, "--json", "dimension", m, "--cutoff", "8")
    assert code == 0 and json.loads(out)["value"] == "infinite"
    z = write(tmp_path, "z6.json", {"ring": "Z", "generators": 1, "relations": {"rows": 1, "cols": 1, "entries": [[6]]}})
    code, out, _ = run(capsys, "dimension", z)
    assert code == 0 and "pd of module = 1" in out


def test_harness_verb(capsys, tmp_path):
    code, out, _ = run(capsys, "harness", "--suite", "vnr", "--cases", "120")
    assert code == 0 and out.startswith("PASS vnr")
    code, out, _ = run(capsys, "harness", "--suite", "bg", "--cases", "5")
    assert code == 1 and "underpowered" in out
    code, _, err = run(capsys, "harness", "--suite", "nope")
    assert code == 3 and "unknown suite" in err


def test_example_refusal_and_unknown(capsys):
    code, out, _ = run(capsys, "example", "ZQ")
    assert code == 1 and "refused" in out
    code, _, err = run(capsys, "example", "nothing")
    assert code == 3


@pytest.mark.parametrize(
    "doc,path,key",
    [
        ({"shape": {"kind": "bounded", "min": 0, "max": 0}}, "$", "ring"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0}}, "$.shape", "max"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 1}, "modules": {"0": {"free_rank": -1}}},
         "$.modules.0.free_rank", "free_rank"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 1}, "colour": 1}, "$", "colour"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 1}, "modules": {"5": {"free_rank": 1}}},
         "$.modules.5", "5"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 1},
          "modules": {"0": {"free_rank": 1}, "1": {"free_rank": 1}},
          "differentials": {"1": {"rows": 1, "cols": 2, "entries": [[1, 1]]}}}, "$.differentials.1", "1"),
        ({"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 1},
          "modules": {"0": {"free_rank": 1}, "1": {"free_rank": 1}},
          "differentials": {"1": {"rows": 1, "cols": 1, "entries": [[1, 2]]}}}, "$.differentials.1.entries[0]", 0),
    ],
)
def test_invalid_documents_name_path_and_key(capsys, tmp_path, doc, path, key):
    f = write(tmp_path, "bad.json", doc)
    code, _, err = run(capsys, "validate", f)
    assert code == 2
    assert f": {path}: key {key!r}:" in err


def test_non_complex_inputs(capsys, tmp_path):
    assert run(capsys, "validate", write(tmp_path, "x.json", "{not json"))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    sq = {"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 2},
          "modules": {"0": {"free_rank": 1}, "1": {"free_rank": 1}, "2": {"free_rank": 1}},
          "differentials": {"1": {"rows": 1, "cols": 1, "entries": [[1]]}, "2": {"rows": 1, "cols": 1, "entries": [[1]]}}}
    assert run(capsys, "validate", write(tmp_path, "sq.json", sq))[0] == 2


def test_unsupported_requests(capsys, tmp_path, dold_file):
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "diagnose", dold_file, "--budget", "0")[0] == 3
    assert run(capsys, "dimension", dold_file)[0] == 3
    tor = {"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 0},
           "modules": {"0": {"generators": 1, "relations": {"rows": 1, "cols": 1, "entries": [[2]]}}}}
    assert run(capsys, "reduce", write(tmp_path, "tor.json", tor))[0] == 3
