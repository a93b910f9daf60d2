import json
from io import StringIO

import pytest

from sumsetlab.cli import main


def run(*argv):
    out = StringIO()
    rc = main(list(argv), out=out)
    return rc, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return make


def test_calc(files):
    a = files("a.txt", "0\n1\n")
    assert run("calc", "hfold", "--set", a, "--h", "3") == (0, "size=4\n")
    b = files("b.txt", "1\n2\n3\n")
    assert run("calc", "energy", "--a", b, "--b", b) == (0, "19\n")
    rc, text = run("calc", "sum", "--a", a, "--b", b, "--format", "json", "--elements")
    assert rc == 0 and json.loads(text)["elements"] == ["1", "2", "3", "4"]


def test_calc_parse_error(files, capsys):
    bad = files("bad.txt", "1\n1/0\n")
    rc, _ = run("calc", "hfold", "--set", bad, "--h", "2")
    assert rc == 2
    assert ":2:" in capsys.readouterr().err


def test_usage_errors(files):
    a = files("a.txt", "1\n")
    assert run("calc", "hfold", "--set", a)[0] == 2
    assert run("calc", "hfold", "--set", "/nonexistent/x", "--h", "2")[0] == 2
    assert run("bogus")[0] == 2


def test_vanish():
    assert run("vanish", "--k", "2") == (0, "x^3 - x^2 - x + 1, terms=4, order=2\n")
    assert run("vanish", "--k", "0") == (0, "1, terms=1, order=0\n")
    assert run("vanish", "--k", "99")[0] == 4


def test_cap_exit(files, monkeypatch):
    a = files("a.txt", "".join(f"{2 ** i}\n" for i in range(6)))
    assert run("calc", "hfold", "--set", a, "--h", "3", "--cap", "5")[0] == 3
    monkeypatch.setenv("SUMSETLAB_CAP", "5")
    assert run("calc", "hfold", "--set", a, "--h", "3")[0] == 3


def test_cover_round_trip(files):
    x = files("x.txt", "0\n1\n2\n3\n")
    y = files("y.txt", "0\n100\n")
    rc, text = run("cover", "--x", x, "--y", y, "--K", "2")
    doc = json.loads(text)
    assert rc == 0 and doc["case"] == "Disjoint" and doc["verified"]
    saved = files("out.json", text)
    assert run("cover", "--x", x, "--y", y, "--verify", saved)[0] == 0
    doc["outcome"]["subset"] = ["0", "100"]
    tampered = files("bad.json", json.dumps(doc))
    assert run("cover", "--x", x, "--y", y, "--verify", tampered)[0] == 1


def test_drc(files):
    g = files("g.txt", "3 3\n" + "".join(f"{x} {y}\n" for x in range(3) for y in range(3)))
    rc, text = run("drc", "--graph", g, "--t", "1", "--r", "1", "--m", "3", "--a", "3")
    doc = json.loads(text)
    assert rc == 0 and doc["selected"] == [0, 1, 2] and doc["verified"]
    saved = files("d.json", text)
    assert run("drc", "--graph", g, "--verify", saved)[0] == 0
    simple = files("s.txt", "3\n0 1\n")
    assert run("drc", "--graph", simple)[0] == 2
    assert run("drc", "--graph", g, "--m", "4", "--a", "1", "--max-retries", "3")[0] == 6


def test_grow():
    rc, text = run("grow", "--family", "gp:2", "--n", "16", "--h", "2")
    row = json.loads(text)["rows"][0]
    assert rc == 0 and row["product_size"] == 31 and row["hfold"]["2"] == 136
    rc, text = run("grow", "--family", "gp:2", "--n", "4", "--h", "3", "--format", "csv")
    assert rc == 0 and text.splitlines()[1].split(",")[5] == "17"
    assert run("grow", "--family", "zz:1", "--n", "4")[0] == 2


def test_intersect(files):
    a1 = files("a1.txt", "0\n1\n")
    a2 = files("a2.txt", "0\n100000\n")
    rc, text = run("intersect", "--sets", a1, a2, "--ell", "2", "--t", "1")
    doc = json.loads(text)
    assert rc == 0 and doc["verified"]
    assert doc["conclusion"] == "|(2^1 + 2^2)A| = 28 >= 15"
    saved = files("c.json", text)
    assert run("intersect", "--sets", a1, a2, "--verify", saved)[0] == 0
    assert run("intersect", "--sets", a1, a1, "--verify", saved)[0] == 1
    rc, text = run("intersect", "--sets", a1, a1, "--check-only")
    assert rc == 0 and json.loads(text)["beta"] == "1"
    assert run("intersect", "--sets", a1, a1)[0] == 5


def test_pipeline_deterministic_and_verifiable(files):
    argv = ["pipeline", "--family", "gp:2", "--n", "32", "--seed", "5"]
    rc1, first = run(*argv)
    rc2, second = run(*argv)
    assert rc1 == rc2 == 0 and first == second
    saved = files("p.json", first)
    rc, text = run("pipeline", "--verify", saved)
    assert rc == 0 and json.loads(text)["verified"]


def test_pipeline_subset_iteration(files):
    rc, text = run("pipeline", "--family", "gp:9/8", "--n", "12", "--drc-m", "11",
                   "--mode", "iterate", "--ell", "2")
    assert rc == 0
    assert json.loads(text)["transcript"]["outcome"] == "analysis"
    saved = files("it.json", text)
    assert run("pipeline", "--verify", saved)[0] == 0


def test_pipeline_errors(files):
    assert run("pipeline", "--family", "gp:2", "--n", "8", "--mode", "iterate", "--max-steps", "0")[0] == 6
    assert run("pipeline")[0] == 2
    assert run("pipeline", "--family", "gp:2")[0] == 2


def test_lemma_check_single_suite():
    rc, text = run("lemma-check", "--suite", "fg,vanish", "--seed", "1")
    doc = json.loads(text)
    assert rc == 0 and doc["passed"] and [s["name"] for s in doc["suites"]] == ["fg", "vanish"]
    assert run("lemma-check", "--suite", "nope")[0] == 2
