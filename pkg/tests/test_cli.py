import json

import pytest
from jsonschema import validate

from permatch.cli import main
from permatch import parse_graph

CYCLE5 = "digraph 5\n0 1\n1 2\n2 3\n3 4\n4 0\n"
K33 = "bipartite 3 3\n" + "".join(f"{i} {j}\n" for i in range(3) for j in range(3))
RING_TEXT = None  # built via the construct command


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_plain_and_json(capsys, write_graph, schema_loader):
    path = write_graph(CYCLE5)
    code, out, _ = run(capsys, "count", "--input", path, "--what", "derangements")
    assert (code, out) == (0, "1\n")
    code, out, _ = run(capsys, "count", "--input", path, "--what", "permutations")
    assert (code, out) == (0, "2\n")
    code, out, _ = run(capsys, "count", "--input", path, "--what", "ratio")
    assert (code, out) == (0, "1/2 (0.500000000000)\n")
    code, out, _ = run(capsys, "count", "--input", path, "--what", "fixed-points", "--json")
    doc = json.loads(out)
    validate(doc, schema_loader("count"))
    assert doc["counts"] == [1, 0, 0, 0, 0, 1]
    code, out, _ = run(capsys, "count", "--input", path, "--what", "ratio", "--json")
    doc = json.loads(out)
    validate(doc, schema_loader("count"))
    assert (doc["numerator"], doc["denominator"]) == (1, 2)


def test_count_matchings(capsys, write_graph, schema_loader):
    path = write_graph(K33)
    code, out, _ = run(capsys, "count", "--input", path, "--what", "matchings", "--json")
    doc = json.loads(out)
    validate(doc, schema_loader("count"))
    assert doc["value"] == 6
    # a digraph has no matchings to count
    dpath = write_graph(CYCLE5)
    code, _, err = run(capsys, "count", "--input", dpath, "--what", "matchings")
    assert code == 2 and "undirected or bipartite" in err


def test_count_bipartite_flattens_for_ratio(capsys, write_graph):
    path = write_graph(K33)
    code, out, _ = run(capsys, "count", "--input", path, "--what", "derangements")
    assert (code, out) == (0, "36\n")  # 6^2 paired matchings


def test_exit_code_3_on_bad_files(capsys, write_graph, tmp_path):
    code, _, err = run(capsys, "count", "--input", str(tmp_path / "missing.txt"), "--what", "ratio")
    assert code == 3
    bad = write_graph("digraph 2\n0 7\n")
    code, _, err = run(capsys, "count", "--input", bad, "--what", "ratio")
    assert code == 3 and "error" in err
    garbled = write_graph("pentagram 5\n")
    code, _, err = run(capsys, "count", "--input", garbled, "--what", "ratio")
    assert code == 3


def test_usage_errors_exit_2(capsys, write_graph):
    with pytest.raises(SystemExit) as exc:
        main(["count", "--input", "x", "--what", "sandwiches"])
    assert exc.value.code == 2
    big = "digraph 13\n" + "".join(f"{i} {(i + 1) % 13}\n" for i in range(13))
    path = write_graph(big)
    code, _, err = run(capsys, "count", "--input", path, "--what", "fixed-points")
    assert code == 2  # over the profile cap


def test_construct_and_count_roundtrip(capsys, tmp_path):
    out = tmp_path / "c6.txt"
    code, _, _ = run(capsys, "construct", "--kind", "cycle", "--n", "6", "--out", str(out))
    assert code == 0
    code, text, _ = run(capsys, "count", "--input", str(out), "--what", "ratio")
    assert text.startswith("1/2")

    jout = tmp_path / "b.json"
    code, _, _ = run(capsys, "construct", "--kind", "blowup", "--k", "2", "--l", "2", "--out", str(jout))
    assert code == 0
    doc = json.loads(jout.read_text())
    assert doc["type"] == "digraph" and doc["n"] == 4

    code, _, err = run(capsys, "construct", "--kind", "blowup", "--n", "3", "--out", str(out))
    assert code == 2 and "--k" in err


def test_construct_ring_prints_matching(capsys, tmp_path):
    out = tmp_path / "h2.txt"
    code, text, _ = run(capsys, "construct", "--kind", "thm2h", "--n", "2", "--out", str(out))
    assert code == 0
    assert text.startswith("m0:")
    pairs = [tuple(map(int, tok.split("-"))) for tok in text.split()[1:]]
    g = parse_graph(out.read_text())
    from permatch import is_perfect_matching

    assert is_perfect_matching(g, pairs)


def test_inject_forward_and_back(capsys, write_graph, schema_loader):
    arcs = [(i, (i + 1) % 8) for i in range(8)] + [(1, 4), (1, 5), (3, 6)]
    text = "digraph 8\n" + "".join(f"{u} {v}\n" for u, v in arcs)
    path = write_graph(text)
    tour = "1,2,3,4,5,6,7,0"
    code, out, _ = run(capsys, "inject", "--input", path, "--vertex", "0", "--perm", tour)
    assert (code, out) == (0, "1,4,2,3,5,6,7,0\n")
    code, out, _ = run(
        capsys, "inject", "--input", path, "--vertex", "0", "--perm", "1,4,2,3,5,6,7,0", "--invert", "--json"
    )
    doc = json.loads(out)
    validate(doc, schema_loader("inject"))
    assert doc["result"] == tour and doc["direction"] == "invert"


def test_inject_not_in_image_exits_1(capsys, write_graph):
    path = write_graph(CYCLE5)
    # fixing everything on a bare cycle inverts fine; an alien permutation does not
    code, _, err = run(
        capsys, "inject", "--input", path, "--vertex", "0", "--perm", "0,1,2,3,4", "--invert"
    )
    assert code == 0
    k4 = "graph 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
    kpath = write_graph(k4)
    code, _, err = run(
        capsys, "inject", "--input", kpath, "--vertex", "0", "--perm", "0,1,2,3", "--invert"
    )
    assert code == 1 and "not in image" in err


def test_verify_commands(capsys, write_graph, schema_loader):
    rpt = schema_loader("report")
    bpath = write_graph(K33)
    code, out, _ = run(capsys, "verify", "--theorem", "1", "--input", bpath, "--json")
    doc = json.loads(out)
    validate(doc, rpt)
    assert code == 0 and doc["holds"]

    code, out, _ = run(capsys, "verify", "--theorem", "6", "--input", bpath)
    assert code == 0 and "HOLDS" in out

    gpath = write_graph("graph 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    code, out, _ = run(capsys, "verify", "--theorem", "2", "--input", gpath, "--json")
    validate(json.loads(out), rpt)
    assert code == 0

    dpath = write_graph(CYCLE5)
    for token in ("3", "injection", "subpermanent", "corollary"):
        code, out, _ = run(capsys, "verify", "--theorem", token, "--input", dpath, "--json")
        doc = json.loads(out)
        validate(doc, rpt)
        assert code == 0 and doc["holds"], token

    code, out, _ = run(capsys, "verify", "--theorem", "blowup", "--k", "2", "--l", "3", "--json")
    validate(json.loads(out), rpt)
    assert code == 0

    # wrong input type for a bipartite statement
    code, _, err = run(capsys, "verify", "--theorem", "1", "--input", dpath)
    assert code == 2
    code, _, err = run(capsys, "verify", "--theorem", "blowup")
    assert code == 2


def test_scan_cli(capsys, tmp_path, schema_loader, monkeypatch):
    out = tmp_path / "records.csv"
    code, text, _ = run(capsys, "scan", "--family", "digraphs", "--n", "3", "--out", str(out))
    doc = json.loads(text)
    validate(doc, schema_loader("scan"))
    assert code == 0 and doc["graphs"] == 64
    assert out.exists()

    monkeypatch.setenv("PERMATCH_THREADS", "2")
    out2 = tmp_path / "records2.csv"
    code, text, _ = run(
        capsys,
        "scan", "--family", "sampled-undirected", "--n", "6", "--samples", "12",
        "--q", "0.5", "--seed", "3", "--out", str(out2),
    )
    doc = json.loads(text)
    validate(doc, schema_loader("scan"))
    assert code == 0 and doc["samples"] == 12


def test_mc_cli(capsys, schema_loader):
    code, out, _ = run(
        capsys, "mc", "--model", "digraph", "--n", "5", "--q", "0.5",
        "--samples", "12", "--seed", "1", "--json",
    )
    doc = json.loads(out)
    validate(doc, schema_loader("mc"))
    assert code == 0 and doc["samples"] == 12
    code, out, _ = run(
        capsys, "mc", "--model", "graph", "--n", "5", "--q", "1/2", "--samples", "5", "--seed", "1"
    )
    assert code == 0 and out.startswith("samples=5 mean=")


def test_expect_cli(capsys, schema_loader):
    code, out, _ = run(capsys, "expect", "--n", "4", "--m", "6")
    assert code == 0
    assert out.splitlines()[0] == "expected derangements: 3/11 (0.272727272727)"
    code, out, _ = run(capsys, "expect", "--n", "4", "--m", "6", "--json")
    doc = json.loads(out)
    validate(doc, schema_loader("expect"))
    assert doc["expected_derangements"]["numerator"] == 3
    code, _, _ = run(capsys, "expect", "--n", "3", "--m", "9")
    assert code == 2  # only 6 slots on 3 vertices
