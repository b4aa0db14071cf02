import json
import logging

import pytest
from click.testing import CliRunner

from exdir.cli import main
from exdir.generators import GENERATORS, random_dregular, two_communities
from exdir.graph import format_edge_list, parse_edge_list


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("EXDIR_LOG", raising=False)
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args])
    return go


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


TWO_K4 = "8 25\n" + "\n".join(
    f"{b + i} {b + j}" for b in (0, 4) for i in range(4) for j in range(4) if i != j) + "\n2 5\n"


def test_generators_sizes():
    assert GENERATORS["bidirected-clique"](4).e_count() == 12
    assert GENERATORS["directed-cycle"](5).e_count() == 5
    assert GENERATORS["dag-path"](5).e_count() == 4
    G = random_dregular(64, 8, 7)
    assert G.e_count() == 64 * 8
    assert all(len(G.out_edges(v)) == 8 and len(G.in_edges(v)) == 8 for v in range(64))
    assert two_communities(20, 4, 3, 1).e_count() == 2 * 10 * 4 + 3


def test_gen_examples(run):
    r = run("gen", "bidirected-clique", 4)
    assert r.exit_code == 0 and parse_edge_list(r.output).e_count() == 12
    r = run("gen", "directed-cycle", 5)
    assert parse_edge_list(r.output).e_count() == 5


def test_gen_deterministic(run):
    run("gen", "random-dregular", "n=64", "d=8", "--seed", 7, "--out", "a.txt")
    run("gen", "random-dregular", "n=64", "d=8", "--seed", 7, "--out", "b.txt")
    a, b = open("a.txt").read(), open("b.txt").read()
    assert a == b and parse_edge_list(a).e_count() == 512
    run("gen", "random-dregular", "n=64", "d=8", "--seed", 8, "--out", "c.txt")
    assert open("c.txt").read() != a


def test_gen_unknown(run):
    assert run("gen", "petersen", 10).exit_code == 2
    assert run("gen", "dag-path", "x").exit_code == 2
    assert run("gen", "dag-path", "5", "6").exit_code == 2


def test_decompose_two_cliques(run):
    write("two.txt", TWO_K4)
    r = run("decompose", "two.txt", "--phi", "1/10", "--oracle", "brute", "--out", "d.json")
    assert r.exit_code == 0, r.output
    assert "clusters: 2" in r.output and "dag: ok" in r.output
    d = json.load(open("d.json"))
    assert [c["vertices"] for c in d["clusters"]] == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert run("verify", "two.txt", "d.json").exit_code == 0


def test_decompose_dag(run):
    write("dag.txt", "0 1\n1 2\n2 3\n")
    r = run("decompose", "dag.txt", "--phi", "1/10", "--out", "d.json")
    assert r.exit_code == 0
    d = json.load(open("d.json"))
    assert [c["vertices"] for c in d["clusters"]] == [[0], [1], [2], [3]]
    assert d["e_r"] == []


def test_decompose_rejects_decimal(run):
    write("two.txt", TWO_K4)
    r = run("decompose", "two.txt", "--phi", "0.1")
    assert r.exit_code == 2 and "rational" in r.output


def test_decompose_missing_file(run):
    assert run("decompose", "nope.txt", "--phi", "1/10").exit_code == 2


def test_decompose_stdout_and_verify_flag(run):
    write("two.txt", TWO_K4)
    r = run("decompose", "two.txt", "--phi", "1/10", "--verify")
    assert r.exit_code == 0
    assert '"params"' in r.output and "PASS dag.order" in r.output


def test_verify_tampered(run):
    text = TWO_K4.replace("\n2 5\n", "\n2 5\n6 1\n").replace("8 25", "8 26")
    write("g.txt", text)
    assert run("decompose", "g.txt", "--phi", "1/10", "--oracle", "brute",
               "--out", "d.json").exit_code == 0
    d = json.load(open("d.json"))
    assert len(d["e_r"]) == 1
    d["e_r"] = []
    write("t1.json", json.dumps(d))
    r = run("verify", "g.txt", "t1.json")
    assert r.exit_code == 1 and "FAIL dag.order" in r.output
    d = json.load(open("d.json"))
    del d["clusters"][0]["witness"]
    write("t2.json", json.dumps(d))
    r = run("verify", "g.txt", "t2.json")
    assert r.exit_code == 1 and "FAIL clusters.witness_present" in r.output
    write("t3.json", "{}")
    assert run("verify", "g.txt", "t3.json").exit_code == 2


def test_verify_json_output(run):
    write("two.txt", TWO_K4)
    run("decompose", "two.txt", "--phi", "1/10", "--out", "d.json")
    r = run("verify", "two.txt", "d.json", "--json")
    assert r.exit_code == 0 and json.loads(r.output)["ok"] is True


def test_prune_empty_stream(run):
    write("g.txt", format_edge_list(random_dregular(16, 4, 1)))
    write("del.txt", "")
    r = run("prune", "g.txt", "del.txt", "--phi", "1/50", "--out", "s.jsonl")
    assert r.exit_code == 0
    lines = open("s.jsonl").read().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["event"] == "init"


def test_prune_stream_with_restarts(run):
    G = random_dregular(40, 4, 3)
    write("g.txt", format_edge_list(G))
    write("del.txt", "\n".join(str(e) for e in range(0, 100, 3)))
    r = run("prune", "g.txt", "del.txt", "--phi", "1/50", "--verify", "--out", "s.jsonl")
    assert r.exit_code == 0, r.output
    assert "restart at deletion" in r.output and "FAIL" not in r.output
    recs = [json.loads(x) for x in open("s.jsonl")]
    assert len(recs) == 1 + 34
    assert all("full" in x for x in recs if x["event"] in ("init", "restart"))


def test_prune_no_restart_exit_code(run):
    G = random_dregular(40, 4, 3)
    write("g.txt", format_edge_list(G))
    write("del.txt", "\n".join(str(e) for e in range(0, 100, 3)))
    assert run("prune", "g.txt", "del.txt", "--phi", "1/50", "--no-restart").exit_code == 3


def test_prune_dead_edge(run):
    write("g.txt", "0 1\n1 2\n2 0\n")
    write("del.txt", "0\n0\n")
    assert run("prune", "g.txt", "del.txt", "--phi", "1/10").exit_code == 2


def test_log_env_override(run, monkeypatch):
    write("two.txt", TWO_K4)
    monkeypatch.setenv("EXDIR_LOG", "debug")
    r = run("--log", "error", "decompose", "two.txt", "--phi", "1/10")
    assert r.exit_code == 0
    assert logging.getLogger("exdir").level == logging.DEBUG
    monkeypatch.setenv("EXDIR_LOG", "loud")
    assert run("decompose", "two.txt", "--phi", "1/10").exit_code == 2
