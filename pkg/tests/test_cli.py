import json

import pytest

from rainbow_forge.cli import main
from rainbow_forge.explorer import (
    ExplorerJob,
    IsoDedup,
    eval_linear,
    matchings_of_size,
    parse_statement,
    run,
)
from rainbow_forge.graph_core import validate_matching
from rainbow_forge.io import parse_instance


def gen(tmp_path, *argv, name="inst.json"):
    out = tmp_path / name
    assert main(["gen", *argv, "--out", str(out)]) == 0
    return out


def solve(tmp_path, inst, *argv):
    out = tmp_path / "result.json"
    code = main(["solve", str(inst), *argv, "--out", str(out)])
    return code, json.loads(out.read_text())


def test_gen_sharpness(tmp_path):
    inst = parse_instance(json.loads(gen(tmp_path, "sharpness", "--n", "4").read_text()))
    assert len(inst.labels) == 8 and len(inst.colors) == 7
    assert all(len(c) == 4 and validate_matching(c) for c in inst.colors)


def test_gen_sharpness_rejects_odd(tmp_path, capsys):
    assert main(["gen", "sharpness", "--n", "3"]) == 1
    assert "error" in capsys.readouterr().err


def test_gen_badge(tmp_path):
    data = json.loads(gen(tmp_path, "badge", "--host", "xy:3,yz:2").read_text())
    inst = parse_instance(data)
    assert len(inst.colors) == 10 and len(inst.matching) == 5
    assert data["vertices"][:3] == ["x", "y", "z"]


def test_gen_latin(tmp_path):
    inst = parse_instance(json.loads(
        gen(tmp_path, "latin", "--order", "3", "--square", "123/231/312").read_text()))
    assert len(inst.colors) == 3
    assert all(len(c) == 3 and validate_matching(c) for c in inst.colors)


@pytest.mark.parametrize("kind", [["origamistrip", "--m", "3"], ["badge", "--host", "x-y:2"],
                                  ["sharpness", "--n", "2"], ["random", "--n", "3"],
                                  ["random", "--n", "3", "--bipartite", "--colors", "5"],
                                  ["latin", "--order", "4"]])
def test_gen_round_trip(tmp_path, kind):
    text = gen(tmp_path, *kind).read_text()
    assert json.dumps(parse_instance(json.loads(text)).to_json(), sort_keys=True) + "\n" == text


def test_solve_main_random(tmp_path):
    inst = gen(tmp_path, "random", "--n", "3", "--seed", "7")
    code, res = solve(tmp_path, inst, "--verify", "--trace")
    assert code == 0 and res["verified"] is True
    assert len(res["result"]["matching"]) == 3
    assert res["trace"] and res["permutation"]


def test_solve_refuses_small_n(tmp_path):
    inst = gen(tmp_path, "sharpness", "--n", "2")
    code, res = solve(tmp_path, inst)
    assert code == 1 and "error" in res
    code, res = solve(tmp_path, inst, "--verify")
    assert code == 2 and res["result"] == {"kind": "none", "size": 2}


def test_solve_engine_certificate(tmp_path):
    inst = gen(tmp_path, "badge", "--host", "xy:3,yz:2")
    code, res = solve(tmp_path, inst, "--mode", "aap-engine", "--verify", "--trace")
    assert code == 2
    assert res["result"]["kind"] == "certificate" and res["verified"] is True
    assert sorted(res["result"]["certificate"]["weights"]) == [2, 3]
    assert any("==" in line for line in res["diagram"])


def test_solve_cooperative(tmp_path):
    inst = gen(tmp_path, "random", "--n", "2", "--colors", "5", "--seed", "3")
    code, res = solve(tmp_path, inst, "--mode", "cooperative", "--n", "2", "--t", "1", "--verify")
    assert code in (0, 1)
    if code == 0:
        assert res["verified"] is True
    else:
        assert res["violating_colors"]


def test_solve_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a"], "colors": [[["a", "q"]]]}')
    assert main(["solve", str(bad)]) == 1


def test_solve_budget_exhausted(tmp_path):
    inst = gen(tmp_path, "sharpness", "--n", "4")
    code, res = solve(tmp_path, inst, "--verify", "--budget", "10")
    assert code == 3 and "error" in res


def test_runs_are_byte_identical(tmp_path):
    a = gen(tmp_path, "random", "--n", "4", "--seed", "11", name="a.json").read_bytes()
    b = gen(tmp_path, "random", "--n", "4", "--seed", "11", name="b.json").read_bytes()
    assert a == b


def test_eval_linear():
    assert eval_linear("3n-3+t", 4, 2) == 11
    assert eval_linear("n", 5, 0) == 5
    assert eval_linear("2n-1", 3, 0) == 5
    with pytest.raises(ValueError):
        eval_linear("3m", 1, 1)


def test_parse_statement():
    st = parse_statement("(3n-3+t,t+1,n)->n", 3, 1)
    assert (st.colors, st.union, st.size, st.target) == (7, 2, 3, 3)
    st = parse_statement("(2n-1,n)->n", 2)
    assert (st.colors, st.union, st.size, st.target) == (3, 1, 2, 2)
    with pytest.raises(ValueError):
        parse_statement("2n-1 -> n", 2)


def test_iso_dedup():
    d = IsoDedup()
    assert d.is_new((frozenset({(0, 1)}), frozenset({(2, 3)})))
    assert not d.is_new((frozenset({(4, 5)}), frozenset({(0, 1)})))
    assert d.is_new((frozenset({(0, 1)}), frozenset({(1, 2)})))


def test_matchings_of_size():
    assert len(matchings_of_size([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 2)) == 3


def _summary(records):
    return records[-1]["summary"]


def test_explore_bipartite_has_no_violation():
    job = ExplorerJob("(2n-1,n)->n", n=2, bipartite=True, vertices=8, exhaustive=True)
    s = _summary(list(run(job)))
    assert s["counterexample-candidate"] == 0 and s["instances"] > 0


@pytest.mark.parametrize("statement", ["(2n-1,n)->n", "(3n-3,n)->n"])
def test_explore_finds_k4(statement):
    records = list(run(ExplorerJob(statement, n=2, vertices=4, exhaustive=True)))
    bad = [r for r in records if r.get("status") == "counterexample-candidate"]
    assert len(bad) == 1
    assert sorted(map(tuple, (map(tuple, c) for c in bad[0]["colors"]))) == [
        (("0", "1"), ("2", "3")), (("0", "2"), ("1", "3")), (("0", "3"), ("1", "2"))]


def test_explore_cooperative_k4_with_empty_colour():
    records = list(run(ExplorerJob("(3n-3+t,t+1,n)->n", n=2, t=1, vertices=4, exhaustive=True)))
    bad = [r for r in records if r.get("status") == "counterexample-candidate"]
    assert bad and all(sum(1 for c in r["colors"] if not c) == 1 for r in bad)


def test_explore_cli_is_deterministic(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.jsonl"
        assert main(["explore", "--statement", "(2n-1,n)->n", "--n", "3", "--samples", "30",
                     "--seed", "5", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b'"summary"' in outs[0]


def test_explore_workers_match_serial(tmp_path):
    job = {"statement": "(2n-1,n)->n", "n": 2, "samples": 40, "seed": 1}
    serial = list(run(ExplorerJob(**job)))
    pooled = list(run(ExplorerJob(**job, workers=2)))
    assert serial == pooled


def test_explore_vertex_cap():
    with pytest.raises(ValueError):
        list(run(ExplorerJob("(2n-1,n)->n", n=2, vertices=12, exhaustive=True)))
