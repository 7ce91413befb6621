import io
import json

import pytest

from finspan import bispan as bs
from finspan import docs
from finspan import spancat as sc
from finspan.cli import main
from finspan.groupoid import GroupoidMap
from finspan.gset import GSet, GSetMap

from conftest import group


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stream=buf)
    return code, buf.getvalue()


def _table(text):
    return [line.split(",") for line in text.splitlines() if not line.startswith("#")]


def test_marks_table_for_s2():
    code, out = run("tambara", "marks", "--group", "S2")
    assert code == 0
    rows = _table(out)
    assert len(rows[0]) - 1 == 2
    assert rows[1][1:] == ["2", "1"] and rows[2][1:] == ["0", "1"]
    assert out.startswith("# finspan") and "seed=0" in out


def test_marks_doc_output():
    code, out = run("tambara", "marks", "--group", "S3", "--format", "doc")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "report/1" and doc["result"]["rank"] == 4


def test_marks_of_element():
    code, out = run("tambara", "marks", "--group", "C2", "--element", "1,3")
    assert code == 0
    assert _table(out)[1] == ["marks", "5", "3"]


def test_norm_command():
    code, out = run("tambara", "norm", "--group", "C2", "--subgroup", "e", "--element", "3")
    assert code == 0
    rows = _table(out)
    assert rows[1] == ["coefficients", "3", "3"]
    assert ["effective cross-check", "agrees"] in rows


def test_gset_orbits_and_sigma():
    code, out = run("gset", "orbits", "--group", "S3", "--gset", "free+2*pt+H2")
    assert code == 0
    assert ["orbit_counts", "1 0 1 2"] in _table(out)
    code, out = run("gset", "sigma", "--group", "S3", "--max-degree", "4")
    assert code == 0
    assert [r[1] for r in _table(out)[1:]] == ["1", "1", "2", "3", "4"]


def test_gset_depprod(tmp_path):
    G = group("C2")
    B = GSet.regular(G)
    A = GSet.from_classes(G, [2, 0])
    m, n = tmp_path / "m.json", tmp_path / "n.json"
    docs.write(str(m), GSetMap(A, B, [0, 1, 0, 1]))
    docs.write(str(n), GSetMap.to_point(B))
    code, out = run("gset", "depprod", str(m), str(n), "--verify", "2")
    assert code == 0
    rows = _table(out)
    assert ["Y points", "4"] in rows and ["Y orbit_counts", "1 2"] in rows


def test_groupoid_commands(tmp_path):
    code, out = run("groupoid", "pullback", "--bg", "C3")
    assert code == 0
    rows = _table(out)
    assert ["objects", "3"] in rows and ["discrete", "True"] in rows
    f = GroupoidMap.action_projection(GSet.regular(group("C2")))
    p = tmp_path / "f.json"
    docs.write(str(p), f)
    code, out = run("groupoid", "pullback", str(p), str(p))
    assert code == 0 and ["universal property", "pass"] in _table(out)
    code, out = run("groupoid", "factor", str(p))
    assert code == 0 and ["m faithful", "True"] in _table(out)


def test_span_commands(tmp_path):
    G = group("C2")
    spec = sc.gset_triple(G)
    R = GSet.regular(G)
    s = sc.Span(GSetMap.to_point(R), GSetMap.identity(R), spec)
    t = sc.Span(GSetMap.identity(R), GSetMap.to_point(R), spec)
    ps, pt = tmp_path / "s.json", tmp_path / "t.json"
    docs.write(str(ps), s)
    docs.write(str(pt), t)
    code, out = run("span", "compose", str(ps), str(pt), "--format", "doc")
    assert code == 0
    c = docs.loads(out)
    assert c.apex.size == 2
    code, out = run("span", "factor", str(ps))
    assert code == 0 and ["recomposes", "True"] in _table(out)
    code, out = run("span", "homs", "--group", "C2", "--source", "pt", "--target", "pt",
                    "--cap", "2")
    assert code == 0 and ["total", "4"] in _table(out)


def test_bispan_compose_is_idempotent(tmp_path):
    G = group("C2")
    spec = bs.bispan_triple(G)
    R = GSet.regular(G)
    u = bs.transfer(GSetMap.to_point(GSet.from_classes(G, [0, 2])), spec)
    v = bs.norm(GSetMap.to_point(R), spec)
    pu, pv = tmp_path / "u.json", tmp_path / "v.json"
    docs.write(str(pu), u)
    docs.write(str(pv), bs.compose_bispans(bs.restriction(GSetMap.to_point(R), spec), v))
    first = run("bispan", "compose", str(pu), str(pv), "--format", "doc")
    second = run("bispan", "compose", str(pu), str(pv), "--format", "doc", "--strategy",
                 "random", "--seed", "7")
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    out = tmp_path / "w.json"
    out.write_text(first[1])
    assert docs.dumps(docs.dump(docs.read(str(out)))) == first[1]


def test_check_tambara_exit_codes():
    assert run("bispan", "check-tambara", "--group", "C2", "--cap", "1")[0] == 0
    assert run("bispan", "check-tambara", "--group", "C2", "--cap", "1",
               "--oracle", "constant", "--confluence")[0] == 0
    code, out = run("bispan", "check-tambara", "--group", "C2", "--cap", "1",
                    "--oracle", "corrupted")
    assert code == 1


def test_tambara_eval(tmp_path):
    G = group("C2")
    spec = bs.bispan_triple(G)
    R = GSet.regular(G)
    b = bs.norm(GSetMap.to_point(R), spec)
    p = tmp_path / "b.json"
    docs.write(str(p), b)
    code, out = run("tambara", "eval", str(p), "--value", "3")
    assert code == 0
    assert _table(out)[1] == ["0", "2", "3 3"]


def test_free_commands():
    code, out = run("free", "check", "--group", "C2", "--gset", "free+pt", "--max-degree", "2")
    assert code == 0 and ["verdict", "pass"] in _table(out)
    code, out = run("free", "census", "--group", "S3", "--max-degree", "2")
    assert code == 0
    assert _table(out)[1:4] == [["0", "1", "4"], ["1", "1", "4"], ["2", "2", "6"]]


def test_verify_subset():
    code, out = run("verify", "all", "--battery", "small", "--only", "1,6")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("[PASS]")) == 2


@pytest.mark.parametrize("argv", [
    ["tambara", "marks", "--group", "Q8"],
    ["gset", "orbits", "--group", "C2", "--gset", "banana"],
    ["span", "compose", "/nonexistent/a.json", "/nonexistent/b.json"],
    ["tambara", "norm", "--group", "S3", "--subgroup", "0,1,2", "--element", "1"],
    ["tambara", "marks", "--group", "C2", "--element", "1"],
    ["gset", "sigma", "--group", "C2", "--max-degree", "-1"],
])
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_malformed_document_exit_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"schema": "gsetmap/1"}')
    assert run("groupoid", "factor", str(p))[0] == 2
    p.write_text("not json")
    assert run("groupoid", "factor", str(p))[0] == 2


def test_capacity_exit_3():
    assert run("free", "check", "--group", "C2", "--gset", "4*free", "--max-degree", "3",
               "--cap-sections", "100")[0] == 3
    assert run("groupoid", "pullback", "--bg", "S3", "--cap-objects", "2")[0] == 3


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("FINSPAN_CAP_OBJECTS", "2")
    assert run("groupoid", "pullback", "--bg", "S3")[0] == 3
    assert run("groupoid", "pullback", "--bg", "S3", "--cap-objects", "100")[0] == 0
    monkeypatch.setenv("FINSPAN_SEED", "11")
    assert "seed=11" in run("tambara", "marks", "--group", "C2")[1]


def test_output_is_deterministic():
    a = run("free", "census", "--group", "C2", "--max-degree", "2", "--format", "doc")
    b = run("free", "census", "--group", "C2", "--max-degree", "2", "--format", "doc")
    assert a == b


def test_usage_error():
    assert run()[0] == 2
    assert run("--version")[0] == 0


def test_common_flags_before_and_after_subcommand():
    assert "seed=5" in run("--seed", "5", "tambara", "marks", "--group", "C2")[1]
    assert "seed=6" in run("tambara", "marks", "--group", "C2", "--seed", "6")[1]
    assert run("--format", "doc", "tambara", "marks", "--group", "C2")[1].startswith("{")
