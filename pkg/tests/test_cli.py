import io

import pytest

from zxflow.circuit import parse_qasm
from zxflow.cli import main
from zxflow.diagram import Diagram
from zxflow.flow import ZXFlow
from zxflow.gallery import clifford_unitary3, two_phase_line, two_phase_line_flow


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    d = tmp_path / "d.json"
    d.write_text(two_phase_line().to_json())
    good = tmp_path / "good.flow.json"
    good.write_text(two_phase_line_flow().to_json())
    bad = tmp_path / "bad.flow.json"
    bad.write_text(two_phase_line_flow(reverse=True).to_json())
    return tmp_path, str(d), str(good), str(bad)


def projector(tmp_path):
    d = Diagram()
    z = d.add_z()
    d.add_wire(d.new_input(), z)
    d.add_wire(d.new_input(), z)
    p = tmp_path / "proj.json"
    p.write_text(d.to_json())
    return str(p)


def test_validate(files):
    _, d, _, _ = files
    assert run("validate", d) == (0, "ok: 2 nodes, 3 wires\n")


def test_flow_find_writes_a_loadable_flow(files):
    tmp, d, _, _ = files
    out = tmp / "found.json"
    code, text = run("flow-find", d, "-o", str(out))
    assert code == 0 and text == "order: 0 1\n"
    assert ZXFlow.from_json(out.read_text()).order == [0, 1]


def test_flow_find_without_a_flow_exits_2(tmp_path):
    assert run("flow-find", projector(tmp_path), "-o", str(tmp_path / "x.json"))[0] == 2


def test_flow_check(files):
    _, d, good, bad = files
    assert run("flow-check", d, good) == (0, "ok\n")
    code, text = run("flow-check", d, bad)
    assert code == 1 and "does not come after" in text
    code, text = run("flow-check", d, good, "--strong")
    assert code == 1 and "not marked strong" in text


def test_focus_reports_nothing_to_do(files):
    tmp, d, good, _ = files
    code, text = run("focus", d, good, "-o", str(tmp / "f.json"))
    assert code == 0 and text == "flows modified: 0, logicals modified: 0\n"


def test_extract_then_verify(files):
    tmp, d, good, _ = files
    qasm = tmp / "c.qasm"
    code, text = run("extract", d, good, "-o", str(qasm))
    assert code == 0 and text.endswith("rz\n")
    assert parse_qasm(qasm.read_text()).count("rz") == 2
    code, text = run("verify", d, str(qasm))
    assert code == 0 and text.startswith("proportional: ")


def test_verify_above_the_cap_exits_3(files):
    tmp, d, good, _ = files
    qasm = tmp / "c.qasm"
    run("extract", d, good, "-o", str(qasm))
    assert run("verify", d, str(qasm), "--cap", "2")[0] == 3


def test_simplify_skeleton_with_log(files):
    tmp, d, good, _ = files
    o, fo, log = tmp / "s.json", tmp / "s.flow.json", tmp / "trace.jsonl"
    code, _ = run("simplify", d, good, "-o", str(o), "-f", str(fo), "--skeleton", "--log", str(log))
    assert code == 0 and o.exists() and fo.exists() and log.read_text()
    assert run("flow-check", str(o), str(fo), "--strong") == (0, "ok\n")


def test_webs_classify(tmp_path, files):
    _, d, _, _ = files
    assert run("webs", d) == (0, "")
    assert run("webs", d, "--semiwebs")[1].count("\n") > 0
    c = tmp_path / "cliff.json"
    c.write_text(clifford_unitary3().to_json())
    code, text = run("webs", str(c), "--classify")
    assert code == 0 and text.count("class=logical") == 6


def test_bad_input_exits_4(tmp_path, files):
    _, d, _, _ = files
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("validate", str(junk))[0] == 4
    assert run("validate", str(tmp_path / "missing.json"))[0] == 4
    assert run("flow-check", d, str(junk))[0] == 4
    assert run("no-such-command")[0] == 4
    assert run("flow-find", d)[0] == 4


def test_gen_corpus_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("ZXFLOW_SEED", "7")
    a, b = tmp_path / "a", tmp_path / "b"
    code, text = run("gen-corpus", str(a), "--size", "5")
    assert code == 0 and text.endswith("seed 7\n")
    run("gen-corpus", str(b), "--size", "5", "--seed", "7")
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir()) and names
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
