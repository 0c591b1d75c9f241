import io as _io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from selcat import io
from selcat.cli import run
from selcat.numbering import Horizon
from selcat.sequences import Status, check_selector

DEMO = Path(__file__).resolve().parents[1] / "demos" / "scenarios"


def invoke(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def test_encode_interval(tmp_path):
    p = write(tmp_path, {"kind": "interval", "horizon": {"stages": 8, "elements": 3},
                         "payload": {"U": [2], "V": [1, 2]}})
    code, out, err = invoke("encode-interval", p)
    assert code == 0
    assert json.loads(out)["artifacts"]["C"] == [[0], [0, 1], [1]]
    assert "PASS" in err


def test_suite_default_horizon():
    code, out, _ = invoke("suite", "--seed", 0, "--horizon-stages", 64, "--horizon-elements", 32)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["horizon"] == {"stages": 64, "elements": 32}


@pytest.mark.parametrize("limit, expected", [(1, [[0, 0]]), (0, [])])
def test_approx_one_column(tmp_path, limit, expected):
    p = write(tmp_path, {"kind": "approx", "payload": {"table": {"rows": [[0], [0], [limit]]}, "n": 1}})
    code, out, _ = invoke("approx", p)
    assert code == 0
    assert json.loads(out)["artifacts"]["F_tilde"] == expected


def test_malformed_file_reports_location(tmp_path):
    p = write(tmp_path, '{"kind": "interval",\n "payload": {"U": [2], "V": [1,}\n')
    code, out, _ = invoke("encode-interval", p)
    assert code == 2
    assert json.loads(out)["error"]["message"].endswith("2:32: Expecting value")


@pytest.mark.parametrize("payload", [
    {"U": [2, 5], "V": [1, 2]},
    {"U": [2]},
    {"U": "two", "V": [2]},
])
def test_bad_payloads_exit_two(tmp_path, payload):
    p = write(tmp_path, {"kind": "interval", "horizon": {"stages": 8, "elements": 6},
                         "payload": payload})
    assert invoke("encode-interval", p)[0] == 2


def test_kind_mismatch(tmp_path):
    p = write(tmp_path, {"kind": "chain", "payload": {"sources": [[1]]}})
    code, out, _ = invoke("encode-interval", p)
    assert code == 2 and "expects kind" in json.loads(out)["error"]["message"]


def test_missing_scenario():
    assert invoke("hat")[0] == 2


def test_horizon_error_surfaces(tmp_path):
    doc = {"kind": "sequence", "payload": {"sequence": [{"A": [0], "B": [0]}]}}
    p = write(tmp_path, doc)
    assert invoke("hat", p, "--horizon-stages", 1)[0] == 2


def test_counterexample_replays(tmp_path):
    seq = [{"A": [1, 2], "B": [1]}, {"A": [4], "B": []}]
    doc = {"kind": "sequence", "horizon": {"stages": 8, "elements": 6},
           "payload": {"sequence": seq, "selector": [1, 4]}}
    code, out, _ = invoke("check-selector", write(tmp_path, doc))
    report = json.loads(out)
    assert code == 1
    bad = report["checks"][0]["counterexample"]
    assert [b["index"] for b in bad] == [0]
    again = check_selector(io.selector_from_json([1, 4]), io.sequence_from_json(seq), Horizon(8, 6))
    assert again[0].status is Status.VIOLATED and again[0].witness == bad[0]["witness"]


def test_bare_payload_accepted(tmp_path):
    p = write(tmp_path, {"U": [], "V": [0]})
    assert invoke("encode-interval", p, "--horizon-elements", 2)[0] == 0


@pytest.mark.parametrize("command, name, code", [
    ("check-selector", "sequence", 0),
    ("hat", "sequence", 0),
    ("normalize", "sequence", 0),
    ("compile-structure", "structure", 0),
    ("extract-generic", "generic", 0),
    ("extract-generic", "generic_bad", 1),
    ("build-chain", "chain", 0),
    ("approx", "approx", 0),
])
def test_demo_scenarios(command, name, code):
    got, out, _ = invoke(command, DEMO / f"{name}.json")
    assert got == code
    assert json.loads(out)["command"] == command


def test_reports_are_byte_identical():
    a = invoke("compile-structure", DEMO / "structure.json")[1]
    b = invoke("compile-structure", DEMO / "structure.json")[1]
    assert a == b


def test_timing_is_opt_in():
    _, plain, _ = invoke("build-chain", DEMO / "chain.json")
    _, timed, _ = invoke("build-chain", DEMO / "chain.json", "--timing")
    assert "timing" not in json.loads(plain)
    assert "seconds" in json.loads(timed)["timing"]


def test_summary_format():
    code, out, err = invoke("approx", DEMO / "approx.json", "--format", "summary")
    assert code == 0 and out.startswith("approx: PASS") and err == ""


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "selcat", "hat", str(DEMO / "sequence.json"),
                           "--format", "summary"], capture_output=True, text=True)
    assert proc.returncode == 0 and "hat: PASS" in proc.stdout
