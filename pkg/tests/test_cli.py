import json
import subprocess
import sys

import pytest

from k3kit.cli import EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, main, run
from k3kit.jsonio import dumps
from k3kit.fibers import FiberConfiguration, fiber
from k3kit.polynomial import Poly
from k3kit.weierstrass import WeierstrassModel
from fixtures import EXAMPLE4


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(dumps(data))
        return str(path)

    nodal = FiberConfiguration(tuple(fiber("I_1") for _ in range(24))).to_json()
    t = Poly([0, 1])
    return {
        "nodal24": write("nodal24.json", nodal),
        "example4": write("example4.json", EXAMPLE4),
        "h": write("h.json", {"gram": [[0, 1], [1, 0]]}),
        "wide": write("wide.json", [[2, 0], [0, -50]]),
        "cusps": write("cusps.json", WeierstrassModel(Poly(), t**12 - 1, 2).to_json()),
        "bad": write("bad.json", {"gram": [[1, 2], [3, 4]]}),
        "write": write,
    }


def test_genus_example(files):
    res = run(["monodromy", "genus", "--group", "full", "--level", "2", "--fibers", files["nodal24"]])
    assert res.exit_code == EXIT_OK
    assert res.payload["chi"] == -18 and res.payload["genus"] == 10


def test_min_count_example():
    res = run(["fibers", "min-count", "--chi", "24", "--max-rank", "17"])
    assert res.payload["min"] == 4 and res.payload["witness"]["chi"] == 24
    res = run(["fibers", "min-count", "--max-rank", "18", "--only-multiplicative"])
    assert res.payload["min"] == 6


def test_lattice_analyze(files):
    res = run(["lattice", "analyze", "--gram", files["example4"], "--square", "0", "--bound", "10"])
    assert res.exit_code == EXIT_OK and res.payload["status"] == "LocallyObstructed"
    assert res.payload["obstruction_place"] == 2
    res = run(["lattice", "analyze", "--gram", files["h"], "--square", "0", "--bound", "2", "--enumerate",
               "--primitive"])
    assert res.payload["witness"] and [1, 0] in res.payload["vectors"]
    res = run(["lattice", "analyze", "--gram", files["wide"], "--square", "0", "--bound", "3"])
    assert res.exit_code == EXIT_INCONCLUSIVE and res.payload["status"] == "UnknownWithinBound"
    res = run(["lattice", "analyze", "--gram", files["wide"], "--square", "0", "--bound", "3", "--escalate"])
    assert res.exit_code == EXIT_OK and res.payload["escalated"]


def test_lattice_standard_and_random():
    res = run(["lattice", "standard", "--name", "K3Lattice"])
    assert res.payload["signature"] == [3, 19] and res.payload["determinant"] == -1
    a = run(["lattice", "random", "--rank", "5", "--seed", "4"]).payload
    assert a == run(["lattice", "random", "--rank", "5", "--seed", "4"]).payload
    assert a["signature"] == [1, 4]


def test_classify(files):
    res = run(["classify", "--gram", files["example4"], "--search-bound", "25"])
    assert res.exit_code == EXIT_OK
    assert res.payload["status"] == "UnknownExceptionalCandidate" and res.payload["rule_id"] == "R7"
    assert run(["classify", "--gram", files["h"]]).payload["rule_id"] == "R2"
    res = run(["classify", "--gram", files["wide"], "--search-bound", "3"])
    assert res.exit_code == EXIT_INCONCLUSIVE and res.payload["rule_id"] == "R0"
    res = run(["classify", "--gram", files["example4"], "--explain"])
    assert res.text.startswith("verdict: UnknownExceptionalCandidate")


def test_invalid_inputs(files, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    for argv in (["nonsense"], ["lattice", "analyze", "--gram", str(broken)],
                 ["classify", "--gram", files["bad"]],
                 ["monodromy", "orbit", "--level", "4", "--point", "1,2,3"],
                 ["monodromy", "orbit", "--level", "4", "--point", "x"],
                 ["torsor", "reduce", "--p", "5", "--t", "10"],
                 ["monodromy", "sweep-m0", "--fibers", files["nodal24"], "--min-level", "5", "--max-level", "3"]):
        res = run(argv)
        assert res.exit_code == EXIT_INVALID, argv
        assert "error" in res.payload
    conflicting = run(["fibers", "min-count", "--max-rank", "17", "--min-fibers", "5", "--max-fibers", "4"])
    assert conflicting.exit_code == EXIT_OK and conflicting.payload["status"] == "unsatisfiable"


def test_group_image_round_trip(files):
    img = run(["monodromy", "image", "--group", "gamma0(4)", "--level", "4"]).payload
    path = files["write"]("img.json", img)
    direct = run(["monodromy", "bound", "--group", "gamma0(4)", "--level", "4"]).payload
    via_file = run(["monodromy", "bound", "--group-file", path, "--level", "4"]).payload
    assert direct == via_file and direct["index"] == 6
    orbit = run(["monodromy", "orbit", "--group-file", path, "--level", "4"]).payload
    assert orbit["size"] == len(orbit["orbit"]) == 2


def test_fiber_config_round_trip(files):
    rec = json.loads(json.dumps(run(["fibers", "min-count", "--max-rank", "18"]).payload["witness"]))
    path = files["write"]("w.json", rec)
    res = run(["monodromy", "genus", "--level", "3", "--fibers", path])
    assert res.exit_code == EXIT_OK
    assert len(res.payload["cycle_types"]) == 3


def test_sweep_and_verdict(files):
    res = run(["monodromy", "sweep-m0", "--fibers", files["nodal24"], "--max-level", "8"])
    assert res.payload["m0"] == 1 and all(r["min_genus"] >= 2 for r in res.payload["rows"])
    v = run(["torsor", "verdict", "--p", "5", "--p0", "3", "--fibers", files["nodal24"]]).payload
    assert v["applicable"] and v["min_genus_at_p"] >= 2
    assert all(set(a) == {"operation", "basis", "result"} for a in v["audit"])


def test_torsor_commands():
    assert run(["torsor", "order", "--degree", "4", "--m", "6"]).payload["jm_class"] == 2
    assert run(["torsor", "transfer", "--t", "12", "--m", "8"]).payload["order"] == 3
    assert run(["torsor", "reduce", "--p", "5", "--t", "3"]).payload["alpha"] == 2


def test_weierstrass_commands(files):
    rep = run(["weierstrass", "analyze", "--model", files["cusps"]]).payload
    assert rep["sum_chi"] == 24 and rep["fiber_counts"] == {"II": 12}
    assert {pl["type"] for pl in rep["places"]} == {"II"}
    assert sum(pl["degree"] for pl in rep["places"]) == 12  # t^12 - 1 splits into 6 rational places
    jm = run(["weierstrass", "jmap", "--model", files["cusps"]]).payload
    assert jm["degree"] == 0
    ib = run(["weierstrass", "index-bound", "--model", files["cusps"], "--index", "1"]).payload
    assert ib["applicable"] is False


def test_fibers_table_and_stream():
    table = run(["fibers", "table", "--max-chi", "10"]).payload
    assert {"II", "I_3", "I_4*", "II*"} <= {row["type"] for row in table}
    assert max(row["chi"] for row in table) == 10
    res = run(["fibers", "enumerate", "--chi", "12", "--max-rank", "8", "--limit", "5"])
    assert len(list(res.stream)) == 5


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "k3kit", *argv], capture_output=True, text=True)


def test_main_is_deterministic(files):
    argv = ["fibers", "enumerate", "--chi", "12", "--max-rank", "6"]
    first, second = _cli(*argv), _cli(*argv)
    assert first.returncode == 0 and first.stdout == second.stdout
    lines = first.stdout.splitlines()
    assert all(json.loads(x)["chi"] == 12 for x in lines)


def test_main_exit_codes(files, capsys):
    assert main(["classify", "--gram", files["bad"]]) == EXIT_INVALID
    assert "k3kit:" in capsys.readouterr().err
    assert main(["classify", "--gram", files["wide"], "--search-bound", "3"]) == EXIT_INCONCLUSIVE
    out = capsys.readouterr().out
    assert json.loads(out)["status"] == "Unknown"
