import csv
import io
import json
import subprocess
import sys

import pytest

from isopower.cli import main
from isopower.config import Config, parse_config_text
from isopower.errors import UsageError

CURVE_D11 = ["5", "1", "0", "0", "0", "1", "1"]
CURVE_ZI = ["5", "1", "0", "0", "0", "1", "0"]


def call(*argv, stdin="", cfg=None):
    out = io.StringIO()
    status = main(list(argv), cfg=cfg or Config(), stdin=io.StringIO(stdin), stdout=out)
    return status, out.getvalue()


def lines(text):
    return [json.loads(line) for line in text.splitlines()]


def test_classify_curve():
    status, out = call("classify-curve", *CURVE_D11)
    assert status == 0
    v = json.loads(out)
    assert (v["verdict"], v["case"], v["q"], v["t"], v["fE"]) == ("YES", "ordinary-Zpi=R", 5, -3, 1)


def test_classify_a_no_curve_with_polynomial_coefficients():
    status, out = call("classify-curve", "3", "2", "0", "0", "0", "1", "0")
    v = json.loads(out)
    assert status == 0 and v["rank4"] is True and v["verdict"] == "YES"
    status, out = call("classify-curve", "3", "2", "0", "0", "0", "0,1", "1")
    assert status == 0 and json.loads(out)["verdict"] == "NO"


def test_decide_with_image():
    status, out = call("decide", *CURVE_ZI, "--image", "--max-rank", "2")
    v = json.loads(out)
    assert status == 0 and v["verdict"] == "NO"
    assert v["image"][0] == {"n": 1, "image": 1, "total": 2}


def test_enumerate_modules_streams_one_object_per_line():
    status, out = call("enumerate-modules", "-16", "1")
    assert status == 0
    assert lines(out) == [{"conductors": [1], "steinitz": [1, 0, 1]},
                          {"conductors": [2], "steinitz": [1, 0, 4]}]
    status, out = call("enumerate-modules", "-60", "2")
    assert len(lines(out)) == 6


def test_csv_output():
    status, out = call("enumerate-modules", "-15", "2", "--format", "csv")
    assert status == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["conductors", "steinitz"]
    assert len(rows) == 3
    assert json.loads(rows[1][0]) == [1, 1]


def test_maximal_scan():
    status, out = call("maximal-scan", "2", "--g", "2")
    recs = lines(out)
    classes = [r for r in recs if r["kind"] == "class"]
    assert status == 0 and len(classes) == 1 and classes[0]["N"] == 9
    assert recs[-1]["kind"] == "summary" and recs[-1]["ok"]


def test_functor_eval():
    status, out = call("functor-eval", *CURVE_D11, "--module", '{"conductors":[1,1],"steinitz":[1,1,3]}',
                       "--m", "1,2", "--l", "2")
    rep = json.loads(out)
    assert status == 0
    assert [c["count"] for c in rep["counts"]] == [81, 729]
    assert all(c["charpoly_route"] == c["count"] for c in rep["counts"])
    assert rep["torsion"]["structure"] == [2, 2, 2, 2]
    assert rep["dim"] == 2 and rep["module"] == {"conductors": [1, 1], "steinitz": [1, 1, 3]}


def test_functor_eval_on_a_smaller_order():
    status, out = call("functor-eval", *CURVE_ZI, "--module", '{"conductors":[1],"steinitz":[1,0,1]}',
                       "--order", "-16", "--m", "1")
    rep = json.loads(out)
    assert status == 0
    assert rep["counts"] == [{"m": 1, "count": 16, "charpoly_route": None, "saturated": False}]


def test_oracle_compare():
    status, out = call("oracle-compare", *CURVE_ZI, "--l", "2", "--r", "1")
    rep = json.loads(out)
    assert status == 0 and rep["agree"] and rep["non_kernel"]


def test_kernel_test_reads_stdin():
    data = {"l": 2, "e": 1, "r": 1, "generators": [[1, 0]]}
    status, out = call("kernel-test", *CURVE_ZI, stdin=json.dumps(data))
    rep = json.loads(out)
    assert status == 0 and rep["order"] == 2 and isinstance(rep["kernel"], bool)
    data["curve"] = {"p": 5, "m": 1, "a": [0, 0, 0, 1, 0]}
    status2, out2 = call("kernel-test", stdin=json.dumps(data))
    assert status2 == 0 and json.loads(out2)["kernel"] == rep["kernel"]


def test_kernel_test_rejects_an_unstable_subgroup():
    data = {"l": 2, "e": 1, "r": 1, "generators": [[1, 0]]}
    status, out = call("kernel-test", *CURVE_D11, stdin=json.dumps(data))
    err = json.loads(out)
    assert status == 1 and set(err) == {"kind", "message", "context"}


@pytest.mark.parametrize("argv,stdin", [
    (["classify-curve", "5", "1", "0", "0", "0", "1"], ""),
    (["classify-curve", "5", "1", "0", "0", "0", "x", "1"], ""),
    (["enumerate-modules", "-16", "0"], ""),
    (["no-such-command"], ""),
    ([], ""),
    (["kernel-test", *CURVE_D11], "not json"),
    (["kernel-test"], '{"l": 2, "e": 1, "r": 1}'),
    (["functor-eval", *CURVE_D11, "--module", "{bad"], ""),
])
def test_usage_errors(argv, stdin):
    status, out = call(*argv, stdin=stdin)
    err = json.loads(out)
    assert status == 1
    assert err["kind"] == UsageError.kind
    assert set(err) == {"kind", "message", "context"}


def test_domain_errors_exit_with_one():
    status, out = call("classify-curve", "5", "1", "0", "0", "0", "0", "0")
    assert status == 1 and json.loads(out)["kind"] == "singular-curve"
    status, out = call("enumerate-modules", "-5", "1")
    assert status == 1


def test_bound_violations_exit_with_two():
    status, out = call("classify-curve", *CURVE_D11, "--bound-q", "3")
    assert status == 2
    assert json.loads(out)["kind"] == "bound-exceeded"
    status, out = call("enumerate-modules", "-1000", "1", "--bound-disc", "100")
    assert status == 2


def test_identical_invocations_give_identical_bytes():
    for argv in (["classify-curve", *CURVE_ZI], ["maximal-scan", "3", "--g", "1"],
                 ["enumerate-modules", "-84", "2"]):
        assert call(*argv) == call(*argv)


def test_config_file_from_the_environment(tmp_path, monkeypatch):
    path = tmp_path / "isopower.cfg"
    path.write_text("# small bounds\nbound_q = 3\n")
    monkeypatch.setenv("ISOPOWER_CONFIG", str(path))
    out = io.StringIO()
    assert main(["classify-curve", *CURVE_D11], stdin=io.StringIO(), stdout=out) == 2


def test_config_parsing():
    cfg = parse_config_text("bound-q = 0x100\nformat=csv\n")
    assert cfg.bound_q == 256 and cfg.format == "csv"
    for bad in ("nonsense", "colour = 3", "bound_q = big", "bound_q = 0"):
        with pytest.raises(UsageError):
            parse_config_text(bad)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "isopower.cli", "enumerate-modules", "-16", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 2
