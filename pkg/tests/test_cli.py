import io
import json
import subprocess
import sys

import pytest

from k3gw.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_all_pass_json():
    code, out, err = run("verify", "--order", "64", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["order"] == 64
    assert len(doc["checks"]) == 12
    for c in doc["checks"]:
        assert {"id", "description", "paper_equation", "status", "order_certified",
                "first_failing_exponent"} <= set(c)
        assert c["status"] == "pass" and c["first_failing_exponent"] is None
    assert err.count("PASS") == 12


def test_verify_subset_and_csv():
    code, out, _ = run("verify", "--order", "32", "--check", "c3,C12", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("id,status,order_certified")
    assert [l.split(",")[0] for l in lines[1:]] == ["C3", "C12"]


def test_verify_unknown_check_is_usage_error():
    code, _, err = run("verify", "--order", "16", "--check", "C99")
    assert code == 2 and "C99" in err


def test_table_csv():
    code, out, _ = run("table", "--max-e", "4", "--order", "16", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d,e,N1_index1,N1_index2,agree"
    assert lines[1] == "1,1,1,1,true"
    assert lines[2] == "5,2,49440,49440,true"
    assert len(lines) == 5 and all(l.endswith(",true") for l in lines[1:])


def test_table_default_32_rows():
    code, out, _ = run("table")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 32 and all(r["agree"] for r in doc["rows"])
    assert doc["rows"][-1]["d"] == 125


def test_series_g2():
    code, out, _ = run("series", "--name", "G2", "--order", "6")
    doc = json.loads(out)
    assert code == 0
    assert doc == {"name": "g2", "order": 6, "coefficients": ["-1/24", "1", "3", "4", "7", "6", "12"]}


def test_series_family_and_csv():
    code, out, _ = run("series", "--name", "m0", "--order", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,coefficient", "0,1/8", "1,0", "2,27"]


def test_reduce_trr():
    code, out, _ = run("reduce", "--target", "trr", "--family", "s-3f,2f")
    doc = json.loads(out)
    assert code == 0
    assert doc == {"gw1pt": "-2/3", "gw0": "1/9*d^2 - 4/9*d + 4/9", "irreducible": []}


def test_reduce_pf_targets():
    _, out, _ = run("reduce", "--target", "pf-trr2")
    assert json.loads(out)["gw1pt"] == "-2/3"
    _, out, _ = run("reduce", "--target", "pf-trr3")
    doc = json.loads(out)
    assert doc["gw0"] == "1/9*d^2 - 4/9*d + 4/9" and doc["gw1pt"] == "0"


def test_bench_fast():
    code, out, err = run("bench", "--order", "300")
    doc = json.loads(out)
    assert code == 0 and doc["match"] is True
    assert set(doc["spot"]) == {"0", "300"}
    assert "s\n" in err


def test_bench_naive_small():
    code, out, _ = run("bench", "--order", "40", "--algo", "naive", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,coefficient,match"


@pytest.mark.parametrize("argv", [
    ["verify", "--order", "4"],
    ["table", "--max-e", "40", "--order", "64"],
    ["series", "--name", "nope"],
    ["bench", "--algo", "quantum"],
    ["frobnicate"],
    ["series", "--name", "g2", "--order", "-1"],
    [],
])
def test_usage_errors(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_output_is_byte_deterministic():
    a = run("verify", "--order", "24")[1]
    b = run("verify", "--order", "24")[1]
    assert a == b
    assert run("bench", "--order", "64")[1] == run("bench", "--order", "64")[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3gw", "series", "--name", "eta24_inverse", "--order", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"] == ["1", "24", "324", "3200"]
