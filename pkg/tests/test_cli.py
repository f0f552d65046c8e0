import io
import json
import subprocess
import sys

import pytest

from torcomb.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_describe_pentagon_json():
    code, out, _ = call("describe", "--polygon", "1,1,1,1,1", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["f"] == [1, 5, 5] and rep["h"] == [1, 3, 1]
    assert rep["chromatic_number"] == 3 and rep["h_closed_form_agrees"]
    assert len(rep["minimal_non_faces"]) == 5


def test_buchstaber_json():
    code, out, _ = call("buchstaber", "--polygon", "[2,1,2,1,1,2,1]", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["s_real"] == 3
    assert rep["s"]["exact"] and rep["s"]["lower"] == 3


def test_betti_csv():
    code, out, _ = call("betti", "--polygon", "1,1,1,1,1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "q,p2,rank"
    assert set(lines[1:]) == {"0,0,1", "-1,4,5", "-2,6,5", "-3,10,1"}


def test_betti_text_grid():
    code, out, _ = call("betti", "--skeleton", "5,2")
    assert code == 0
    assert "q\\2p" in out


def test_cohomology():
    code, out, _ = call("cohomology", "--polygon", "2,2,2", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["conforms"] and rep["additive_rank"] == 8


def test_flip_all():
    code, out, _ = call("flip", "--polygon", "2,1,1,1,1,1,1,1,1", "--pos", "3", "--format", "json")
    assert code == 0
    (entry,) = json.loads(out)["flips"]
    assert entry["flip_type"] == 4 and entry["bistellar_verified"] and entry["h_change_verified"]


def test_convert_table_round_trip():
    code, out, _ = call("convert", "--polygon", "1,1,1,1,1", "--format", "json")
    rep = json.loads(out)
    t = rep["table"]
    code2, out2, _ = call(
        "convert", "--table=" + ",".join(t["a"]) + ":" + ",".join(t["b"]), "--format", "json"
    )
    assert code == code2 == 0
    assert json.loads(out2)["polygon"] == [1, 1, 1, 1, 1]


def test_json_spec_file(tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"m": 4, "maximal_faces": [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]}))
    code, out, _ = call("describe", "--json", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["h"] == [1, 1, 1, 1]


@pytest.mark.parametrize(
    "argv",
    [
        ("describe", "--polygon", "1,1,1,1"),
        ("describe", "--skeleton", "3,5"),
        ("describe", "--table", "0,1"),
        ("cohomology", "--skeleton", "5,2"),
        ("flip", "--polygon", "1,1,1,1,1", "--pos", "7"),
        ("nonsense",),
    ],
)
def test_input_errors(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_caps():
    code, _, err = call("buchstaber", "--skeleton", "13,2")
    assert code == 3 and "allow-large" in err
    code, _, _ = call("betti", "--skeleton", "17,2")
    assert code == 3


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "torcomb.cli", "describe", "--simplex", "2", "--format", "json"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["f"] == [1, 3, 3]
