from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from swmod2.cli import main, parse
from swmod2.swspin import validate

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj) -> Path:
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def test_compute_k3(capsys):
    code, out, _ = run(capsys, "compute", DATA / "k3.json")
    assert code == 0
    assert "SW(1) = 1\n" in out
    assert out.endswith("\n")


def test_compute_goldens(capsys):
    for name, line in [("t4.json", "SW(1) = x1^x2^x3^x4"),
                       ("kodaira_thurston.json", "SW(1) = x1^x2^x3"),
                       ("hyperelliptic.json", "SW(1) = x1^x2")]:
        code, out, _ = run(capsys, "compute", DATA / name)
        assert code == 0 and line + "\n" in out


def test_compute_precision_marker(capsys):
    _, out, _ = run(capsys, "compute", DATA / "t4.json")
    assert "SW_Pin2(1) = x1^x2^x3^x4 (mod u^1)" in out


def test_compute_flags(capsys):
    code, out, _ = run(capsys, "compute", DATA / "k3.json", "--m-max", "2", "--j-max", "1")
    assert code == 0 and "SW(x^2) = 0" in out and "SW_Pin2(u^2.q) = 0" in out


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", DATA / "t4.json", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["sw"]["SW(1)"] == "x1^x2^x3^x4"
    assert doc["sw_pin2"]["SW_Pin2(1)"] == {"value": "x1^x2^x3^x4", "exact_below": 1, "exact": False}


def test_obstruct(capsys):
    code, out, _ = run(capsys, "obstruct", DATA / "t4_2e8.json")
    assert code == 0 and "OBSTRUCTED" in out and "NO_" not in out
    code, out, _ = run(capsys, "obstruct", DATA / "k3.json")
    assert code == 0 and "NO_OBSTRUCTION" in out


def test_verify_product(capsys):
    code, out, _ = run(capsys, "verify-product", DATA / "k3.json", DATA / "k3.json")
    assert code == 0 and out.endswith("PASS j=0..3\n")
    code, out2, _ = run(capsys, "verify-product", DATA / "k3_pair.json")
    assert code == 0 and out2 == out


def test_parse_k3():
    doc = parse(str(DATA / "k3.json"))
    assert doc.kind == "manifold"
    md = doc.payload
    assert (md.name, md.b1, md.b_plus, md.sigma) == ("K3", 0, 3, -16)


def test_sigma_minus_8_fails_validation(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"kind": "manifold", "name": "X", "b1": 0, "b_plus": 3, "sigma": -8})
    assert parse(str(path)).payload.sigma == -8
    code, out, _ = run(capsys, "compute", path)
    assert code == 1 and "multiple of 16" in out


@pytest.mark.parametrize("text, fragment", [
    ('{"kind":"manifold","name":"X","b1":4,"b_plus":3,"sigma":0,\n'
     '"quad":[{"i":[1,2,3,4],"c":1},{"i":[1,2,3,4],"c":3}]}', "duplicate quad key"),
    ('{"kind":"manifold","name":"X","b1":0,"b_plus":3,"sigma":-16,"extra":1}', "'extra': unknown field"),
    ('{"kind":"manifold",\n"name":"X",\n"name":"Y"}', "line 3: duplicate key"),
    ('{"kind":"manifold",\n"name":"X",}', "line 2"),
    ('{"kind":"manifold","name":"X","b1":1.5,"b_plus":3,"sigma":0}', "'b1'"),
    ('{"kind":"manifold","name":"X","b1":4,"b_plus":3,"sigma":0,"quad":[{"i":[2,1,3,4],"c":1}]}',
     "strictly increasing"),
    ('{"kind":"manifold","name":"X","b1":2,"b_plus":1,"sigma":0,"q2":[[1,3,1]]}', "'q2[0]"),
    ('{"kind":"thing"}', "'kind'"),
    ('{"kind":"pair","x":{"name":"A","b1":0,"b_plus":3,"sigma":-16}}', "'y': missing"),
])
def test_parse_errors(tmp_path, capsys, text, fragment):
    path = write(tmp_path, "bad.json", text)
    code, out, err = run(capsys, "compute", path)
    assert code == 2
    assert fragment in err and not out


def test_connect_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "connect", DATA / "t4.json", DATA / "kodaira_thurston.json")
    assert code == 0
    path = write(tmp_path, "sum.json", out)
    md = parse(str(path)).payload
    assert (md.b1, md.b_plus, md.sigma) == (7, 5, 0)
    assert not validate(md)
    code, again, _ = run(capsys, "connect", path, DATA / "k3.json")
    assert code == 0 and json.loads(again)["b_plus"] == 8


def test_deterministic_output(capsys):
    runs = [run(capsys, "compute", DATA / "t4.json", "--json")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    cmd = [sys.executable, "-m", "swmod2", "verify-product", str(DATA / "t4.json"), str(DATA / "k3.json"),
           "--j-max", "1"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0].endswith(b"PASS j=0..1\n")


def test_families(capsys):
    code, out, _ = run(capsys, "families", DATA / "w5_family.json")
    assert code == 0
    assert "SW_Pin2(1) = w + u\n" in out and "SW(1) = w\n" in out
    code, out, _ = run(capsys, "families", DATA / "w4_violation.json")
    assert code == 1 and "w_4" in out


def test_twist(tmp_path, capsys):
    doc = {"kind": "manifold", "name": "Z", "b1": 3, "b_plus": 2, "sigma": 0, "q2": [], "q3": [],
           "z2_rank": 4, "z2_quad": [{"i": [1, 2, 3, 4], "c": 1}]}
    path = write(tmp_path, "z.json", doc)
    code, out, _ = run(capsys, "twist", path, "--a", "0,0,0,1")
    assert code == 0
    twisted = json.loads(out)
    assert twisted["q3"] == [[1, 2, 3, 1]]
    code, out, _ = run(capsys, "twist", DATA / "k3.json", "--a", "")
    assert code == 1


def test_wrong_document_kind(capsys):
    code, _, err = run(capsys, "compute", DATA / "w5_family.json")
    assert code == 2 and "manifold" in err
