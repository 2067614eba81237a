import io
import json
from pathlib import Path

import pytest

from parahecke import verify
from parahecke.cli import run
from parahecke.module_library import library
from parahecke.modules import dump_module_spec

MODULES = Path(__file__).resolve().parent.parent / "modules"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split(None, 1) for line in text.splitlines())


def test_describe():
    code, out, err = call("describe")
    f = fields(out)
    assert code == 0
    assert f["config.p"] == "2" and f["generators.count"] == "5"
    assert f["a.strictly_positive"] == "True"
    assert err.startswith("elapsed")


def test_decompose_and_oracle():
    code, out, _ = call("decompose", "--g", "[[1,0],[0,2]]", "--oracle")
    f = fields(out)
    assert code == 0 and f["cosets"] == "2"
    assert {f["coset.0"], f["coset.1"]} == {"[[1,0],[0,2]]", "[[1,1],[0,2]]"}


def test_running_example_verbs():
    assert fields(call("mul", "--x", "T[[2,0],[0,1]]", "--y", "T[[1,0],[0,2]]")[1])["product"] \
        == "2*T[[2,0],[0,2]]"
    assert fields(call("theta", "--x", "T[[1,0],[0,2]]")[1])["theta"] == "2*T[[1,0],[0,2]]"
    f = fields(call("shift", "--x", "T[[1,0],[0,2]]")[1])
    assert f["n"] == "1" and f["shifted"] == "2*T[[2,0],[0,2]]"
    f = fields(call("fraction", "--y", "T[[1,0],[0,2]]")[1])
    assert f["n"] == "1" and f["numerator"] == "T[[2,0],[0,2]]"
    assert fields(call("kernel-test", "--x", "T[[1,0],[0,2]]", "--coeff", "mod:2")[1])["witness"] == "1"
    assert fields(call("kernel-test", "--x", "T[[1,0],[0,2]]")[1])["witness"] == "none"
    f = fields(call("centralizer-test", "--x", "T[[1,0],[0,2]]")[1])
    assert f["commutes"] == "False" == f["structural"]


def test_kv_format():
    code, out, _ = call("describe", "--format", "kv")
    assert code == 0
    assert "config.blocks=1,1" in out.splitlines()


@pytest.mark.parametrize("argv,code", [
    (["decompose", "--g", "[[1,0],[0,1/3]]"], 2),
    (["decompose", "--g", "[[1,0],[0,2]]", "--blocks", "1,x"], 2),
    (["decompose", "--g", "[[1,0],[1,1]]"], 3),
    (["shift", "--x", "T[[1,0],[0,2]]", "--a", "[[1,0],[0,2]]"], 3),
    (["decompose", "--g", "[[1,0],[0,64]]", "--orbit-cap", "5"], 4),
    (["verify", "--suite", "nope"], 3),
    (["module", "analyze", "/nonexistent.json"], 2),
])
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert out == "" and err.startswith("error:")


def test_bad_arguments_exit_2():
    assert call("decompose")[0] == 2
    assert call("frobnicate")[0] == 2


def test_verify_failure_exit_5(monkeypatch):
    def broken(ctx, rnd):
        return 1, ["deliberate"]
    monkeypatch.setitem(verify._REGISTRY, "exact", [broken])
    code, out, _ = call("verify", "--suite", "exact")
    assert code == 5
    assert "FAIL" in fields(out)["property.exact.broken"]


def test_verify_suite_passes():
    code, out, _ = call("verify", "--suite", "levi,hecke", "--cases", "5")
    assert code == 0 and "failed=0" in out


def test_module_analyze(tmp_path):
    spec = next(s for s in library() if s.name == "pull-jordan-mod2")
    path = tmp_path / "m.json"
    path.write_text(dump_module_spec(spec))
    code, out, _ = call("module", "analyze", str(path))
    f = fields(out)
    assert code == 0
    assert f["consistency"] == "ok" and f["descent"] == "True"
    assert f["radical.size"] == "1"
    assert f["induce.1"] == "T[[1/2,0],[0,1]] -> [[1,1],[0,1]] n=1"


def test_module_analyze_inconsistent(tmp_path):
    doc = json.loads(dump_module_spec(library()[0]))
    for item in doc["assignments"]:
        item["matrix"] = [[1]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert call("module", "analyze", str(path))[0] == 3


@pytest.mark.parametrize("path", sorted(MODULES.glob("*.json")), ids=lambda p: p.name)
def test_shipped_modules(path):
    code, out, _ = call("module", "analyze", str(path))
    assert code == 0 and fields(out)["radical.independent_of_a"] == "True"


def test_image_experiment():
    code, out, _ = call("image", "--bound", "1")
    f = fields(out)
    assert code == 0
    assert f["elementary_divisors"] == "1,1,1,1,1,1,2,2,4" and f["torsion_primes"] == "2"
    assert call("image", "--bound", "-1")[0] == 3
