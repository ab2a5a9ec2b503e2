import json

import jsonschema
import numpy as np
import pytest

from flatfront.cli import main
from flatfront.export import read_csv, report_schema

MINIMAL = """
[potential]
terms = [{kind = "linear-u", coefficient = 1.0}]
[domain]
nu = 33
nv = 33
[run]
lambdas = []
"""


def _run(tmp_path, *args, config=None):
    tmp_path.mkdir(parents=True, exist_ok=True)
    argv = list(args) + ["--out", str(tmp_path / "out")]
    if config is not None:
        path = tmp_path / "run.toml"
        path.write_text(config)
        argv += ["--config", str(path)]
    return main(argv)


def _report(tmp_path):
    return json.loads((tmp_path / "out" / "report.json").read_text())


def test_build_minimal(tmp_path):
    assert _run(tmp_path, "build", config=MINIMAL) == 0
    out = tmp_path / "out"
    assert sorted(p.name for p in out.iterdir()) == ["front_base.obj", "report.json"]
    rep = _report(tmp_path)
    jsonschema.validate(rep, report_schema())
    assert rep["command"] == "build" and rep["lambdas"] == []
    assert all(o is None for o in rep["base"]["orders"].values())


def test_build_is_deterministic(tmp_path):
    assert _run(tmp_path / "a", "build", config=MINIMAL) == 0
    assert _run(tmp_path / "b", "build", config=MINIMAL) == 0
    for name in ("front_base.obj", "report.json"):
        assert (tmp_path / "a/out" / name).read_bytes() == (tmp_path / "b/out" / name).read_bytes()


def test_deform_writes_one_mesh_per_lambda(tmp_path):
    cfg = MINIMAL.replace("lambdas = []", "lambdas = [0, 0.25, 1.0]")
    assert _run(tmp_path, "deform", config=cfg) == 0
    out = tmp_path / "out"
    names = sorted(p.name for p in out.iterdir())
    assert names == ["front_base.obj", "front_lambda_0.25.obj", "front_lambda_0.obj",
                     "front_lambda_1.obj", "report.json"]
    assert (out / "front_lambda_0.obj").read_bytes().replace(b"lambda = 0,", b"") == \
        (out / "front_base.obj").read_bytes().replace(b"lambda = 0,", b"")
    rep = _report(tmp_path)
    jsonschema.validate(rep, report_schema())
    by_lam = {r["lambda"]: r for r in rep["lambdas"]}
    assert by_lam[0.25]["metrics"]["pipeline_agreement"][0] < 1e-6
    assert by_lam[1.0]["branch"] == "supercritical"
    assert by_lam[1.0]["level0"]["flatness_deviation_ambient"] < 1e-3
    assert by_lam[1.0]["curved_flat_parameter"] == {"re": 0.0, "im": 1.0}


def test_lambda_flag_overrides_config(tmp_path):
    assert _run(tmp_path, "deform", "--lambda", "0.75", config=MINIMAL) == 0
    assert [r["lambda"] for r in _report(tmp_path)["lambdas"]] == [0.75]


def test_export_csv(tmp_path):
    assert _run(tmp_path, "export", "--format", "csv", "--model", "raw", config=MINIMAL) == 0
    cols = read_csv(tmp_path / "out" / "front_base.csv")
    assert cols["u"].size == 33 * 33
    assert not (tmp_path / "out" / "report.json").exists()


def test_exit_codes(tmp_path, capsys):
    assert _run(tmp_path, "build", "--lambda", "0.5", config=MINIMAL) == 2
    assert "degenerate parameter" in capsys.readouterr().err
    assert _run(tmp_path, "build", config="[domain]\nnu = = 3\n") == 2
    assert "line 2" in capsys.readouterr().err
    non_harmonic = '[potential]\nterms = [{kind = "monomial", coefficient = 1.0, powers = [2, 0]}]\n'
    assert _run(tmp_path, "validate", config=non_harmonic) == 3
    assert _run(tmp_path, "deform", "--lambda", "300", config=MINIMAL) == 5
    assert "lambda=300" in capsys.readouterr().err
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["build", "--out", str(blocker / "sub")]) == 4
    assert main(["build", "--config", str(tmp_path / "missing.toml")]) == 4


def test_validate_single_level_has_no_orders(tmp_path):
    cfg = MINIMAL.replace("nu = 33", "nu = 17").replace("nv = 33", "nv = 17")
    code = _run(tmp_path, "validate", "--refine", "1", config=cfg)
    rep = _report(tmp_path)
    jsonschema.validate(rep, report_schema())
    assert rep["levels"] == [17]
    checks = [c for crit in rep["criteria"] for c in crit["checks"]]
    orders = [c for c in checks if "order" in c["name"]]
    assert orders and all(c["status"] == "absent" for c in orders)
    assert all(o is None for r in rep["lambdas"] for o in r["orders"].values())
    assert code in (0, 1)
    assert code == (0 if rep["passed"] else 1)
    assert rep["harmonicity"]["convention"] == "laplace"


@pytest.mark.parametrize("model", ["poincare", "raw"])
def test_obj_vertices(tmp_path, model):
    assert _run(tmp_path, "build", "--model", model, config=MINIMAL) == 0
    lines = (tmp_path / "out" / "front_base.obj").read_text().splitlines()
    V = np.array([[float(x) for x in ln.split()[1:]] for ln in lines if ln.startswith("v ")])
    if model == "poincare":
        assert np.all(np.linalg.norm(V, axis=1) < 1)
        assert np.allclose(V[16 * 33 + 16], 0.0)
