import json
import math

import pytest

import front_forge as ff


def test_profile_matches_closed_form():
    spec = ff.make_cubic(0.25)
    prof = ff.solve_profile(spec)
    assert abs(prof.c_f - 0.5 / math.sqrt(2.0)) < 1e-9
    for xi in (-5.0, 0.0, 3.0):
        assert abs(prof(xi) - 1.0 / (1.0 + math.exp(xi / math.sqrt(2.0)))) < 1e-8
    k = ff.profile_constants(prof, spec)
    assert k["k_min"] > 0.0


def test_surface_checks_pass_on_pair():
    inst = ff.make_instance(0.25, 2, [{"nu": [1.0], "theta": math.pi / 4}, {"nu": [-1.0], "theta": math.pi / 4}])
    assert inst.n == 2
    checks = ff.surface_check(inst, samples=200)
    assert checks and all(c["pass"] for c in checks if not c["informational"])


def test_single_front_supersolution_is_exact():
    inst = ff.make_instance(0.25, 2, [{"nu": [1.0], "theta": math.pi / 2}])
    checks = {c["name"]: c for c in ff.verify_supersolution(inst, samples=200)}
    assert checks["super.planar_exact"]["measured"][0] <= 1e-9


def test_config_errors_carry_the_key_path():
    resolved = json.loads(ff.resolve_config("{}"))
    assert resolved["arrangement"]["fronts"][0]["nu"] == [1.0]
    with pytest.raises(ValueError, match="/grid/foo"):
        ff.resolve_config('{"grid": {"foo": 1}}')


def test_cli_profile(tmp_path):
    code, out, _ = ff.run_cli(["profile", "--theta", "0.25", "--out", str(tmp_path)])
    assert code == 0
    assert abs(json.loads(out)["c_f"] - 0.3535534) < 1e-6
    assert (tmp_path / "manifest.json").exists()
