import math

import pytest

import blowup_lab as bl


def test_params_and_profile():
    mp = bl.make_params(3.0, 2)
    assert mp.M_floor == 5
    assert mp.kappa == pytest.approx(2 ** -0.5)
    f, e = bl.profile(0.0, 1.0, mp)
    assert f == pytest.approx(mp.kappa)
    assert e == pytest.approx(0.5)


def test_hermite_and_kernel():
    s, k = 10.0, 2
    beta = bl.scale_factor(s, k) ** -2
    assert bl.hermite(2, 0.0, s, k) == pytest.approx(-2 * beta)
    assert bl.hermite_norm2(3, beta) == pytest.approx(beta ** 3 * 2 ** 3 * 6)
    assert bl.mode_multiplier(4, 1.0, 2.0, 2) == pytest.approx(1.0)
    assert bl.mode_multiplier(0, 1.0, 2.0, 2) == pytest.approx(math.e)
    assert bl.kernel(0.0, 0.0, 2.0, 1.0, 2) > 0


def test_identity_suites():
    sp = bl.spectral_suite([2], [2.0, 10.0], 8)
    assert sp["orthogonality"] < 1e-8 and sp["jordan"] < 1e-8 and sp["product"] < 1e-10
    me = bl.mehler_suite(2, 2.0, [0.5, 1.0], 6)
    assert me["multiplier"] < 1e-5 and me["mass"] < 1e-8


def test_config_round_trip_and_errors():
    cfg = bl.normalize_config({"depth": 12})
    assert cfg["depth"] == 12 and set(cfg) == set(bl.config_keys())
    with pytest.raises(bl.ConfigError, match="unknown key"):
        bl.normalize_config({"bogus": 1})


def test_simulate_is_deterministic():
    cfg = {"horizon": 0.5, "d": [0.01, 0.0, 0.02, 0.0]}
    a, b = bl.simulate(cfg), bl.simulate(cfg)
    assert a == b
    assert a[0]["s"] == 20.0 and a[-1]["s"] == pytest.approx(20.5)


def test_linear_shooting_finds_origin():
    cert = bl.shoot({"linear_only": True, "box_center": [0.3, -0.2, 0.1, 0.05],
                     "box_halfwidth": 1.0, "depth": 30})
    assert max(abs(v) for v in cert["d_star"]) < 1e-6


def test_blowup_time_and_cli_codes(tmp_path):
    r = bl.blowup_time(0.1)
    assert r["relative_error"] < 1e-2 and r["deterministic"]
    code, log = bl.run("simulate", {"d": [5, 0, 0, 0], "output_dir": str(tmp_path)})
    assert code == 2
    code, _ = bl.run("verify-spectral", {"output_dir": str(tmp_path)})
    assert code == 0
