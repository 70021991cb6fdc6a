import numpy as np
import pytest

from cranfso import config
from cranfso.errors import ConfigError


def test_defaults_convert_to_linear(desk):
    s, g = desk.system, desk.geometry
    assert s.P_k[0] == pytest.approx(10 ** (16 / 10) * 1e-3)
    assert s.P_bar_m[0] == pytest.approx(10 ** (33 / 10) * 1e-3)
    assert s.W_rf == 40e6 and s.W_fso == 1e9 and s.f_s == 40e6
    # -114 dBm/MHz over 40 MHz plus a 5 dB noise figure
    assert s.sigma2 == pytest.approx(10 ** ((-114 + 10 * np.log10(40) + 5) / 10) * 1e-3)
    assert g.Omega == pytest.approx(10 ** 0.6)
    assert g.lambda_rf == pytest.approx(85.7e-3) and g.r_aperture == pytest.approx(0.1)
    assert (s.K, s.M, s.N, s.L, desk.trials) == (4, 2, 2, 8, 100)


def test_full_scale_profile():
    cfg = config.build_config(full_scale=True)
    assert (cfg.system.K, cfg.system.N, cfg.system.L, cfg.trials) == (8, 8, 64, 1000)


def test_parse_text_and_overrides():
    vals = config.parse_config_text("# fog\nkappa_db_per_m = 125e-3  # heavy\nK = 3\n")
    assert vals == {"kappa_db_per_m": 125e-3, "k": 3}
    cfg = config.build_config(vals)
    assert cfg.geometry.kappa == 125e-3 and cfg.system.K == 3 and len(cfg.system.P_k) == 3


def test_unknown_key_and_bad_value():
    with pytest.raises(ConfigError, match="config.bogus"):
        config.parse_config_text("bogus = 1\n")
    with pytest.raises(ConfigError, match="config.w_rf_mhz"):
        config.parse_config_text("w_rf_mhz = wide\n")
    with pytest.raises(ConfigError, match="config.k"):
        config.parse_config_text("k = 2.5\n")


def test_invalid_values_report_field():
    with pytest.raises(ConfigError, match="config.d_fr_m"):
        config.build_config({"d_fr_m": -1.0})
    with pytest.raises(ConfigError, match="geometry.nu"):
        config.build_config({"nu": -1.0})
    with pytest.raises(ConfigError, match="system.M"):
        config.build_config({"m": 0})
    with pytest.raises(ConfigError, match="trials"):
        config.build_config({"trials": 0})


def test_file_roundtrip(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(config.default_config_text())
    cfg = config.load_config(p)
    assert cfg.values == config.DEFAULTS
    with pytest.raises(ConfigError, match="cannot read"):
        config.load_config(tmp_path / "missing.cfg")
