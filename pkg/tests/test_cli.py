import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nanorabi import ConfigError, Params, splitting
from nanorabi.cli import RunConfig, main, parse_config, scan_spectra
from nanorabi.report import read_csv


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    p = cfg.params
    assert (p.delta_a, p.delta_c, p.g, p.kappa, p.gamma) == (1.0, 1.0, 0.2, 0.004, 0.004)
    assert (p.xi, p.chi, p.n_fock) == (0.02, 0.01, 10)
    assert cfg.mode == "spectrum-numeric"


def test_comments_and_blank_lines():
    cfg = parse_config("# header\n\nxi = 0.03   # stronger drive\n  g=0.25\n")
    assert cfg.params.xi == 0.03 and cfg.params.g == 0.25


def test_negative_chi_rejected_with_attribution():
    with pytest.raises(ConfigError, match="line 2: chi must be >= 0"):
        parse_config("xi = 0.02\nchi = -0.01\n")
    cfg = parse_config("chi = -0.01\n", {"override_sign_constraints": "true"})
    assert cfg.params.chi == -0.01


def test_flag_overrides_file():
    cfg = parse_config("xi = 0.02\n", {"xi": "0.04"})
    assert cfg.params.xi == 0.04
    with pytest.raises(ConfigError, match="flag --kappa"):
        parse_config("kappa = 0.01\n", {"kappa": "-1"})


@pytest.mark.parametrize("text,match", [
    ("foo = 1\n", "line 1: unknown key 'foo'"),
    ("g = 0.2\nxi = abc\n", "line 2: cannot parse 'abc'"),
    ("n_fock = 2.5\n", "line 1: n_fock must be an integer"),
    ("g 0.2\n", "line 1: expected 'key = value'"),
    ("xi = 1\nxi = 2\n", "line 2: duplicate key"),
    ("scan = foo=1,2\n", "line 1: scan parameter 'foo'"),
    ("mode = scan\n", "scan"),
    ("mode = nope\n", "line 1: mode must be one of"),
    ("omega_a = 2.0\ndelta_a = 1.0\n", "either omega_a or delta_a"),
])
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_bare_frequencies_are_converted_to_detunings():
    cfg = parse_config("omega_a = 2.0\nomega_c = 2.5\nomega_p = 1.0\n")
    assert (cfg.params.delta_a, cfg.params.delta_c) == (1.0, 1.5)


def test_scan_parsing():
    cfg = parse_config("mode = scan\nscan = chi=0,0.02,0.04\n")
    assert cfg.scan_axis == ("chi", (0.0, 0.02, 0.04))
    cfg = parse_config("", {"mode": "scan", "scan": "n_fock=1,5,10"})
    assert cfg.scan_axis == ("n_fock", (1, 5, 10))


run_configs = st.builds(
    RunConfig,
    params=st.builds(Params, delta_a=st.floats(-2, 2), delta_c=st.floats(-2, 2),
                     g=st.floats(0.01, 1), xi=st.floats(0, 0.1), chi=st.floats(0, 0.002),
                     kappa=st.floats(1e-4, 0.1), gamma=st.floats(1e-4, 0.1),
                     n_fock=st.integers(1, 20), omega_p=st.floats(0, 5)),
    mode=st.sampled_from(["spectrum-numeric", "spectrum-analytic", "correlation", "peaks"]),
    kind=st.sampled_from(["numeric", "analytic"]),
    n_omega=st.integers(2, 5000), dt=st.floats(1e-3, 1.0),
    t_max=st.one_of(st.none(), st.floats(1.0, 1e4)),
    output_path=st.one_of(st.none(), st.just("out.csv")),
    workers=st.integers(1, 8),
)


@settings(max_examples=100, deadline=None)
@given(run_configs)
def test_config_round_trip(cfg):
    assert parse_config(cfg.to_text()) == cfg


def test_scan_config_round_trip():
    cfg = parse_config("", {"mode": "scan", "scan": "xi=0,0.02,0.04", "omega_min": "-1.5",
                            "omega_max": "-0.5", "override_sign_constraints": "true",
                            "chi": "-0.001"})
    assert parse_config(cfg.to_text()) == cfg


def test_analytic_spectrum_run(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["--mode", "spectrum-analytic", "--chi", "0", "--out", str(out)]) == 0
    meta, columns, data = read_csv(out.read_text())
    assert columns == ["omega", "s_v"]
    assert data.shape == (2001, 2)
    assert meta["n_peaks"] == "2"
    assert float(meta["splitting"]) == pytest.approx(0.39999, abs=1e-3)
    assert meta["chi"] == "0.0000000000000000e+00"


def test_output_is_byte_reproducible(tmp_path):
    args = ["--mode", "spectrum-numeric", "--n-fock", "3", "--n-omega", "101"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" in a.read_bytes()


def test_correlation_run(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["--mode", "correlation", "--n-fock", "2", "--t-max", "10", "--dt", "0.5",
                 "--xi", "0", "--out", str(out)]) == 0
    meta, columns, data = read_csv(out.read_text())
    assert columns == ["tau", "re", "im"]
    assert data[0, 1] == pytest.approx(1.0, abs=1e-14)
    assert data.shape == (21, 3)


def test_exit_code_diagnostic_for_short_grid(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["--n-fock", "2", "--t-max", "100", "--n-omega", "51", "--out", str(out)]) == 3
    assert "not decayed" in capsys.readouterr().err
    assert out.exists()


def test_peaks_run_prints_key_value_block(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["--mode", "peaks", "--kind", "analytic", "--chi", "0", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "n_peaks: 2" in text
    split = float(text.split("splitting: ")[1].split()[0])
    assert split == pytest.approx(splitting(Params(chi=0.0)), abs=1e-3)
    meta, columns, data = read_csv(out.read_text())
    assert columns == ["peak", "center", "height", "half_width"]
    assert data.shape == (2, 4)


def test_exit_code_config_error(tmp_path, capsys):
    assert main(["--chi", "-0.01"]) == 2
    assert "flag --chi" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "missing.cfg")]) == 2


def test_exit_code_degenerate(capsys):
    args = ["--mode", "spectrum-analytic", "--g", "0.25", "--kappa", "1", "--gamma", "1",
            "--chi", "0"]
    assert main(args) == 4
    assert "degenerate" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("mode = spectrum-analytic\nxi = 0.02\nn_omega = 11\n", encoding="utf-8")
    out = tmp_path / "s.csv"
    assert main(["--config", str(cfg_file), "--xi", "0.04", "--out", str(out)]) == 0
    meta, _, data = read_csv(out.read_text())
    assert float(meta["xi"]) == 0.04
    assert data.shape == (11, 2)


def test_scan_chi_shifts_peaks(tmp_path):
    out = tmp_path / "scan.csv"
    png = tmp_path / "scan.png"
    assert main(["--mode", "scan", "--scan", "chi=0,0.02,0.04", "--kind", "analytic",
                 "--xi", "0", "--out", str(out), "--plot", str(png)]) == 0
    meta, columns, data = read_csv(out.read_text())
    assert columns == ["chi", "omega", "s_v"]
    assert data.shape == (3 * 2001, 3)
    centers = []
    for n, chi in enumerate((0.0, 0.02, 0.04), start=1):
        assert float(meta[f"scan_{n}.chi"]) == chi
        centers.append([float(meta[f"scan_{n}.peak_{i}"].split(",")[0]) for i in (1, 2)])
    centers = np.array(centers)
    midpoints = centers.mean(axis=1)
    assert np.allclose(midpoints - midpoints[0], [0.0, -0.02, -0.04], atol=1e-3)
    assert png.stat().st_size > 1000


def test_scan_order_independent_of_workers():
    cfg = parse_config("", {"mode": "scan", "scan": "xi=0.04,0,0.02", "n_fock": "3",
                            "n_omega": "201"})
    omega1, _, serial = scan_spectra(cfg)
    cfg4 = parse_config(cfg.to_text(), {"workers": "3"})
    omega2, _, parallel = scan_spectra(cfg4)
    assert np.array_equal(omega1, omega2)
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.values, b.values)


def test_scan_xi_numeric_spectra_agree(tmp_path):
    out = tmp_path / "xi.csv"
    assert main(["--mode", "scan", "--scan", "xi=0,0.02,0.04", "--chi", "0", "--n-fock", "5",
                 "--workers", "3", "--out", str(out)]) == 0
    _, _, data = read_csv(out.read_text())
    curves = [data[data[:, 0] == xi, 2] for xi in (0.0, 0.02, 0.04)]
    curves = [c / c.max() for c in curves]
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.max(np.abs(curves[i] - curves[j])) < 0.02


def test_spectrum_plot_written(tmp_path):
    png = tmp_path / "fig.png"
    assert main(["--mode", "spectrum-analytic", "--out", str(tmp_path / "s.csv"),
                 "--plot", str(png)]) == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
