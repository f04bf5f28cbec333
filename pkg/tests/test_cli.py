import pytest

from ambc_noma import analytic
from ambc_noma.cli import ValidationRow, main, run_sweep, run_validate, sweep_columns
from ambc_noma.config import ConfigError, default_config, parse_config, parse_grid
from ambc_noma.montecarlo import RNG_ALGORITHM


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_empty_file_gives_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, ""))
    p = cfg.params
    assert (p.a1, p.beta, p.lambdas) == (0.1, 0.1, (1.0, 0.1, 1.0, 0.5, 0.8, 0.2, 0.1))
    assert (p.th_x2, p.th_x1, p.th_c) == (1.0, 2.0, 0.1)
    assert (p.th_e_near, p.th_e_far, p.th_e_bd) == (1.0, 1.2, 0.8)
    assert p.iqi.near_rx.epsilon == 1.05
    assert cfg.trials == 10**6 and cfg.quadrature_n == 200
    assert cfg.metrics == analytic.METRICS


def test_comments_and_per_chain_overrides(tmp_path):
    cfg = parse_config(write(tmp_path, """
# channel gains
lambda2 = 0.2   # far user
iqi.eve_rx.epsilon = 1.2
iqi.eve_rx.phi_deg = 0
beta = 0.15
"""))
    assert cfg.params.lambdas[1] == 0.2
    assert cfg.params.iqi.eve_rx.epsilon == 1.2 and cfg.params.iqi.eve_rx.phi == 0.0
    assert cfg.params.iqi.near_rx.epsilon == 1.05
    assert cfg.params.beta == 0.15


def test_snr_grid_range_is_inclusive(tmp_path):
    cfg = parse_config(write(tmp_path, "snr_db_grid = 0:60:5\n"))
    assert len(cfg.snr_db_grid) == 13
    assert cfg.snr_db_grid[-1] == 60.0
    assert parse_grid("0, 10, 25") == [0.0, 10.0, 25.0]
    for bad in ("0:10", "10:0:1", "0:10:0", "5,3"):
        with pytest.raises(ValueError):
            parse_grid(bad)


@pytest.mark.parametrize("text, line", [
    ("a1 = 0.6\n", 1),
    ("\n# x\nfoo = 1\n", 3),
    ("beta = 0.1\nthis line is malformed\n", 2),
    ("metrics = \n", 1),
    ("metrics = op_far, op_eve\n", 1),
    ("trials = many\n", 1),
    ("seed = 1\nseed = 2\n", 2),
    ("iqi.router_rx.epsilon = 1\n", 1),
])
def test_config_errors_report_lines(tmp_path, text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_range_error_mentions_a2(tmp_path):
    with pytest.raises(ConfigError, match="a2"):
        parse_config(write(tmp_path, "a1 = 0.6\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "absent.cfg")


def test_flags_override_file(tmp_path):
    path = write(tmp_path, "beta = 0.2\nseed = 5\n")
    cfg = parse_config(path, {"beta": 0.05, "seed": None, "ideal": True})
    assert cfg.params.beta == 0.05 and cfg.seed == 5 and cfg.params.iqi.is_ideal


def small_cfg(**kw):
    base = {"trials": 100_000, "snr_db_grid": [0.0, 20.0, 40.0]}
    base.update(kw)
    return default_config(base)


def test_validate_passes_on_defaults():
    report = run_validate(small_cfg())
    assert report.passed
    assert len(report.rows) == 2 * 3 * 6
    text = report.to_text()
    assert f"# rng = {RNG_ALGORITHM}" in text
    assert "x1-ceiling-below-threshold" in text


def test_validate_catches_corrupted_closed_form():
    def corrupted(metric, p, **kw):
        value = analytic.evaluate(metric, p, **kw)
        return value * 1.3 if metric == "op_far" else value

    report = run_validate(small_cfg(ideal=True), analytic_fn=corrupted)
    assert not report.passed
    bad = report.failures
    assert bad and all(r.metric == "op_far" for r in bad)
    assert all(abs(r.z) > 3 for r in bad)


def test_row_pass_rule():
    assert ValidationRow("x", 0, "op_far", 0.5, 0.5004, 1e-5).passed  # gap within 5e-4
    assert ValidationRow("x", 0, "op_far", 0.5, 0.51, 0.004).passed   # |z| = 2.5
    assert not ValidationRow("x", 0, "op_far", 0.5, 0.51, 0.001).passed
    assert ValidationRow("x", 0, "op_far", 0.0, 0.0, 0.0).z == 0.0


def test_sweep_csv_layout(tmp_path):
    out = tmp_path / "sweep.csv"
    cfg = default_config({"trials": 20_000, "snr_db_grid": parse_grid("0:60:5"),
                          "mode": "sweep", "output": str(out)})
    text = run_sweep(cfg)
    assert out.read_text() == text
    assert "\r" not in text
    lines = text.splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    assert any(ln.startswith("# seed = ") for ln in meta)
    assert any(ln.startswith("# rng = ") for ln in meta)
    assert any(ln.startswith("# quadrature_n = 200") for ln in meta)
    header = body[0].split(",")
    assert header == sweep_columns(cfg)
    assert header[:4] == ["gamma_db", "analytic_op_far", "mc_op_far", "mc_se_op_far"]
    assert len(body) - 1 == 13
    assert all(len(r.split(",")) == 1 + 3 * 6 for r in body[1:])
    float(body[1].split(",")[1])


def test_sweep_with_floors_and_beta_axis():
    cfg = default_config({"trials": 5_000, "axis": "beta", "grid": [0.05, 0.1],
                          "metrics": ("op_far", "ip_bd"), "emit_floors": True, "mode": "sweep"})
    assert sweep_columns(cfg) == ["beta", "analytic_op_far", "mc_op_far", "mc_se_op_far",
                                  "analytic_ip_bd", "mc_ip_bd", "mc_se_ip_bd", "floor_op_far"]


def test_main_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "a1 = 0.6\n")
    assert main(["validate", "--config", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["sweep", "--axis", "beta", "--trials", "100"]) == 2
    out = tmp_path / "v.csv"
    assert main(["validate", "--trials", "50000", "--snr-db-grid", "10,30",
                 "--output", str(out)]) == 0
    assert "summary = 24 PASS, 0 FAIL" in out.read_text()


def test_main_sweep_is_byte_identical_across_workers(tmp_path):
    paths = []
    for workers in (1, 3):
        path = tmp_path / f"s{workers}.csv"
        args = ["sweep", "--trials", "150000", "--snr-db-grid", "0:40:20", "--seed", "9",
                "--workers", str(workers), "--output", str(path)]
        assert main(args) == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
