"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints and records a ``criterion N: PASS|FAIL`` line; the lines are
repeated in the terminal summary.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from ambc_noma import analytic
from ambc_noma.analytic import diversity_order, evaluate, floor, ip_bd, op_bd_ideal, op_bd_nonideal
from ambc_noma.channel import SystemParams, product_exp_pdf, product_exp_tail
from ambc_noma.cli import main, run_validate
from ambc_noma.config import default_config
from ambc_noma.iqi import IqiProfile
from ambc_noma.montecarlo import apply_axis, simulate, sweep
from ambc_noma.special import bessel_k0, exp_integral_ei, scaled_ei_product

from conftest import ACCEPTANCE_LINES

TRIALS = 10**6
GRID_DB = (0.0, 10.0, 20.0, 30.0, 40.0)
DEFAULT_IQI = IqiProfile.uniform(1.05, 20.0)
FIG4_IQI = IqiProfile.uniform(1.1, 5.0)


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def test_criterion_01_analytic_matches_monte_carlo():
    cfg = default_config({"trials": TRIALS, "snr_db_grid": list(GRID_DB)})
    rep = run_validate(cfg)
    assert {r.profile for r in rep.rows} == {"iqi", "ideal"}
    assert len(rep.rows) == 2 * 5 * 6
    worst = max(rep.rows, key=lambda r: abs(r.gap) / max(3 * r.se, 5e-4))
    for r in rep.failures:
        print(f"  {r.profile} {r.snr_db:g} dB {r.metric}: analytic={r.analytic:.6g} "
              f"mc={r.mc:.6g} se={r.se:.3g}")
    ok = report(1, rep.passed, f"{len(rep.rows) - len(rep.failures)}/{len(rep.rows)} points within "
                f"max(3 SE, 5e-4); worst {worst.profile} {worst.metric} @ {worst.snr_db:g} dB, "
                f"z={worst.z:.2f}")
    assert ok


def test_criterion_02_error_floors():
    p = SystemParams()
    # the far-user constant 1 + d e^d Ei(-d), d = 100, from mpmath
    d = mpmath.mpf(100)
    constant = float(1 + d * mpmath.exp(d) * mpmath.ei(-d))
    assert floor("op_far", p) == pytest.approx(constant, rel=1e-9)
    at60 = p.with_snr_db(60.0)
    est = simulate(at60, analytic.OUTAGE_METRICS, TRIALS, seed=2024)
    rows, ok = [], True
    for m in analytic.OUTAGE_METRICS:
        fl = floor(m, p)
        for source, value in (("analytic", evaluate(m, at60)), ("mc", est[m].value)):
            rel = abs(value - fl) / fl
            ok &= rel <= 0.05
            rows.append(f"{m} {source} {value:.4g} vs floor {fl:.4g} ({100 * rel:.1f}%)")
    report(2, ok, "; ".join(rows))
    assert ok


def test_criterion_03_zero_diversity_order():
    slopes, ok = [], True
    for name, profile in (("ideal", IqiProfile.ideal()), ("iqi", DEFAULT_IQI)):
        p = SystemParams(iqi=profile)
        for m in analytic.OUTAGE_METRICS:
            s = diversity_order(analytic.outage_curve(m, p), 50.0, 60.0)
            ok &= abs(s) <= 0.05
            slopes.append(f"{name} {m}={s:.3g}")
    report(3, ok, "slopes 50-60 dB: " + ", ".join(slopes))
    assert ok


def test_criterion_04_nonideal_branches_reduce_to_ideal():
    worst = 0.0
    for snr in GRID_DB:
        p = SystemParams().with_snr_db(snr)
        worst = max(worst,
                    abs(op_bd_nonideal(p, 500) - op_bd_ideal(p, 500)),
                    abs(ip_bd(p, "nonideal", 500) - ip_bd(p, "ideal", 500)))
    ok = report(4, worst <= 1e-6, f"max branch gap {worst:.2e} (N=500)")
    assert ok


def test_criterion_05_beta_trends_and_optimum():
    betas = [round(0.02 * k, 2) for k in range(1, 11)]
    p25 = SystemParams(a1=0.1, iqi=FIG4_IQI).with_snr_db(25.0)
    p10 = SystemParams(a1=0.1, iqi=FIG4_IQI).with_snr_db(10.0)
    mc25 = dict(sweep(("op_far", "op_near", "op_bd"), p25, "beta", betas, TRIALS, seed=5))
    mc10 = dict(sweep(("ip_far", "ip_near"), p10, "beta", betas, TRIALS, seed=6))

    def curves(metric, p, mc):
        ana = [evaluate(metric, apply_axis(p, "beta", b)) for b in betas]
        return ana, [mc[b][metric].value for b in betas]

    bd_ana, bd_mc = curves("op_bd", p25, mc25)
    best, best_mc = betas[int(np.argmin(bd_ana))], betas[int(np.argmin(bd_mc))]
    checks = {"bd optimum at 0.12 +- 0.02": abs(best - 0.12) <= 0.02 + 1e-12}

    for metric, p, mc, sign in (("op_far", p25, mc25, 1), ("op_near", p25, mc25, 1),
                                ("ip_far", p10, mc10, -1), ("ip_near", p10, mc10, -1)):
        ana, sim = curves(metric, p, mc)
        step_a, step_m = np.sign(np.diff(ana)), np.sign(np.diff(sim))
        monotone = np.all(sign * np.diff(ana) >= -1e-15) and np.all(sign * np.diff(sim) >= 0)
        agree = np.all((step_a == step_m) | (step_a == 0) | (step_m == 0))
        word = "nondecreasing" if sign > 0 else "nonincreasing"
        checks[f"{metric} {word}"] = bool(monotone and agree)

    ok = all(checks.values())
    detail = ", ".join(f"{k}: {'yes' if v else 'no'}" for k, v in checks.items())
    report(5, ok, f"{detail}; BD OP argmin analytic beta={best:g}, MC beta={best_mc:g} "
                  f"(analytic {bd_ana[betas.index(0.12)]:.4g} at 0.12, {min(bd_ana):.4g} at {best:g})")
    assert ok


def test_criterion_06_iqi_lowers_intercept():
    metrics = analytic.INTERCEPT_METRICS
    results, ok = [], True
    grid = {}
    for snr in GRID_DB:
        grid[snr] = (simulate(SystemParams(iqi=DEFAULT_IQI).with_snr_db(snr), metrics, TRIALS, seed=77),
                     simulate(SystemParams().with_snr_db(snr), metrics, TRIALS, seed=77))
    for m in metrics:
        iqi, ideal = grid[10.0][0][m], grid[10.0][1][m]
        diff = ideal.value - iqi.value
        se = math.hypot(iqi.std_error, ideal.std_error)
        significant = diff > 3 * se
        consistent = all(grid[s][0][m].value <= grid[s][1][m].value for s in GRID_DB)
        this_ok = iqi.value <= ideal.value and (significant or consistent)
        ok &= this_ok
        results.append(f"{m} iqi={iqi.value:.4g} ideal={ideal.value:.4g} "
                       f"({'>3 SE' if significant else 'sign-consistent' if consistent else 'neither'})")
    report(6, ok, "at 10 dB: " + "; ".join(results))
    assert ok


def test_criterion_07_special_function_accuracy():
    grid = np.logspace(-4, math.log10(50), 80)
    ei_err = max(abs(exp_integral_ei(-t) / float(mpmath.ei(-mpmath.mpf(t))) - 1) for t in grid)
    cut = lambda x: math.acosh(max(750.0 / x, 1.0 + 1e-9))  # noqa: E731
    k0_ref = [integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0, cut(x), epsabs=0,
                             epsrel=1e-13, limit=400)[0] for x in grid]
    k0_err = max(abs(bessel_k0(x) / r - 1) for x, r in zip(grid, k0_ref))
    deltas = np.logspace(-6, 6, 200)
    scaled = [scaled_ei_product(d) for d in deltas]
    stable = all(math.isfinite(v) and -1 < v < 0 for v in scaled)
    ok = report(7, ei_err <= 1e-8 and k0_err <= 1e-8 and stable,
                f"Ei rel err {ei_err:.1e}, K0 rel err {k0_err:.1e}, scaled product in (-1,0) "
                f"up to 1e6: {stable}")
    assert ok


def test_criterion_08_quadrature_convergence():
    worst = 0.0
    for profile in (IqiProfile.ideal(), DEFAULT_IQI, FIG4_IQI):
        for snr in GRID_DB:
            p = SystemParams(iqi=profile).with_snr_db(snr)
            for m in ("op_bd", "ip_bd"):
                worst = max(worst, abs(evaluate(m, p, 50) - evaluate(m, p, 500)))
    ok = report(8, worst < 1e-4, f"max |N=50 - N=500| = {worst:.2e}")
    assert ok


def test_criterion_09_channel_statistics():
    worst_mass = 0.0
    for la, lb in ((0.8, 0.1), (0.5, 0.1), (0.2, 0.1), (1.0, 1.0)):
        c = la * lb
        mass, _ = integrate.quad(lambda v: product_exp_pdf(c * v * v / 4, la, lb) * c * v / 2,
                                 0, 60, epsabs=1e-13, epsrel=1e-12, limit=200)
        worst_mass = max(worst_mass, abs(mass - 1))
    rng = np.random.default_rng(99)
    x = np.sort(rng.exponential(0.8, TRIALS) * rng.exponential(0.1, TRIALS))
    probe = np.quantile(x, np.linspace(0.0005, 0.9995, 1000))
    model = np.array([1 - product_exp_tail(z, 0.8, 0.1) for z in probe])
    empirical_hi = np.searchsorted(x, probe, side="right") / x.size
    empirical_lo = np.searchsorted(x, probe, side="left") / x.size
    ks = max(np.max(np.abs(model - empirical_hi)), np.max(np.abs(model - empirical_lo)))
    ok = report(9, worst_mass <= 1e-6 and ks < 0.002,
                f"|mass - 1| = {worst_mass:.1e}, KS = {ks:.2e} at 1e6 samples")
    assert ok


def test_criterion_10_determinism(tmp_path):
    outputs = {}
    for mode in ("validate", "sweep"):
        for run, workers in enumerate((1, 1, 4)):
            path = tmp_path / f"{mode}-{run}.csv"
            args = [mode, "--trials", "200000", "--seed", "31", "--snr-db-grid", "0:40:10",
                    "--workers", str(workers), "--output", str(path)]
            assert main(args) == 0
            outputs.setdefault(mode, []).append(path.read_bytes())
    same = {m: len(set(v)) == 1 for m, v in outputs.items()}
    ok = report(10, all(same.values()),
                ", ".join(f"{m} byte-identical over 2 repeats and 1 vs 4 workers: {v}"
                          for m, v in same.items()))
    assert ok
