"""Acceptance criteria, one test per criterion.

Each test prints (and records for the end-of-run summary) a single
``criterion N: PASS|FAIL`` line with the measured value and the tolerance.
"""
import json
import time
import warnings

import numpy as np
import pytest

from biphoton_duality import analysis, cli, grid, instrument, model
from biphoton_duality.grid import Axis, Field2D, make_centered_axis
from biphoton_duality.reference import TABLE1, TABLE2, table2_products
from biphoton_duality.transform import SamplingWarning, dft1, dft2

from conftest import ACCEPTANCE_LINES

TBP_GAUSS = 2 * np.log(2) / np.pi
TBP_SINC = 2 * model.SINC2_HALF / np.pi
# calibrated conditions plus models with other correlation strengths and signs
GAUSSIAN_MODELS = [(1.2, 0.13), (2.7, 0.14), (2.3, 0.33), (1.0, 1.0), (0.5, 2.0), (5.0, 0.1),
                   (0.2, 0.2), (3.0, 0.6)]


def record(num: int, ok: bool, msg: str) -> None:
    ACCEPTANCE_LINES.append((num, bool(ok), msg))
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture(scope="module")
def reports():
    return {t: analysis.model_report(model.calibrate(*t)) for t in GAUSSIAN_MODELS}


@pytest.fixture(scope="module")
def condition_fields():
    out = {}
    for cond in ("a", "b", "c"):
        w = TABLE2[cond]
        out[cond] = analysis.model_fields(model.calibrate(w["dnu_plus"], w["dnu_minus"]))
    return out


def _oracle_error(a, b, n=512, dnu=0.05):
    m = model.gaussian_model(a, b)
    ax = Axis(0.0, dnu, n, "THz")
    amp = model.jsa(m, (ax, ax))
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SamplingWarning)
        num = dft2(amp)
    elapsed = time.perf_counter() - t0
    ana = model.analytic_jta(m, (num.axis_1, num.axis_2))
    mag = np.abs(num.values) / np.abs(num.values).max()
    ref = np.abs(ana.values)
    t1, t2 = np.meshgrid(num.axis_1.values, num.axis_2.values, indexing="ij")
    keep = np.abs(np.abs(t1 - t2) - b / np.pi) > num.axis_1.step
    return float(np.abs(mag - ref)[keep].max() / ref.max()), elapsed


def test_criterion_01_oracle_equivalence():
    results = [(a, b, *_oracle_error(a, b, dnu=dnu)) for a, b, dnu in
               ((0.0951, 14.06, 0.05), (0.04, 4.0, 0.1))]
    ok = all(err <= 1e-6 and el < 1.0 for *_, err, el in results)
    detail = "; ".join(f"a={a:g} b={b:g}: rel Linf {err:.3g} in {el:.3f} s"
                       for a, b, err, el in results)
    record(1, ok, f"|dft2(jsa)| vs analytic_jta at 512^2: {detail} (need <= 1e-6, < 1 s)")
    assert ok


def test_criterion_02_gaussian_tbp(reports):
    vals = {t: r.tbp_plus for t, r in reports.items()}
    worst = max(vals, key=lambda t: abs(vals[t] - TBP_GAUSS))
    ok = all(abs(v - TBP_GAUSS) <= 0.01 for v in vals.values())
    record(2, ok, f"tbp_plus over {len(vals)} gaussian models, worst {vals[worst]:.4f} at "
                  f"(dnu+, dnu-)={worst} vs {TBP_GAUSS:.4f} +-0.01")
    assert ok


def test_criterion_03_sinc_tbp(reports):
    vals = {t: r.tbp_minus for t, r in reports.items()}
    worst = max(vals, key=lambda t: abs(vals[t] - TBP_SINC))
    ok = all(abs(v - TBP_SINC) <= 0.02 for v in vals.values())
    record(3, ok, f"tbp_minus over {len(vals)} models, worst {vals[worst]:.4f} at "
                  f"(dnu+, dnu-)={worst} vs {TBP_SINC:.4f} +-0.02")
    assert ok


def test_criterion_04_table_consistency(capsys):
    bad = []
    parts = []
    for cond in ("a", "b", "c"):
        prods = table2_products(cond)
        for key, printed in TABLE1[cond].items():
            if abs(prods[key] - printed) > 0.05:
                bad.append((cond, key))
        parts.append(f"{cond}: " + "/".join(f"{prods[k]:.3g}" for k in TABLE1[cond]))
    verify_ok = cli.main(["verify"]) == 0
    capsys.readouterr()
    ok = not bad and verify_ok
    record(4, ok, f"width-table products {'; '.join(parts)} within 0.05 of the TBP table; "
                  f"verify exit {'0' if verify_ok else 'nonzero'}")
    assert ok


def test_criterion_05_case_b(condition_fields):
    rep = analysis.widths_report(*condition_fields["b"])
    e_plus = abs(rep.dtau_plus / 0.18 - 1)
    e_minus = abs(rep.dtau_minus / 6.1 - 1)
    ok = e_plus <= 0.15 and e_minus <= 0.10
    record(5, ok, f"case b dtau_plus {rep.dtau_plus:.4f} ps ({e_plus:.1%} from 0.18, tol 15%), "
                  f"dtau_minus {rep.dtau_minus:.3f} ps ({e_minus:.1%} from 6.1, tol 10%); "
                  f"row c minus product excluded from verify")
    assert ok


def test_criterion_06_correlation_inversion(condition_fields):
    rho = {c: (analysis.correlation_sign(f[0]), analysis.correlation_sign(f[1]))
           for c, f in condition_fields.items()}
    ok = all(s > 0.5 and t < -0.5 for s, t in rho.values())
    detail = ", ".join(f"{c}: {s:+.3f}/{t:+.3f}" for c, (s, t) in rho.items())
    record(6, ok, f"Pearson TSI/TTI {detail} (need > +0.5 / < -0.5)")
    assert ok


def test_criterion_07_classical_non_limit(condition_fields):
    tbp = {c: analysis.widths_report(*f).tbp_y for c, f in condition_fields.items()}
    rel_b = abs(tbp["b"] / 8.2 - 1)
    ok = all(v > 1 for v in tbp.values()) and rel_b <= 0.25
    detail = ", ".join(f"{c}: {v:.3f}" for c, v in tbp.items())
    record(7, ok, f"tbp_y {detail} (need > 1); case b {rel_b:.1%} from 8.2 (tol 25%)")
    assert ok


def test_criterion_08_scan_round_trip(tmp_path):
    # Rates well above the 200-count minimum: the TTI slice width sits under a
    # 0.48 ps blur and its deconvolution amplifies Poisson noise about ninefold,
    # so at ~300 counts the result depends on the seed.
    t0 = time.perf_counter()
    cfg_text = ("calibration.dnu_plus = 2.7\ncalibration.dnu_minus = 0.14\n"
                "spectrometer.pair_rate_peak = 20000\nupconversion.pair_rate_peak = 1000\n"
                "noise.seed = 1\n")
    cfg_path = tmp_path / "b.cfg"
    cfg_path.write_text(cfg_text)
    assert cli.main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path)]) == 0
    assert cli.main(["analyze", "--input", str(tmp_path), "--out", str(tmp_path / "an")]) == 0
    elapsed = time.perf_counter() - t0
    got = json.loads((tmp_path / "an" / "report.json").read_text())

    # peak mean counts of the two scans
    cfg = cli.files.parse_config(cfg_text)
    m = cli.build_model(cfg)
    tsi, tti = analysis.model_fields(m)
    sc = instrument.SpectrometerConfig(pair_rate_peak=20000)
    uc = instrument.UpconversionConfig(pair_rate_peak=1000)
    ax = sc.scan_axis()
    peak_tsi = instrument.expected_tsi_map(tsi, sc, ax.values, ax.values).max() * sc.dwell
    peak_tti = instrument.expected_tti_map(tti, uc).max()

    ref = analysis.widths_report(tsi, tti)
    errs = {k: abs(got[k] / getattr(ref, k) - 1) for k in analysis.WidthReport.WIDTHS}
    worst = max(errs, key=errs.get)
    ok = max(errs.values()) <= 0.05 and min(peak_tsi, peak_tti) >= 200 and elapsed < 60
    record(8, ok, f"case b scans (peak mean counts {peak_tsi:.0f}/{peak_tti:.0f}), worst width "
                  f"{worst} off by {errs[worst]:.2%} (tol 5%), {elapsed:.1f} s (limit 60 s)")
    assert ok


def test_criterion_09_transform_properties():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    parseval, round_trip = 0.0, 0.0
    for _ in range(20):
        n1, n2 = rng.integers(2, 200, size=2)
        c1, c2 = rng.uniform(-3, 3, size=2)
        ax1, ax2 = Axis(c1, rng.uniform(0.01, 1), n1, "THz"), Axis(c2, rng.uniform(0.01, 1), n2, "THz")
        f = Field2D(ax1, ax2, rng.normal(size=(n1, n2)) + 1j * rng.normal(size=(n1, n2)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SamplingWarning)
            g = dft2(f)
            back = dft2(g, "inverse", out_center=(c1, c2))
        e_in = (np.abs(f.values) ** 2).sum() * ax1.step * ax2.step
        e_out = (np.abs(g.values) ** 2).sum() * g.axis_1.step * g.axis_2.step
        parseval = max(parseval, abs(e_out / e_in - 1))
        round_trip = max(round_trip, np.abs(back.values - f.values).max() / np.abs(f.values).max())
    ax = make_centered_axis(0.0, 16.0, 1024)
    out, t = dft1(np.exp(-np.pi * ax.values ** 2), ax)
    self_dual = np.abs(out - np.exp(-np.pi * t.values ** 2)).max()
    elapsed = time.perf_counter() - t0
    ok = parseval <= 1e-9 and round_trip <= 1e-10 and self_dual <= 1e-9 and elapsed < 10
    record(9, ok, f"Parseval {parseval:.1e} (<=1e-9), round trip {round_trip:.1e} (<=1e-10), "
                  f"self-dual Gaussian {self_dual:.1e} (<=1e-9), {elapsed:.2f} s (limit 10 s)")
    assert ok


def test_criterion_10_pump_conversion():
    dnu = model.wavelength_bw_to_frequency_bw(792, 8.1)
    plus = dnu / np.sqrt(2)
    rel = abs(plus / 2.7 - 1)
    ok = abs(dnu - 3.87) < 0.005 and abs(plus - 2.74) < 0.005 and rel <= 0.02
    record(10, ok, f"8.1 nm at 792 nm -> {dnu:.3f} THz, /sqrt2 -> {plus:.3f} THz, "
                   f"{rel:.1%} from 2.7 (tol 2%)")
    assert ok
