"""
Command-line workflow
=====================

Write a config file, then run ``model``, ``simulate``, ``analyze`` and
``verify`` through the same entry point as the ``biphoton-duality`` script.
"""
import json
import tempfile
from pathlib import Path

from biphoton_duality import cli

work = Path(tempfile.mkdtemp(prefix="biphoton-"))
config = work / "case_b.cfg"
config.write_text("""\
# 8.1 nm Gaussian pump, 30 mm crystal, calibrated from the rotated widths
calibration.dnu_plus = 2.7
calibration.dnu_minus = 0.14

spectrometer.pair_rate_peak = 5000
upconversion.pair_rate_peak = 100
upconversion.background_rate = 1.0
noise.seed = 3
""")

for argv in (["model", "--config", str(config), "--out", str(work / "model")],
             ["simulate", "--config", str(config), "--out", str(work / "scan")],
             ["analyze", "--input", str(work / "scan"), "--out", str(work / "scan_report")]):
    code = cli.main(argv)
    print(" ".join(["biphoton-duality"] + argv[:1]), "->", code)

for name in ("model", "scan_report"):
    r = json.loads((work / name / "report.json").read_text())
    print(f"{name:12s} tbp+ {r['tbp_plus']:.3f}  tbp- {r['tbp_minus']:.3f}  tbp_y {r['tbp_y']:.2f}")

print("\nfiles:", sorted(p.name for p in (work / "model").iterdir()))
print()
cli.main(["verify"])
