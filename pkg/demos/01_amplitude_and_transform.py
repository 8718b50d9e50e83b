"""
From spectral amplitude to temporal amplitude
=============================================

Build the joint spectral amplitude for a Gaussian pump and sinc phase
matching, transform it to the time domain, and compare with the closed form.
"""
import warnings

import numpy as np

from biphoton_duality import analysis, grid, model, transform

# a=0.04 and b=4 give a broad pump envelope and a narrower phase-matching band
m = model.gaussian_model(a=0.04, b=4.0)
ax = grid.Axis(center=0.0, step=0.1, n=512, unit="THz")
amp = model.jsa(m, (ax, ax))
print("JSA grid:", amp.values.shape, "step", ax.step, "THz")

# The sinc tails are still non-zero at the grid edge, hence the warning.
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    jta = transform.dft2(amp)
print("sampling warnings:", [str(w.message) for w in caught])
print("time grid step:", round(jta.axis_1.step, 5), "ps, span", round(jta.axis_1.span, 3), "ps")

# closed form on the same time grid
exact = model.analytic_jta(m, (jta.axis_1, jta.axis_2))
mag = np.abs(jta.values) / np.abs(jta.values).max()
t1, t2 = np.meshgrid(jta.axis_1.values, jta.axis_2.values, indexing="ij")
inside = np.abs(t1 - t2) < 0.8 * m.b / np.pi
print("max deviation inside the band:", np.abs(mag - exact.values.real)[inside].max())
print("rect half-width b/pi in t1 - t2:", m.b / np.pi, "ps")

# The spectral intensity is positively correlated, the temporal one negatively.
tsi = amp.intensity()
tti = jta.intensity()
print("Pearson correlation TSI:", round(analysis.correlation_sign(tsi), 3))
print("Pearson correlation TTI:", round(analysis.correlation_sign(tti), 3))

# Along the rotated axes the widths are set by one factor each.
plus = analysis.fit_gaussian(grid.diagonal_projection(tsi, "plus")).fwhm
minus = analysis.fwhm_numeric(grid.diagonal_projection(tsi, "minus"))
print(f"TSI widths: plus {plus:.3f} THz (analytic {model.plus_width(m):.3f}), "
      f"minus {minus:.3f} THz (analytic {model.minus_width(m):.3f})")
