"""Brightness of a split pulse versus sub-pulse separation.

Each of the two sub-pulses carries net area on its own, so neither has a
photon description separately; together they are bipolar and the photon
number grows like (2/pi) ln w with the separation.  A frequency-band
detector sees an ever dimmer pulse; the optimal detector sees an ever
brighter one.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tlphotons import LineParams, fit_log_slope, split_pulse_sweep
from tlphotons.photon_content import naive_photon_estimate, split_pulse

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

line = LineParams()
ws = np.geomspace(1e2, 1e4, 25)
rows = split_pulse_sweep(ws, line)
slope, intercept = fit_log_slope(rows)

print(f"fitted beta^2 = {slope:.5f} * ln(w) + {intercept:.5f}")
print(f"predicted slope 2/pi = {2 / math.pi:.5f}")
print(f"naive estimate at w = 1e4: {naive_photon_estimate(split_pulse(1e4), line):.1f}")
print(f"actual beta^2 at w = 1e4: {rows[-1][1]:.4f}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogx([w for w, _ in rows], [b for _, b in rows], "o", ms=4, label="log kernel")
ax.semilogx(ws, slope * np.log(ws) + intercept, "-", lw=1, label="fit")
ax.set_xlabel("separation w")
ax.set_ylabel("mean photon number")
ax.legend()
fig.tight_layout()
fig.savefig(out / "split_pulse_brightness.png", dpi=130)
print("wrote", out / "split_pulse_brightness.png")
