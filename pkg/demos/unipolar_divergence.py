"""Photon number of a unipolar pulse diverges in the infrared.

A pulse whose voltage does not integrate to zero has no single-mode photon
description: cutting the mode integral off at |k| > k_min and sending the
cutoff to zero, beta^2 grows like A ln(1/k_min) with A = (net area)^2 / pi
in natural units.  No matter how weak such a pulse looks, an eavesdropper
with the right instruments sees unbounded brightness.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tlphotons import LineParams, PiecewiseConstantWaveform, beta2_ir_cutoff, ir_divergence_coefficient

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

line = LineParams()
square = PiecewiseConstantWaveform(((0.0, 1.0, 1.0),))

kmins = np.geomspace(1e-6, 1e-2, 17)
values = np.array([beta2_ir_cutoff(square, line, km) for km in kmins])
A_fit, B_fit = np.polyfit(np.log(1.0 / kmins), values, 1)
A_pred = ir_divergence_coefficient(square, line)

print(f"fitted divergence coefficient A = {A_fit:.6f}")
print(f"predicted (net area)^2/pi       = {A_pred:.6f}  (= 1/pi = {1 / math.pi:.6f})")

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogx(kmins, values, "o", ms=4)
ax.semilogx(kmins, A_fit * np.log(1.0 / kmins) + B_fit, "-", lw=1)
ax.set_xlabel("infrared cutoff k_min")
ax.set_ylabel("beta^2 with cutoff")
ax.set_title("unbounded photon number of a unipolar square pulse")
fig.tight_layout()
fig.savefig(out / "unipolar_divergence.png", dpi=130)
print("wrote", out / "unipolar_divergence.png")
