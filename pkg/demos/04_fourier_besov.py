"""Three equivalent Fourier-Besov norms on white noise and a test pattern.

The sharp, smooth and dyadic variants differ only by bounded factors;
their ratios are printed for a random field and a deterministic one.
"""
import numpy as np

from noiselab import RngSpec, fb_norms, field_from_coefficients, sample_white_noise

d, Jmax = 2, 7
noise = sample_white_noise(d, 2 ** (Jmax + 1), RngSpec(5), 0)
pattern = field_from_coefficients(d, {(3, 1): 1.0, (-3, -1): 1.0, (20, 0): 0.5j, (-20, 0): -0.5j})

for name, f in (("noise", noise), ("pattern", pattern)):
    for p, q in ((1.0, np.inf), (2.0, 2.0), (4.0, 1.0)):
        s = -d / p if name == "noise" else 0.5
        t = fb_norms(f, s, p, q)
        print(
            f"{name:8s} s={s:+.2f} p={p:g} q={q:g}  sharp={t.sharp_value:.4f}  "
            f"sharp/smooth={t.sharp_value / t.smooth_value:.3f}  sharp/dyadic={t.sharp_value / t.dyadic_value:.3f}"
        )
