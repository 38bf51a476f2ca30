"""Lattice shells and the per-level law of large numbers.

Counts lattice points in dyadic half shells against their volume limit,
then shows the level-j L^p norm of white noise settling to a constant
once weighted by 2^{-jd/2}.
"""
import numpy as np

from noiselab import RngSpec, ShellSpec, besov_norm, sample_white_noise, shell_count, shell_count_limit

d = 2
print("shell counts, d =", d)
limit = shell_count_limit(d, "half")
for j in range(2, 9):
    n = shell_count(d, ShellSpec(j, "half"))
    print(f"  j={j:2d}  count={n:8d}  count/2^(jd)={n / 2 ** (j * d):.4f}  limit={limit:.4f}")

# one sample, p = 4; the normalised block norms flatten out
d, Jmax = 1, 14
field = sample_white_noise(d, 2 ** (Jmax + 1), RngSpec(7), 0)
rep = besov_norm(field, s=-d / 2, p=4.0, q=np.inf)
print("\nnormalised level norms 2^{-jd/2} ||W_j||_4, d = 1")
for j, v in rep.per_level[: Jmax + 1]:
    print(f"  j={j:2d}  {v:.4f}")
