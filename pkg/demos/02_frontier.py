"""The critical regularity line for white noise in Besov spaces.

At s = -d/2 with q = inf the norm plateaus as more levels are resolved;
above it the norm grows like 2^{J (s + d/2)}.  The slope of log2(norm)
against J is printed for a few offsets.
"""
import numpy as np

from noiselab import RngSpec, besov_norm, sample_white_noise

d, p, Jmax, trials = 1, 2.0, 13, 8
crit = -d / 2
Js = np.arange(6, Jmax + 1)

for offset in (-0.25, 0.0, 0.25):
    s = crit + offset
    logs = np.zeros((trials, Js.size))
    for t in range(trials):
        f = sample_white_noise(d, 2 ** (Jmax + 1), RngSpec(11), t)
        rep = besov_norm(f, s, p, np.inf)
        lv = np.array([v for _, v in rep.per_level[: Jmax + 1]])
        # running sup over levels <= J is the q = inf norm truncated at J
        logs[t] = np.log2(np.maximum.accumulate(lv)[Js])
    slope = np.polyfit(Js, logs.mean(axis=0), 1)[0]
    print(f"s = {s:+.2f}  slope of log2 norm vs J = {slope:+.3f}  (expected {max(offset, 0):+.3f})")
