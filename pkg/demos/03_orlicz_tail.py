"""Gaussian-tail bound through the Luxemburg norm of a variance sequence.

For sigma_j = 2^{-j a} the Luxemburg norm rho is finite, and the
expected supremum of a sequence with those tails is bounded by
m + 3 sqrt(2) rho.  A Monte Carlo estimate is compared to the bound.
"""
import numpy as np

from noiselab import hv_upper_bound, luxemburg_rho, theta

print("theta at a few points:", np.round(theta(np.array([0.25, 0.5, 1.0, 2.0])), 6))

sigmas = 2.0 ** (-0.5 * np.arange(40))
rho = luxemburg_rho(sigmas)
print(f"rho = {rho:.6f}")

rng = np.random.default_rng(3)
xi = np.abs(rng.standard_normal((20000, sigmas.size))) * sigmas
emp = xi.max(axis=1).mean()
print(f"E sup |xi_j| ~ {emp:.4f}  <=  bound {hv_upper_bound(0.0, sigmas):.4f}")
