import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from noiselab import lattice
from noiselab.fourier_besov import VARIANTS, dyadic_bracket, fb_level_values, fb_norms, w_stat
from noiselab.partition import SMOOTH
from noiselab.randfield import RngSpec, SpectralField, field_from_coefficients, sample_white_noise


def brute_w(f, j, p):
    lo, hi = (0.0, 2.0) if j == 0 else (2.0 ** (j - 1), 2.0 ** (j + 1))
    vals = [abs(f.coefficient(k)) for k in f.indices if lo <= math.sqrt(sum(int(c) ** 2 for c in k)) <= hi]
    return max(vals) if math.isinf(p) else sum(v**p for v in vals) ** (1 / p)


@pytest.mark.parametrize("s", [-1.0, 0.0, 0.5])
@pytest.mark.parametrize("p,q", [(1.0, 1.0), (2.0, math.inf), (math.inf, 2.0)])
def test_e0(s, p, q):
    t = fb_norms(field_from_coefficients(1, {(0,): 1}, 4), s, p, q)
    for v in VARIANTS:
        assert t.value(v) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("j", [2, 3, 4])
@pytest.mark.parametrize("q", [1.0, 2.0, 3.0])
def test_single_mode_counted_three_times(j, q):
    f = field_from_coefficients(1, {(2**j,): 1}, 2 ** (j + 2))
    t = fb_norms(f, 0.0, 2.0, q)
    assert t.dyadic_value == pytest.approx(3 ** (1 / q), rel=1e-14)


def test_w_stat_examples():
    ones = SpectralField(1, 16, lattice.ball_indices(1, 256), np.ones(33))
    for p in (1.0, 2.0, 3.0):
        assert w_stat(ones, 2, p) == pytest.approx(14 ** (1 / p), rel=1e-14)
    assert w_stat(field_from_coefficients(1, {}, 8), 2, 2.0) == 0.0


@pytest.mark.parametrize("d", [1, 2])
def test_w_stat_brute_force(d):
    f = sample_white_noise(d, 10, RngSpec(2))
    for j in range(0, 4):
        for p in (1.0, 2.0, math.inf):
            assert w_stat(f, j, p) == pytest.approx(brute_w(f, j, p), rel=1e-12)


def test_w_stat_lln():
    stat = np.array([2.0**-12 * w_stat(sample_white_noise(1, 2**13, RngSpec(6), t), 12, 2.0) ** 2 for t in range(100)])
    assert np.mean(np.abs(stat / 3 - 1) <= 0.1) >= 0.95


def test_dyadic_levels_near_three():
    f = sample_white_noise(1, 2**11, RngSpec(3))
    lv = fb_level_values(f.indices, f.coefficients, -0.5, 2.0, "dyadic", 11)[0]
    top = lv[8:] ** 2  # = 2^{-j} w_j^2 at s = -1/p
    assert np.all(np.abs(top / 3 - 1) < 0.2)


def test_dyadic_bracket():
    assert dyadic_bracket(-1.0) == (0.25, 2.0)
    assert dyadic_bracket(0.0) == (1.0, 1.0)
    c1, c2 = dyadic_bracket(0.5)
    assert c1 == pytest.approx(2**-0.5) and c2 == pytest.approx(2.0)


def _fields(n, N=32):
    rng = np.random.default_rng(4)
    idx = lattice.ball_indices(1, N * N)
    for i in range(n):
        c = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
        if i % 3 == 1:
            c[rng.random(len(idx)) > 0.1] = 0
        yield SpectralField(1, N, idx, c * (np.sqrt(lattice.squared_norms(idx)) + 1) ** -rng.uniform(-1, 2))


@pytest.mark.parametrize("s", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_exact_inequalities(s):
    c1, c2 = dyadic_bracket(s)
    for f in _fields(30):
        for p in (1.0, 2.0, 4.0, math.inf):
            for q in (1.0, 2.0, math.inf):
                t = fb_norms(f, s, p, q)
                eps = 1 + 1e-12
                assert t.smooth_value <= t.sharp_value * eps
                assert t.sharp_value <= 3 * t.smooth_value * eps
                assert c1 * t.dyadic_value <= t.sharp_value * eps
                assert t.sharp_value <= c2 * t.dyadic_value * eps


def test_level_policy_and_serialisation():
    f = sample_white_noise(1, 20, RngSpec(0))
    t = fb_norms(f, -0.5, 2.0, math.inf)
    assert t.complete_levels == tuple(range(4))
    json.dumps(t.to_dict())
    g = SpectralField(1, 20, f.indices, f.coefficients)
    assert len(fb_norms(g, -0.5, 2.0, math.inf).complete_levels) > 4


@given(st.floats(0.01, 100), st.floats(-1, 1), st.sampled_from([1.0, 2.0, math.inf]), st.sampled_from([1.0, 2.0, math.inf]))
def test_homogeneity(c, s, p, q):
    f = next(_fields(1, N=16))
    g = SpectralField(1, 16, f.indices, c * f.coefficients)
    a, b = fb_norms(f, s, p, q), fb_norms(g, s, p, q)
    for v in VARIANTS:
        assert b.value(v) == pytest.approx(c * a.value(v), rel=1e-12)
