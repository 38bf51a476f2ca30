import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special, stats

from noiselab import lattice
from noiselab.errors import ConfigurationError, PreconditionError, ResourceError
from noiselab.randfield import (
    RngSpec,
    SpectralField,
    canonical_rank,
    field_from_coefficients,
    gamma_moment,
    log_sup_statistic,
    pairing,
    sample_coefficients,
    sample_standard_complex,
    sample_white_noise,
)

BIG = 10**6


@pytest.fixture(scope="module")
def draws():
    return sample_standard_complex(RngSpec(3).generator(0), BIG)


def test_standard_complex_moments(draws):
    e = np.abs(draws) ** 2
    assert abs(e.mean() - 1) < 0.005
    assert abs(draws.real.mean()) < 0.005 and abs(draws.imag.mean()) < 0.005
    assert abs((e**2).mean() - 2) < 0.02
    # real and imaginary parts independent N(0, 1/2)
    assert abs(draws.real.var() - 0.5) < 0.005
    assert abs(np.mean(draws.real * draws.imag)) < 0.005


def test_modulus_squared_is_exponential(draws):
    assert stats.kstest(np.abs(draws[:100000]) ** 2, "expon").statistic < 0.01


def test_unitary_invariance():
    g = RngSpec(11).generator(0)
    a, b = 0.6, 0.8j
    x = sample_standard_complex(g, 10**5)
    y = sample_standard_complex(g, 10**5)
    z = sample_standard_complex(g, 10**5)
    ks = stats.ks_2samp(np.abs(a * x + b * y), np.abs(z)).statistic
    assert ks < 0.01


@pytest.mark.parametrize("p,val", [(2, 1.0), (4, 2**0.25), (1, math.sqrt(math.pi) / 2)])
def test_gamma_moment_values(p, val, draws):
    assert gamma_moment(p) == pytest.approx(val, rel=1e-14)
    assert gamma_moment(p) == pytest.approx(special.gamma(p / 2 + 1) ** (1 / p), rel=1e-14)
    emp = np.mean(np.abs(draws) ** p) ** (1 / p)
    assert emp == pytest.approx(val, rel=0.005)


def test_gamma_moment_domain():
    for bad in (0.5, math.inf, -1):
        with pytest.raises(ConfigurationError):
            gamma_moment(bad)


@pytest.mark.parametrize("p", [1, 2, 4])
@pytest.mark.parametrize("n", [1, 5, 50])
def test_linear_combination_moment(p, n):
    rng = np.random.default_rng(n)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    T = 20000
    g = sample_standard_complex(RngSpec(p * 100 + n).generator(0), (T, n))
    x = np.abs(g @ a) ** p
    target = (gamma_moment(p) * np.linalg.norm(a)) ** p
    assert abs(x.mean() - target) <= 3 * x.std(ddof=1) / math.sqrt(T)


def test_covariance_identity():
    idx, c = sample_coefficients(1, 4, RngSpec(5), range(10**4))
    cov = c.T @ c.conj() / c.shape[0]
    assert np.max(np.abs(cov - np.eye(len(idx)))) < 0.05


def test_determinism_and_order_independence():
    a = sample_white_noise(1, 3, RngSpec(9), trial=4)
    b = sample_white_noise(1, 3, RngSpec(9), trial=4)
    assert np.array_equal(a.coefficients, b.coefficients)
    _, batch = sample_coefficients(2, 6, RngSpec(9), [7, 2, 4])
    _, one = sample_coefficients(2, 6, RngSpec(9), [4])
    assert np.array_equal(batch[2], one[0])
    _, threaded = sample_coefficients(2, 6, RngSpec(9), [7, 2, 4], threads=3)
    assert np.array_equal(batch, threaded)


def test_trials_differ_and_seeds_differ():
    a = sample_white_noise(1, 8, RngSpec(1), 0).coefficients
    b = sample_white_noise(1, 8, RngSpec(1), 1).coefficients
    c = sample_white_noise(1, 8, RngSpec(2), 0).coefficients
    assert not np.array_equal(a, b) and not np.array_equal(a, c)


@given(st.integers(1, 2), st.integers(1, 12), st.integers(0, 12), st.integers(0, 2**32))
def test_nested_truncation(d, N1, extra, seed):
    N2 = N1 + extra
    small = sample_white_noise(d, N1, RngSpec(seed))
    big = sample_white_noise(d, N2, RngSpec(seed)).truncate(N1)
    assert np.array_equal(small.indices, big.indices)
    assert np.array_equal(small.coefficients, big.coefficients)


def test_canonical_rank_d1():
    idx = np.array([[0], [-1], [1], [-2], [2]])
    assert canonical_rank(idx).tolist() == [0, 1, 2, 3, 4]


def test_real_noise_is_hermitian():
    f = sample_white_noise(2, 5, RngSpec(3), real=True)
    for k in f.indices[::7]:
        assert f.coefficient(-k) == np.conj(f.coefficient(k))
    assert f.coefficient((0, 0)).imag == 0


def test_field_lookup_outside_ball():
    f = sample_white_noise(1, 4, RngSpec(0))
    assert f.coefficient((5,)) == 0
    assert f.is_random
    assert np.all(f.squared_norms <= 16)


def test_pairing_variance():
    e1 = field_from_coefficients(1, {(1,): 1.0}, 2)
    vals = np.array([pairing(e1, sample_white_noise(1, 2, RngSpec(17), t)) for t in range(10**4)])
    assert abs(np.mean(np.abs(vals) ** 2) - 1) < 0.05
    # <e_1, W> = g_{-1}
    w = sample_white_noise(1, 2, RngSpec(17), 0)
    assert pairing(e1, w) == w.coefficient((-1,))


def test_log_sup_statistic():
    zero = field_from_coefficients(1, {}, 8)
    assert log_sup_statistic(zero) == 0.0
    prev = 0.0
    for N in (4, 16, 64, 256):
        v = log_sup_statistic(sample_white_noise(1, N, RngSpec(2)))
        assert v >= prev
        prev = v


def test_budget_guard():
    with pytest.raises(ResourceError):
        sample_coefficients(3, 400, RngSpec(0), [0])


def test_field_validation():
    with pytest.raises(PreconditionError):
        field_from_coefficients(1, {(5,): 1.0}, 3)
    with pytest.raises(ConfigurationError):
        SpectralField(1, 2, np.zeros((3, 2), int), np.zeros(3))
    with pytest.raises(PreconditionError):
        SpectralField(1, 1, np.array([[2]]), np.ones(1))
