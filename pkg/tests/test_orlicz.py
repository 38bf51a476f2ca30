import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize, special

from noiselab.errors import DivergenceError, PreconditionError
from noiselab.orlicz import THETA_UNIT, WeightSequence, hv_upper_bound, luxemburg_rho, theta, theta_sum

U_STAR = math.exp(special.lambertw(0.5).real / 2)


def rho_oracle(sig):
    sig = np.asarray(sig, float)
    f = lambda t: np.sum(sig**2 / t**2 * np.exp(-0.5 * t**2 / sig**2)) - 1
    return optimize.brentq(f, sig.max() / 2, 10 * np.sqrt(np.sum(sig**2)) + sig.max(), xtol=1e-15, rtol=1e-15)


def test_theta_values():
    assert theta(0.0) == 0.0
    assert theta(1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    x = np.linspace(0.05, 10, 1000)
    assert np.all(np.diff(theta(x)) > 0)
    assert np.all(theta(x) <= x * x)
    with pytest.raises(PreconditionError):
        theta(-1.0)


def test_theta_unit():
    assert THETA_UNIT == pytest.approx(U_STAR, rel=1e-14)
    assert THETA_UNIT == pytest.approx(1.1922793, abs=1e-7)
    assert theta(THETA_UNIT) == pytest.approx(1.0, abs=1e-14)


def test_rho_simple():
    assert luxemburg_rho([]) == 0.0
    assert luxemburg_rho([0, 0]) == 0.0
    for a in (0.1, 1.0, 7.0):
        assert luxemburg_rho([a]) == pytest.approx(a / U_STAR, rel=1e-13)


def test_rho_geometric_order():
    r = luxemburg_rho(WeightSequence.geometric(0.5, start=1))
    assert r == pytest.approx(rho_oracle(0.5 ** np.arange(1, 60)), rel=1e-10)
    assert 0.25 <= r / math.sqrt(math.log(2)) <= 4


def test_rho_matches_brentq_oracle():
    rng = np.random.default_rng(0)
    for _ in range(50):
        sig = rng.exponential(size=rng.integers(2, 40))
        assert luxemburg_rho(sig) == pytest.approx(rho_oracle(sig), rel=1e-10)


def test_hv_upper_bound():
    assert hv_upper_bound(0, []) == 0.0
    assert hv_upper_bound(1, [1.0]) == pytest.approx(1 + 3 * math.sqrt(2) / U_STAR, rel=1e-13)
    alpha = 0.75
    b = hv_upper_bound(0, WeightSequence.geometric(alpha, start=0))
    ref = math.sqrt(math.log(1 / (1 - alpha)))
    assert math.isfinite(b) and 0.25 <= b / (3 * math.sqrt(2)) / ref <= 4
    with pytest.raises(PreconditionError):
        hv_upper_bound(-1, [1.0])


def test_certificate():
    rng = np.random.default_rng(5)
    for _ in range(100):
        sig = rng.random(rng.integers(1, 30))
        t = luxemburg_rho(sig)
        assert theta_sum(sig, t) <= 1.0
        assert theta_sum(sig, t * (1 - 1e-10)) > 1.0


def test_divergent_sequences_rejected():
    with pytest.raises(DivergenceError):
        WeightSequence.geometric(1.0)
    with pytest.raises(DivergenceError):
        luxemburg_rho(WeightSequence(term=lambda n: 1.0 / np.sqrt(n), tail_sq=lambda n: math.inf))
    with pytest.raises(DivergenceError):
        luxemburg_rho([1.0, math.inf])
    with pytest.raises(PreconditionError):
        luxemburg_rho([1.0, -1.0])


def test_lazy_truncation_is_certified():
    seq = WeightSequence.geometric(0.9, start=1)
    arr = seq.materialise(1e-10)
    assert seq.tail_sq(len(arr) + 1) <= 1e-20


positive = st.lists(st.floats(1e-6, 1e3), min_size=1, max_size=30)


@given(positive, st.floats(1e-3, 1e3))
def test_homogeneity(sig, c):
    assert luxemburg_rho(c * np.array(sig)) == pytest.approx(c * luxemburg_rho(sig), rel=1e-9)


@given(positive, st.data())
def test_monotonicity(sig, data):
    sig = np.array(sig)
    shrink = np.array(data.draw(st.lists(st.floats(0, 1), min_size=len(sig), max_size=len(sig))))
    assert luxemburg_rho(sig * shrink) <= luxemburg_rho(sig) * (1 + 1e-12)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=40))
def test_dominance_by_dyadic_sequence(u):
    a = np.array(u) * 0.5 ** np.arange(1, len(u) + 1)
    assert luxemburg_rho(a) <= luxemburg_rho(WeightSequence.geometric(0.5, start=1)) * (1 + 1e-9)


@given(positive)
def test_rho_between_simple_bounds(sig):
    sig = np.array(sig)
    r = luxemburg_rho(sig)
    assert sig.max() / U_STAR * (1 - 1e-12) <= r <= np.linalg.norm(sig) * (1 + 1e-12)
