import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from noiselab import lattice
from noiselab.errors import ConfigurationError, PreconditionError
from noiselab.lattice import ShellSpec


def brute_ball(d, R):
    n = int(math.floor(R))
    return sorted(k for k in itertools.product(range(-n, n + 1), repeat=d) if math.sqrt(sum(c * c for c in k)) <= R)


def brute_shell(d, j, kind):
    if kind == "half":
        lo, hi = 2 ** (j - 0.5), 2 ** (j + 0.5)
        ok = lambda r: lo < r <= hi
    else:
        lo, hi = (0, 2) if j == 0 else (2 ** (j - 1), 2 ** (j + 1))
        ok = lambda r: lo <= r <= hi
    n = int(2 ** (j + 1)) + 1
    return [k for k in itertools.product(range(-n, n + 1), repeat=d) if ok(math.sqrt(sum(c * c for c in k)))]


@pytest.mark.parametrize("d,R,count", [(1, 2.5, 5), (2, 1.0, 5), (2, 2**0.5, 9)])
def test_enumerate_ball_small(d, R, count):
    pts = lattice.enumerate_ball(d, R)
    assert len(pts) == count
    assert sorted(map(tuple, pts.tolist())) == brute_ball(d, R)


def test_enumerate_ball_lexicographic():
    pts = lattice.enumerate_ball(2, 3.0)
    assert [tuple(p) for p in pts.tolist()] == sorted(tuple(p) for p in pts.tolist())


@pytest.mark.parametrize("d,Rmax", [(1, 32), (2, 32), (3, 12)])
def test_enumerate_ball_matches_brute_force(d, Rmax):
    prev = 0
    for R in np.linspace(0, Rmax, 17):
        n = len(lattice.enumerate_ball(d, float(R)))
        assert n == len(brute_ball(d, float(R)))
        assert n >= prev
        prev = n


@pytest.mark.parametrize(
    "d,j,count,members",
    [(1, 1, 2, {-2, 2}), (1, 2, 6, {-5, -4, -3, 3, 4, 5}), (2, 1, 16, None)],
)
def test_half_shells(d, j, count, members):
    spec = ShellSpec(j, "half")
    assert lattice.shell_count(d, spec) == count
    m = lattice.shell_members(d, spec)
    if members is not None:
        assert set(m[:, 0].tolist()) == members


@pytest.mark.parametrize("d,j,kind", [(1, j, k) for j in range(1, 7) for k in ("half", "unit")] + [(2, j, k) for j in range(1, 4) for k in ("half", "unit")])
def test_shells_match_brute_force(d, j, kind):
    assert lattice.shell_count(d, ShellSpec(j, kind)) == len(brute_shell(d, j, kind))


def test_unit_shell_j2_has_14_members():
    assert lattice.shell_count(1, ShellSpec(2, "unit")) == 14


def test_boundary_uses_exact_integers():
    # |k|^2 = 2^(2j+1) is attainable in d = 2: (4, 4) has |k|^2 = 32 = 2^5
    k2 = np.array([32])
    assert lattice.shell_mask(k2, 2, "half")[0]
    assert not lattice.shell_mask(k2, 3, "half")[0]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_half_shells_disjoint(d):
    J = {1: 8, 2: 5, 3: 3}[d]
    pts = lattice.ball_indices(d, 4 ** (J + 1))
    k2 = lattice.squared_norms(pts)
    hits = sum(lattice.shell_mask(k2, j, "half").astype(int) for j in range(1, J + 1))
    assert hits.max() == 1
    # every point with |k| > sqrt(2) up to the last shell is covered
    covered = (k2 > 2) & (k2 <= 2 ** (2 * J + 1))
    assert np.all(hits[covered] == 1)


@pytest.mark.parametrize("d,v", [(1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_ball_volume(d, v):
    assert lattice.ball_volume(d) == pytest.approx(v, rel=1e-14)


def test_shell_count_limits():
    assert lattice.shell_count_limit(1, "half") == pytest.approx(math.sqrt(2), rel=1e-14)
    assert lattice.shell_count_limit(1, "unit") == pytest.approx(3.0, rel=1e-14)
    assert lattice.shell_count_limit(2, "half") == pytest.approx(1.5 * math.pi, rel=1e-14)


def test_count_convergence_d1():
    lim = lattice.shell_count_limit(1, "half")
    errs = [abs(2.0**-j * lattice.shell_count(1, ShellSpec(j, "half")) - lim) for j in range(1, 15)]
    for j, e in enumerate(errs, start=1):
        assert e <= 4 * 2.0**-j
    assert errs[-1] < 1e-3
    # envelope 2^j * err stays bounded for j >= 4
    env = [e * 2**j for j, e in enumerate(errs, start=1)][3:]
    assert max(env) <= 4


def test_count_convergence_d2():
    lim = lattice.shell_count_limit(2, "half")
    err = abs(2.0**-14 * lattice.shell_count(2, ShellSpec(7, "half")) - lim) / lim
    assert err < 0.01


def test_errors():
    with pytest.raises(ConfigurationError):
        lattice.enumerate_ball(5, 1.0)
    with pytest.raises((ConfigurationError, PreconditionError)):
        ShellSpec(0, "half")
    with pytest.raises((ConfigurationError, PreconditionError)):
        lattice.enumerate_ball(1, -1.0)


@given(st.integers(1, 3), st.floats(0, 9))
def test_ball_property(d, R):
    pts = lattice.enumerate_ball(d, R)
    r = np.sqrt(lattice.squared_norms(pts))
    assert np.all(r <= R)
    # symmetric under k -> -k
    assert set(map(tuple, pts.tolist())) == set(map(tuple, (-pts).tolist()))
