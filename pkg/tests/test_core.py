import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxact.core import ErfOverflowError, arg_principal, complex_erf, erf_sigmoid, erf_sigmoid_derivative, unit_phase
from oracles import erf_maclaurin

finite = st.floats(min_value=-4, max_value=4, allow_nan=False)


def random_disk(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    t = rng.uniform(-np.pi, np.pi, n)
    return r * np.exp(1j * t)


@pytest.mark.parametrize(
    "z, expected",
    [(1 + 0j, 0.0), (-1 + 0j, math.pi), (1j, math.pi / 2), (0j, 0.0), (complex(-1, -0.0), math.pi), (-1j, -math.pi / 2)],
)
def test_arg_principal_examples(z, expected):
    assert arg_principal(z) == expected


def test_arg_principal_range_and_scaling():
    rng = np.random.default_rng(0)
    z = random_disk(rng, 1000, 5.0)
    r = rng.uniform(1e-3, 1e3, 1000)
    theta = arg_principal(z)
    assert np.all((theta > -np.pi) & (theta <= np.pi))
    np.testing.assert_allclose(arg_principal(r * z), theta, rtol=0, atol=1e-15)


def test_unit_phase_exact_endpoints():
    for n in range(-3, 4):
        assert unit_phase(math.pi, n) == -1
        assert unit_phase(0.0, n) == 1


def test_erf_examples():
    assert complex_erf(0j) == 0
    assert abs(complex_erf(1 + 0j) - 0.8427007929) < 1e-10
    assert abs(complex_erf(1j) - 1.6504257588j) < 1e-10
    assert complex_erf(1 - 1j) == np.conj(complex_erf(1 + 1j))


def test_erf_against_series_oracle_on_grid():
    xs = np.linspace(-4, 4, 10)
    z = (xs[None, :] + 1j * xs[:, None]).ravel()
    got = complex_erf(z)
    for zi, gi in zip(z, got):
        want = erf_maclaurin(zi)
        assert abs(gi - want) <= 1e-10 * abs(want), zi


@pytest.mark.parametrize("z", [12 + 0j, 10 + 6j, 0.5 + 12j, 3 + 3j, 2.01 + 2.3j, 1.99 + 2.3j, 3 + 0.01j, -7 + 2j])
def test_erf_extended_domain(z):
    want = erf_maclaurin(z)
    assert abs(complex_erf(z) - want) <= 1e-10 * abs(want)


def test_erf_crossover_is_continuous():
    # both sides of each algorithm switch agree with the oracle
    for z in [3.0 + 1e-9j, 3.0000001 + 0j, 2.0 + 3j, 2.0 - 1e-12 + 3j, 2.9 + 0.9j]:
        want = erf_maclaurin(z)
        assert abs(complex_erf(z) - want) <= 1e-12 * abs(want)


def test_erf_symmetries_random():
    rng = np.random.default_rng(1)
    z = random_disk(rng, 1000, 4.0)
    e = complex_erf(z)
    assert np.all(np.abs(e + complex_erf(-z)) <= 1e-12 * (1 + np.abs(e)))
    assert np.all(complex_erf(np.conj(z)) == np.conj(e))


@settings(max_examples=200, deadline=None)
@given(finite, finite)
def test_erf_odd_and_conjugate(x, y):
    z = complex(x, y)
    e = complex_erf(z)
    assert complex_erf(-z) == -e
    assert complex_erf(z.conjugate()) == e.conjugate()


def test_erf_real_axis_is_real_and_bounded():
    x = np.linspace(-30, 30, 601)
    e = complex_erf(x)
    assert np.all(e.imag == 0)
    assert np.all(np.abs(e.real) <= 1)
    assert np.all(np.diff(e.real) >= 0)


def test_erf_shape_and_scalar():
    z = np.zeros((3, 4), dtype=complex)
    assert complex_erf(z).shape == (3, 4)
    assert np.ndim(complex_erf(0.5)) == 0


def test_erf_overflow_signal():
    with pytest.raises(ErfOverflowError):
        complex_erf(30j)
    with pytest.raises(OverflowError):
        complex_erf(np.array([0.1, 0.2 + 40j]))


def test_erf_rejects_nan():
    with pytest.raises(ValueError):
        complex_erf(complex(np.nan, 0))


def test_erf_sigmoid_examples():
    assert erf_sigmoid(0j, 1.0) == 0.5
    eps = 1 - erf_sigmoid(5 + 0j, 0.5)
    assert 0 <= eps.real < 1e-10 and eps.imag == 0


def test_erf_sigmoid_partition_of_unity():
    rng = np.random.default_rng(2)
    z = random_disk(rng, 1000, 4.0)
    for sigma in (0.1, 0.5, 1.0):
        w = z * sigma * math.sqrt(2) / 1.0  # keep erf argument inside |.| <= 4
        s = erf_sigmoid(w, sigma) + erf_sigmoid(-w, sigma)
        assert np.max(np.abs(s - 1)) <= 1e-12


def test_erf_sigmoid_monotone_on_real_axis():
    x = np.linspace(-3, 3, 2001)
    s = erf_sigmoid(x, 0.3).real
    assert np.all(np.diff(s) >= 0)
    assert s[0] >= 0 and s[-1] <= 1


def test_erf_sigmoid_rejects_bad_sigma():
    with pytest.raises(ValueError):
        erf_sigmoid(1.0, 0.0)
    with pytest.raises(ValueError):
        erf_sigmoid_derivative(1.0, -1.0)


def test_erf_sigmoid_derivative_matches_difference_quotient():
    z = np.array([0.3 + 0.2j, -0.5 + 0.1j, 1.2 - 0.7j])
    h = 1e-6
    fd = (erf_sigmoid(z + h, 0.7) - erf_sigmoid(z - h, 0.7)) / (2 * h)
    np.testing.assert_allclose(erf_sigmoid_derivative(z, 0.7), fd, rtol=1e-8)
