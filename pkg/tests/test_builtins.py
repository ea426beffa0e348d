import math

import numpy as np
import pytest

from cxact import builtins as B
from cxact.calculus import check_phase, interaction_probe, wirtinger_fd
from cxact.generalize import generalize
from cxact.partition import elu

LAM, ALPHA = 1.0507, 1.67326


def random_complex(seed, n=1000, radius=3.0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def close(a, b, tol):
    return abs(complex(a) - complex(b)) <= tol


# -- worked examples ----------------------------------------------------------------


def test_clrelu_examples():
    assert close(B.clrelu(2 + 0j, 0.2), 2, 1e-15)
    assert close(B.clrelu(-2 + 0j, 0.2), -0.4, 1e-15)
    assert close(B.clrelu(1j, 0.2), -0.4 + 0.6j, 1e-15)


def test_clrelu_cos_examples():
    assert close(B.clrelu_cos(1j, 0.2), 0.6j, 1e-15)
    assert close(B.clrelu_cos(-3 + 0j, 0.2), -0.6, 1e-15)
    assert close(B.clrelu_cos(1 + 1j, 0.0), 0.8535533905932737 * (1 + 1j), 1e-15)


def test_clrelu_abs_examples():
    assert close(B.clrelu_abs(1j, 0.2), 0.848528137423857j, 1e-15)
    assert B.clrelu_abs(4 + 0j, 0.5) == 4
    assert B.clrelu_abs(-4 + 0j, 0.5) == -2


def test_hlrelu_examples():
    assert B.hlrelu(0j, 0.7, 0.3) == 0
    assert close(B.hlrelu(5 + 0j, 0.2, 0.1), 5, 1e-9)
    assert close(B.hlrelu(-5 + 0j, 0.2, 0.1), -1, 1e-8)


def test_selu_family_examples():
    for f in (B.cselu, B.cselu_cos, B.cselu_abs):
        assert close(f(1 + 0j), 1.0507, 1e-15)
        assert close(f(-1 + 0j), -1.1113275400111318, 1e-14)
    got = B.cselu_cos(1j)
    assert close(got, -0.4040959437509043 + 1.2650426634298359j, 1e-14)
    # same number from the component formulas
    assert got.real == pytest.approx(LAM * ALPHA / 2 * (math.cos(1) - 1), rel=1e-14)
    assert got.imag == pytest.approx(LAM / 2 * (ALPHA * math.sin(1) + 1), rel=1e-14)


def test_hselu_examples():
    assert close(B.hselu(3 + 0j, sigma=0.1), 3.1521, 1e-6)
    assert B.hselu(0j) == 0
    assert close(B.hselu(-3 + 0j, sigma=0.1), -1.6705639217849153, 1e-6)


def test_baseline_examples():
    assert close(B.modrelu(1 + 0j, -0.5), 0.5, 1e-15)
    assert B.modrelu(0.3 + 0j, -0.5) == 0
    assert close(B.modrelu(2j, -0.5), 1.5j, 1e-15)
    assert B.screlu(1 - 2j) == 1
    assert B.screlu(-1 - 2j) == 0
    assert B.screlu(3 + 4j) == 3 + 4j
    assert B.zrelu(1 + 2j) == 1 + 2j
    assert B.zrelu(-1 + 2j) == 0
    assert B.zrelu(1 - 0.1j) == 0
    assert B.cardioid(2.5 + 0j) == 2.5
    assert close(B.cardioid(-2.5 + 0j), 0, 1e-15)
    assert close(B.cardioid(1j), 0.5j, 1e-15)


# -- structural equivalence with the factory ---------------------------------------


@pytest.mark.parametrize("name", B.GENERALIZED)
@pytest.mark.parametrize("n", [-2, 0, 1])
def test_builtin_equals_factory(name, n):
    act = B.make_activation(name, n=n, alpha=0.35 if "lrelu" in name else None)
    pa, strategy = act.provenance
    ref = generalize(pa, strategy)
    z = random_complex(11)
    a, b = act(z), ref(z)
    assert np.all(np.abs(a - b) <= 1e-12 * (1 + np.abs(b)))


# -- Table 1 phase column ------------------------------------------------------------


@pytest.mark.parametrize("name", ["clrelu_cos", "clrelu_abs"])
@pytest.mark.parametrize("alpha", [0.01, 0.2, 0.9])
def test_phase_preserved(name, alpha):
    rep = check_phase(B.make_activation(name, alpha=alpha), random_complex(12))
    assert rep.preserving and rep.worst_deviation <= 1e-10


@pytest.mark.parametrize("name", ["clrelu", "hlrelu", "cselu", "cselu_cos", "cselu_abs", "hselu"])
def test_phase_altered_with_witness(name):
    rep = check_phase(B.make_activation(name), random_complex(13))
    assert rep.worst_deviation > 0.05
    f = B.make_activation(name)
    w = rep.witness
    assert abs(np.angle(f(w) * np.conj(w))) > 0.05


# -- degeneracies ---------------------------------------------------------------------


@pytest.mark.parametrize("f", [B.clrelu, B.clrelu_cos, B.clrelu_abs])
def test_relu_degeneracy_on_real_axis(f):
    x = np.linspace(-5, 5, 1001)
    np.testing.assert_array_equal(f(x + 0j, 0.0).real, np.maximum(x, 0))
    np.testing.assert_array_equal(B.cardioid(x + 0j).real, np.maximum(x, 0))


@pytest.mark.parametrize("f", [B.cselu, B.cselu_cos, B.cselu_abs])
def test_elu_degeneracy_on_real_axis(f):
    x = np.linspace(-5, 5, 1000)
    np.testing.assert_allclose(f(x + 0j, lam=1.0, alpha=1.3), elu(1.3).eval_real(x), rtol=1e-14, atol=1e-15)


# -- descriptive interaction column ----------------------------------------------------


def test_interaction_probe_is_descriptive():
    assert not interaction_probe(B.identity)["interaction"]
    assert interaction_probe(B.make_activation("clrelu"))["interaction"]
    # cos LReLU: Re f = c(theta) x depends on y through theta
    assert interaction_probe(B.make_activation("clrelu_cos"))["re_depends_on_y"]
    assert not interaction_probe(B.screlu)["interaction"]


# -- registry & derivatives ------------------------------------------------------------


def test_registry_errors():
    with pytest.raises(KeyError):
        B.make_activation("tanh")
    with pytest.raises(ValueError):
        B.make_activation("modrelu")
    with pytest.raises(ValueError):
        B.make_activation("hselu", sigma=-1)
    assert B.make_activation("modrelu", b=-0.2, alpha=5.0).params == {"b": -0.2}


def test_defaults():
    assert B.make_activation("clrelu").params == {"alpha": 0.2, "n": 0}
    assert B.make_activation("hselu").params == {"alpha": ALPHA, "lam": LAM, "sigma": 0.1}


def test_claims_match_property_table():
    for name, (holo, _, phase) in B.PROPERTY_TABLE.items():
        claims = B.make_activation(name).claims
        assert claims.holomorphic == holo
        assert claims.phase_preserving == phase


@pytest.mark.parametrize("name", ["hlrelu", "hselu", "screlu", "zrelu", "identity"])
def test_closed_form_derivatives(name):
    act = B.make_activation(name, sigma=0.5)
    z = random_complex(14, 200, 1.5)
    z = z[(np.abs(z.real) > 1e-3) & (np.abs(z.imag) > 1e-3)]
    exact = act.wirtinger(z)
    fd = wirtinger_fd(act, z, h=1e-6)
    np.testing.assert_allclose(exact.d_dz, fd.d_dz, atol=1e-7)
    np.testing.assert_allclose(exact.d_dzbar, fd.d_dzbar, atol=1e-7)


def test_selu_overflow_is_not_an_exception():
    out = B.cselu(np.array([800.0 + 1j, 1.0 + 0j]))
    assert not np.isfinite(out[0]) and np.isfinite(out[1])
