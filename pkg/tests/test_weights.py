import math

import numpy as np
import pytest
from scipy.special import gamma as sp_gamma, gammaincc

from lmoment.errors import QuadratureFailure
from lmoment.weights import (DEFAULT_V1, TestFunction, WeightSpec,
                             complex_gamma, complex_loggamma, default_bump,
                             default_psi_spec, default_v2_spec, g_pm, mellin,
                             psi_bound, psi_pm, psi_pm_many, v1, v1_bound,
                             v1_many, v2, v2_bound, v2_many)

T_F = 13.7797513518907


def test_complex_gamma_against_scipy():
    rng = np.random.default_rng(0)
    z = rng.uniform(0.1, 6, 40) + 1j * rng.uniform(-20, 20, 40)
    ours = np.array([complex_gamma(complex(v)) for v in z]).ravel()
    ref = sp_gamma(z)
    assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-12


def test_loggamma_reflection_left_half_plane():
    # Gamma(z) Gamma(1-z) = pi / sin(pi z), probed through the reflection path
    for z in (-0.3 + 4j, -2.7 - 9j, -5.5 + 0.4j):
        lg = complex(np.atleast_1d(complex_loggamma(z))[0])
        ref = complex(np.atleast_1d(complex_loggamma(1 - z))[0])
        prod = np.exp(lg + ref)
        want = math.pi / np.sin(math.pi * z)
        assert abs(prod - want) / abs(want) < 1e-11


def test_v1_closed_form():
    # V1(x) = Q(1/4, pi x^2), the normalized upper incomplete gamma
    xs = np.geomspace(1e-3, 10.0, 50)
    for x in xs:
        want = float(gammaincc(0.25, math.pi * x * x))
        assert abs(v1(float(x)) - want) < 1e-10


def test_v1_small_x_structure():
    # V1(x) = 1 - (4/Gamma(1/4)) (sqrt(pi) x)^{1/2} + O(x^{3/2}): the
    # deviation from 1 is genuinely of size sqrt(x), not smaller
    c = 4.0 / math.gamma(0.25)
    for x in (1e-8, 1e-6, 1e-4):
        lead = c * math.sqrt(math.sqrt(math.pi) * x)
        assert abs(v1(x) - 1.0 + lead) < 0.05 * lead
    assert abs(v1(1e-8) - 1.0) > 1e-5   # the naive "equals 1" reading fails


def test_v2_small_x_structure():
    val = v2(1e-6, T_F)
    assert abs(val - 1.0) < 5e-3
    assert abs(val - 1.0) > 1e-5


def test_two_abscissa_agreement():
    xs = np.geomspace(0.05, 3.0, 20)
    for x in xs:
        a = v1(float(x), WeightSpec(kind="V1", c=0.7, tol=1e-10))
        b = v1(float(x), WeightSpec(kind="V1", c=1.6, tol=1e-10))
        assert abs(a - b) < 2e-10
        a = v2(float(x), T_F, WeightSpec(kind="V2", c=0.7, tol=1e-10, T_f=T_F))
        b = v2(float(x), T_F, WeightSpec(kind="V2", c=1.6, tol=1e-10, T_f=T_F))
        assert abs(a - b) < 2e-10


def test_psi_two_abscissa_agreement():
    psi = default_bump()
    for x in np.geomspace(0.5, 20.0, 6):
        for sign in (+1, -1):
            kind = "PsiPlus" if sign > 0 else "PsiMinus"
            a = psi_pm(float(x), psi, T_F, sign,
                       WeightSpec(kind=kind, c=0.0, tol=1e-9, T_f=T_F))
            b = psi_pm(float(x), psi, T_F, sign,
                       WeightSpec(kind=kind, c=0.5, tol=1e-9, T_f=T_F))
            assert abs(a - b) < 2e-9


def test_batch_matches_scalar():
    xs = np.geomspace(0.01, 5.0, 25)
    vb = v1_many(xs)
    for i, x in enumerate(xs):
        assert abs(vb[i] - v1(float(x))) < 3e-10
    vb = v2_many(xs, T_F)
    for i, x in enumerate(xs):
        assert abs(vb[i] - v2(float(x), T_F)) < 3e-10


def test_psi_batch_matches_scalar():
    psi = default_bump()
    xs = np.geomspace(0.8, 50.0, 8)
    pp, pm = psi_pm_many(xs, psi, T_F)
    for i, x in enumerate(xs):
        assert abs(pp[i] - psi_pm(float(x), psi, T_F, +1)) < 3e-9
        assert abs(pm[i] - psi_pm(float(x), psi, T_F, -1)) < 3e-9


def test_bump_profile_and_mellin():
    psi = default_bump()
    assert psi(0.99) == 0.0 and psi(2.01) == 0.0
    assert psi(1.5) == 1.0     # normalization peak: exp(4 - 1/(1/4 * ... ))
    # Mellin at s=1 is the plain integral of the bump
    x = np.linspace(1.0, 2.0, 200001)
    direct = np.trapezoid(psi(x), x)
    assert abs(mellin(psi, 1.0) - direct) < 1e-9
    # integration-by-parts decay certificate is an actual upper bound
    bound = psi.mellin_line_bound(0.0, k=8)
    for t in (10.0, 40.0, 160.0):
        assert abs(mellin(psi, 1j * t)) <= bound(t)


def test_mellin_decay_is_stretched_exponential():
    # |psi~(it)| ~ exp(-a sqrt t) with a around 1.06; require at least 0.8
    psi = default_bump()
    v40 = abs(mellin(psi, 1j * 40.0))
    v640 = abs(mellin(psi, 1j * 640.0))
    assert v640 < v40 * math.exp(-0.8 * (math.sqrt(640) - math.sqrt(40)))


def test_v_bounds_dominate_values():
    # the certified bound must dominate the true value; the computed value
    # carries quadrature noise of order tol, hence the additive allowance
    for x in np.geomspace(0.2, 6.0, 12):
        assert abs(v1(float(x))) <= v1_bound(float(x)) + 1e-9
        assert abs(v2(float(x), T_F)) <= v2_bound(float(x), T_F) + 1e-9


def test_psi_bounds_dominate_values():
    psi = default_bump()
    for x in (1.0, 3.0, 10.0, 100.0):
        for sign in (+1, -1):
            val = abs(psi_pm(float(x), psi, T_F, sign))
            assert val <= psi_bound(float(x), T_F, sign) + 1e-9


def test_psi_small_x_vanishes_linearly():
    # shifting left to Re s = -0.9 shows Psi(x) = O(x^{0.9}); the ratio
    # |Psi(x)| / x stays bounded on [1e-4, 1e-1]
    psi = default_bump()
    xs = np.geomspace(1e-4, 1e-1, 6)
    pp, pm = psi_pm_many(xs, psi, T_F)
    for sign, vals in ((+1, pp), (-1, pm)):
        for x, v in zip(xs, vals):
            assert abs(v) <= psi_bound(float(x), T_F, sign)
            assert abs(v) / x < 50.0


def test_psi_large_x_decay():
    psi = default_bump()
    xs = np.array([100.0, 1000.0, 10000.0])
    _, pm = psi_pm_many(xs, psi, T_F)
    # minus kernel decay steepens past x ~ 100: at least x^{-2} from there
    for i in range(1, len(xs)):
        assert abs(pm[i]) < abs(pm[0]) * (xs[0] / xs[i]) ** 2


def test_psi_batch_abscissa_independence():
    psi = default_bump()
    xs = np.geomspace(0.8, 20.0, 6)
    p0, m0 = psi_pm_many(xs, psi, T_F)
    p5, m5 = psi_pm_many(xs, psi, T_F, sigma=0.5)
    assert np.max(np.abs(p0 - p5)) < 2e-9
    assert np.max(np.abs(m0 - m5)) < 2e-9
    with pytest.raises(ValueError):
        psi_pm_many(xs, psi, T_F, sigma=-0.5)


def test_weightspec_validation():
    with pytest.raises(ValueError):
        WeightSpec(kind="V1", c=-1.0, tol=1e-10)
    with pytest.raises(ValueError):
        WeightSpec(kind="PsiPlus", c=-2.0, tol=1e-9)
    with pytest.raises(ValueError):
        psi_pm(1.0, default_bump(), T_F, +1, default_psi_spec(-1, T_F))


def test_v2_spec_default():
    spec = default_v2_spec(T_F)
    assert spec.kind == "V2" and spec.T_f == T_F
    assert DEFAULT_V1.kind == "V1"
