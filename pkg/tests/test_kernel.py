import math
from fractions import Fraction

import numpy as np
import pytest

from qszego import quaternion as qt
from qszego.errors import DomainMargin, Singular, SizeMismatch
from qszego.kernel import (
    KernelContext,
    kernel_arg,
    kernel_arg_arr,
    kernel_S,
    ode_residuals,
    s_by_differentiation,
    s_unnorm,
    s_unnorm_arr,
    slice_components,
)
from qszego.quaternion import ONE, Quaternion
from qszego.siegel import SiegelPoint, dilate, lift, random_group_element, random_interior, rotate_a, rotate_sigma, translate

E = Quaternion.exact
Z = E(0, 0, 0, 0)


def _sigma(rng):
    while True:
        s = qt.random_quaternion(rng)
        if 0.5 < abs(s) < 4:
            return s


def test_kernel_argument_examples():
    e = SiegelPoint(E(1, 0, 0, 0), (Z,))
    assert kernel_arg(e, e) == E(2, 0, 0, 0)
    q = SiegelPoint(E(2, 1, 0, 0), (E(1, 0, 0, 0),))
    assert kernel_arg(q, q) == E(2, 0, 0, 0)
    assert kernel_arg(e, e, variant="boundary_minus") == Z
    with pytest.raises(SizeMismatch):
        kernel_arg(e, SiegelPoint(E(1, 0, 0, 0), ()))
    with pytest.raises(ValueError):
        kernel_arg(e, e, variant="other")


def test_profile_examples():
    assert s_unnorm(E(1, 0, 0, 0), 0) == ONE
    assert s_unnorm(E(2, 0, 0, 0), 0) == E(Fraction(1, 8), 0, 0, 0)
    # x^{-3} differentiated twice: 12 x^{-5}
    assert s_unnorm(E(2, 0, 0, 0), 1) == E(Fraction(12, 32), 0, 0, 0)
    s = E(1, 1, 0, 0)
    assert s_unnorm(s, 0) == s.conj() * Fraction(1, 4)
    with pytest.raises(Singular):
        s_unnorm(Z, 1)
    with pytest.raises(ValueError):
        s_unnorm(ONE, -1)


@pytest.mark.parametrize("n", [1, 2])
def test_profile_against_differentiation(n):
    rng = np.random.default_rng(10 + n)
    for _ in range(50):
        s = _sigma(rng)
        a = s_unnorm(s, n)
        b = s_by_differentiation(s, n)
        assert abs(a - b) < 1e-5 * abs(b)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_vectorised_profile(n):
    rng = np.random.default_rng(n)
    sig = rng.normal(size=(40, 4))
    sig[0, 1:] = 0.0
    got = s_unnorm_arr(sig, n)
    for s, g in zip(sig, got):
        ref = s_unnorm(Quaternion(*s), n).to_array()
        np.testing.assert_allclose(g, ref, rtol=1e-11, atol=1e-11 * np.abs(ref).max())


def test_vectorised_argument():
    rng = np.random.default_rng(3)
    q = random_interior(2, rng)
    p = random_interior(2, rng)
    a = kernel_arg_arr(q.q1.to_array(), np.array([x.to_array() for x in q.qprime]), p.q1.to_array(), np.array([x.to_array() for x in p.qprime]))
    np.testing.assert_allclose(a, kernel_arg(q, p).to_array(), rtol=1e-14, atol=1e-14)


def test_context_rules():
    ctx = KernelContext(1)
    assert ctx.m == 1
    assert ctx.constant("paper") == pytest.approx(6237 / 872 / math.pi**3)
    assert ctx.constant("unnormalized") == 1.0
    with pytest.raises(ValueError):
        ctx.constant("empirical")
    assert ctx.with_c_emp(0.5).constant("empirical") == 0.5
    with pytest.raises(ValueError):
        KernelContext(2, m=1)
    assert KernelContext(2, m=1, allow_mismatched_dimension=True).m == 1
    with pytest.raises(ValueError):
        KernelContext(0).constant("paper")


def test_kernel_singular_and_exact_path():
    ctx = KernelContext(1)
    e = SiegelPoint(E(1, 0, 0, 0), (Z,))
    assert kernel_S(e, e, ctx, "unnormalized") == E(Fraction(3, 8), 0, 0, 0)
    b = lift(random_group_element(1, np.random.default_rng(0)))
    with pytest.raises(Singular):
        kernel_S(b, b, ctx)
    with pytest.raises(SizeMismatch):
        kernel_S(SiegelPoint(ONE, ()), SiegelPoint(ONE, ()), ctx)


def test_hermitian_symmetry():
    rng = np.random.default_rng(4)
    ctx = KernelContext(2)
    for _ in range(20):
        q, p = random_interior(2, rng), random_interior(2, rng)
        a, b = kernel_S(q, p, ctx), kernel_S(p, q, ctx).conj()
        assert abs(a - b) <= 1e-12 * abs(a)


@pytest.mark.parametrize("n", [1, 2])
def test_invariances(n):
    rng = np.random.default_rng(20 + n)
    ctx = KernelContext(n)
    for _ in range(10):
        q, p = random_interior(n, rng), random_interior(n, rng)
        base = kernel_S(q, p, ctx)
        h = lift(random_group_element(n, rng))
        assert abs(kernel_S(translate(h, q), translate(h, p), ctx) - base) <= 1e-10 * abs(base)
        a = qt.random_sp(n, rng)
        assert abs(kernel_S(rotate_a(a, q), rotate_a(a, p), ctx) - base) <= 1e-10 * abs(base)
        u = qt.random_unit(rng)
        rot = u * kernel_S(rotate_sigma(u, q), rotate_sigma(u, p), ctx) * u.conj()
        assert abs(rot - base) <= 1e-10 * abs(base)
        r = 1.7
        dil = kernel_S(dilate(r, q), dilate(r, p), ctx) * r ** (4 * n + 6)
        assert abs(dil - base) <= 1e-10 * abs(base)


@pytest.mark.parametrize("n", [1, 2])
def test_slice_and_ode(n):
    f = slice_components(0.7, -0.4, n)
    assert f[2] == 0.0 and f[3] == 0.0
    for theta in np.linspace(-1.15, 1.15, 23):
        r1, r2 = ode_residuals(float(theta), n)
        assert abs(r1) < 1e-6 and abs(r2) < 1e-6
    with pytest.raises(DomainMargin):
        ode_residuals(1.57, n)
    with pytest.raises(Singular):
        slice_components(0, 0, n)


@pytest.mark.parametrize("n", [1, 2])
def test_homogeneity(n):
    rng = np.random.default_rng(30 + n)
    for _ in range(10):
        s = _sigma(rng)
        t = float(rng.uniform(0.3, 3.0))
        lhs = s_unnorm(s * t, n)
        rhs = s_unnorm(s, n) * t ** (-3 - 2 * n)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
