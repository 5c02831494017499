import math

import numpy as np
import pytest

from qszego.errors import TailTooFat
from qszego.kernel import KernelContext
from qszego.quadrature import (
    BoundaryFunction,
    QuadratureSpec,
    ball_rule,
    c_emp,
    check_symmetry,
    decay_bound_holds,
    hardy_norm_sq,
    integrate_boundary,
    kernel_section_interior,
    normalization_boundary_function,
    radial_rule,
    reproduction_check,
    sphere_area,
    sphere_rule,
)
from qszego.quaternion import Quaternion
from qszego.siegel import HeisenbergElement, SiegelPoint, random_interior


def gauss(m):
    def f(w, z):
        r2 = np.sum(w * w, axis=-1) + (np.sum(z * z, axis=(-1, -2)) if m else 0.0)
        return np.exp(-r2)

    return BoundaryFunction(f, m)


def test_radial_rule_moments():
    r, w = radial_rule(48, 3, 1.0)
    assert w @ np.exp(-r * r) == pytest.approx(math.sqrt(math.pi) / 4, rel=1e-10)
    r, w = radial_rule(24, 1, 1.0, truncation=2.0)
    assert r.max() < 2.0
    assert w.sum() == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4, 8])
def test_sphere_rule_integrates_polynomials(dim):
    pts, w = sphere_rule(dim, 6)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    assert w.sum() == pytest.approx(sphere_area(dim), rel=1e-12)
    # int x1^2 over S^{d-1} = area/d, int x1^4 = 3 area/(d(d+2))
    assert w @ pts[:, 0] ** 2 == pytest.approx(sphere_area(dim) / dim, rel=1e-12)
    assert w @ pts[:, -1] ** 4 == pytest.approx(3 * sphere_area(dim) / (dim * (dim + 2)), rel=1e-12)


def test_ball_rule_volume():
    pts, w = ball_rule(3, 32, 6, 1.0, truncation=1.0)
    assert w.sum() == pytest.approx(4 * math.pi / 3, rel=1e-10)


def test_gaussian_integrals():
    res = integrate_boundary(gauss(0), 0, QuadratureSpec(radial_nodes=48))
    assert res.real == pytest.approx(math.pi**1.5, rel=1e-10)
    assert abs(res.real - math.pi**1.5) <= res.abs_error_estimate < 1e-6
    res = integrate_boundary(gauss(1), 1, QuadratureSpec(radial_nodes=32, angular_nodes=6))
    assert res.real == pytest.approx(math.pi**1.5 * math.pi**2, rel=1e-7)
    assert abs(res.real - math.pi**3.5) <= res.abs_error_estimate


def test_group_centring_does_not_change_value():
    f = gauss(1)
    c = HeisenbergElement(Quaternion(0.0, 0.3, -0.2, 0.1), (Quaternion(0.2, 0.0, 0.1, -0.1),))
    spec = QuadratureSpec(radial_nodes=24, angular_nodes=4)
    a = integrate_boundary(f, 1, spec).real
    b = integrate_boundary(f, 1, spec, center=c).real
    assert a == pytest.approx(b, rel=1e-4)


def test_fat_tail_is_refused():
    f = BoundaryFunction(lambda w, z: 1.0 / (1.0 + np.sum(w * w, axis=-1)), 0)
    with pytest.raises(TailTooFat):
        integrate_boundary(f, 0, QuadratureSpec())


def test_dimension_mismatch_refused():
    with pytest.raises(ValueError):
        integrate_boundary(gauss(1), 0)


def test_spec_validation_and_hash():
    with pytest.raises(ValueError):
        QuadratureSpec(method="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(radial_nodes=0)
    with pytest.raises(ValueError):
        QuadratureSpec(target_rel_tol=2.0)
    with pytest.raises(ValueError):
        QuadratureSpec(seed=-1)
    a, b = QuadratureSpec(), QuadratureSpec(seed=1)
    assert a.spec_hash() == QuadratureSpec().spec_hash() != b.spec_hash()
    assert a.to_json()["truncation_radius"] == "inf"


def test_monte_carlo_is_deterministic_and_agrees():
    spec = QuadratureSpec(method="monte_carlo", mc_samples=1 << 17, seed=7)
    f = normalization_boundary_function(1)
    a = integrate_boundary(f, 1, spec)
    b = integrate_boundary(f, 1, spec)
    assert a.value == b.value
    ref = integrate_boundary(f, 1, QuadratureSpec(radial_nodes=32, angular_nodes=6)).real
    assert abs(a.real - ref) < 5 * a.abs_error_estimate + 0.05 * ref
    c = integrate_boundary(f, 1, QuadratureSpec(method="monte_carlo", mc_samples=1 << 17, seed=8))
    assert c.value != a.value


def test_adaptive_refines():
    spec = QuadratureSpec(method="adaptive", radial_nodes=8, angular_nodes=3, target_rel_tol=1e-8)
    res = integrate_boundary(gauss(0), 0, spec)
    assert res.real == pytest.approx(math.pi**1.5, rel=1e-8)
    assert res.details["levels"] >= 2


@pytest.mark.parametrize("n", [0, 1])
def test_reduced_and_full_normalisation_agree(n):
    red = c_emp(n)
    full = c_emp(n, QuadratureSpec(radial_nodes=32, angular_nodes=6), reduced=False)
    assert red.value == pytest.approx(full.value, rel=1e-5)


def test_empirical_constant_at_n0():
    assert c_emp(0).value == pytest.approx(1 / (2 * math.pi**2), rel=1e-6)
    assert c_emp(0).ratio_to_paper is None


def test_symmetry_check_rejects_non_radial():
    rng = np.random.default_rng(0)
    check_symmetry(normalization_boundary_function(1), 1, rng)
    bad = BoundaryFunction(lambda w, z: np.exp(-np.sum(w * w, axis=-1)) * (1 + w[:, 0]), 1)
    with pytest.raises(ValueError):
        check_symmetry(bad, 1, rng)


def test_hardy_norm_of_kernel_section():
    rng = np.random.default_rng(1)
    p = random_interior(1, rng)
    F = kernel_section_interior(p, KernelContext(1))
    res = hardy_norm_sq(F, 1, QuadratureSpec(radial_nodes=16, angular_nodes=4), [0.5, 0.25, 0.1])
    assert res.monotone
    assert res.value == res.values[-1] > 0
    zero = hardy_norm_sq(lambda Q1, Qp: np.zeros_like(Q1), 1, QuadratureSpec(radial_nodes=8, angular_nodes=3), [0.1])
    assert zero.value == 0.0
    with pytest.raises(ValueError):
        hardy_norm_sq(F, 1, QuadratureSpec(), [0.1, 0.2])


def test_decay_bound():
    rng = np.random.default_rng(2)
    for n in (0, 1, 2):
        w = rng.normal(size=(500, 3)) * 3
        z = rng.normal(size=(500, n, 4))
        assert decay_bound_holds(n, w, z, 0.0, 0.05)


def test_reproduction_for_n0():
    rng = np.random.default_rng(3)
    ctx = KernelContext(0).with_c_emp(c_emp(0).value)
    q = SiegelPoint(Quaternion(1.2, 0.1, 0.0, -0.2), ())
    p = SiegelPoint(Quaternion(0.8, -0.3, 0.2, 0.0), ())
    chk = reproduction_check(q, p, ctx, QuadratureSpec(radial_nodes=48, angular_nodes=16))
    assert chk.rel_error < 1e-6
