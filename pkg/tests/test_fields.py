import numpy as np
import pytest

from dissipaq.errors import DimensionMismatchError
from dissipaq.fields import CubicBarrier, Polynomial, Quadratic


def test_quadratic_value_gradient_hessian():
    field = Quadratic(np.array([[2.0, 0.5], [0.5, 1.0]]), linear=[1.0, 0.0], constant=3.0)
    x = np.array([1.0, -2.0])
    assert field.value(x) == pytest.approx(0.5 * (2.0 - 2.0 + 4.0) + 1.0 + 3.0)
    np.testing.assert_allclose(field.gradient(x), [2.0 - 1.0 + 1.0, 0.5 - 2.0])
    np.testing.assert_allclose(field.hessian(x), [[2.0, 0.5], [0.5, 1.0]])
    np.testing.assert_allclose(field.hessian_form_gradient(x, [1.0, 1.0]), [0.0, 0.0])


def test_harmonic_constructor():
    field = Quadratic.harmonic(2.0, dim=1)
    assert field.value([3.0]) == pytest.approx(0.5 * 4.0 * 9.0)
    np.testing.assert_allclose(field.sample(np.array([0.0, 1.0, 2.0])), [0.0, 2.0, 8.0])


def test_cubic_barrier_matches_polynomial_family():
    omega, a = 1.3, 0.7
    cubic = CubicBarrier(omega, a)
    poly = Polynomial(cubic.poly_coefficients())
    for s in np.linspace(-1.0, 1.2, 17):
        x = np.array([s])
        assert cubic.value(x) == pytest.approx(poly.value(x), abs=1e-14)
        assert cubic.gradient(x)[0] == pytest.approx(poly.gradient(x)[0], abs=1e-13)
        assert cubic.hessian(x)[0, 0] == pytest.approx(poly.hessian(x)[0, 0], abs=1e-13)
        assert cubic.hessian_form_gradient(x, [0.5])[0] == pytest.approx(
            poly.hessian_form_gradient(x, [0.5])[0], abs=1e-13
        )


def test_cubic_barrier_shape():
    barrier = CubicBarrier(1.0, 1.0)
    assert barrier.value([0.0]) == 0.0
    assert barrier.value([1.0]) == pytest.approx(0.0)  # exits the barrier at x=a
    assert barrier.gradient([2.0 / 3.0])[0] == pytest.approx(0.0)  # barrier top


def test_polynomial_derivatives_are_exact():
    poly = Polynomial([1.0, -2.0, 0.5, 0.25])  # 1 - 2x + x^2/2 + x^3/4
    x = np.array([1.5])
    assert poly.value(x) == pytest.approx(1 - 3.0 + 0.5 * 2.25 + 0.25 * 3.375)
    assert poly.gradient(x)[0] == pytest.approx(-2.0 + 1.5 + 0.75 * 2.25)
    assert poly.hessian(x)[0, 0] == pytest.approx(1.0 + 1.5 * 1.5)
    assert poly.hessian_form_gradient(x, [2.0])[0] == pytest.approx(4.0 * 1.5)


def test_dimension_checks():
    field = Quadratic.harmonic(1.0, dim=2)
    with pytest.raises(DimensionMismatchError):
        field.value([1.0])
    with pytest.raises(DimensionMismatchError):
        field.sample(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        Quadratic(np.array([[1.0, 2.0], [0.0, 1.0]]))
