"""Registered analytic scalar fields with exact derivatives.

Potentials V and dissipation profiles W are supplied as members of a small
set of closed-form families so that gradients and Hessians are exact; no
numerical differentiation happens anywhere in the core.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError


def as_point(x, dim: int) -> np.ndarray:
    """Coerce ``x`` to a float vector of length ``dim``."""
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.shape != (dim,):
        raise DimensionMismatchError(
            f"expected a point of dimension {dim}, got shape {pt.shape}"
        )
    return pt


class ScalarField:
    """Smooth scalar field on R^dim with exact derivative evaluators."""

    dim: int = 1

    def value(self, x) -> float:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def hessian(self, x) -> np.ndarray:
        raise NotImplementedError

    def hessian_form_gradient(self, x, v) -> np.ndarray:
        """Gradient of the quadratic form x -> v^T Hess(x) v.

        Zero for fields with constant Hessian; families with cubic or higher
        terms override with the exact third-derivative contraction.
        """
        raise NotImplementedError

    def sample(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized value on an array of 1-D positions (dim == 1 only)."""
        if self.dim != 1:
            raise DimensionMismatchError("sample() is defined for 1-D fields only")
        return np.array([self.value(np.atleast_1d(float(s))) for s in np.ravel(xs)])


class Quadratic(ScalarField):
    """V(x) = 1/2 x^T A x + b^T x + c with a constant symmetric matrix A."""

    def __init__(self, curvature, linear=None, constant: float = 0.0):
        A = np.atleast_2d(np.asarray(curvature, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatchError("curvature matrix must be square")
        if not np.allclose(A, A.T, atol=1e-14, rtol=0.0):
            raise ValueError("curvature matrix must be symmetric")
        self.curvature = 0.5 * (A + A.T)
        self.dim = A.shape[0]
        self.linear = (
            np.zeros(self.dim) if linear is None else as_point(linear, self.dim)
        )
        self.constant = float(constant)

    @classmethod
    def harmonic(cls, omega: float, dim: int = 1, constant: float = 0.0) -> "Quadratic":
        """Isotropic oscillator 1/2 omega^2 |x|^2."""
        return cls(float(omega) ** 2 * np.eye(dim), constant=constant)

    @classmethod
    def isotropic_rate(cls, gamma: float, dim: int = 1) -> "Quadratic":
        """Profile 1/2 gamma |x|^2 whose Hessian is the constant rate gamma."""
        return cls(float(gamma) * np.eye(dim))

    def value(self, x) -> float:
        pt = as_point(x, self.dim)
        return float(0.5 * pt @ self.curvature @ pt + self.linear @ pt + self.constant)

    def gradient(self, x) -> np.ndarray:
        return self.curvature @ as_point(x, self.dim) + self.linear

    def hessian(self, x) -> np.ndarray:
        as_point(x, self.dim)
        return self.curvature.copy()

    def hessian_form_gradient(self, x, v) -> np.ndarray:
        as_point(x, self.dim)
        return np.zeros(self.dim)

    def sample(self, xs: np.ndarray) -> np.ndarray:
        if self.dim != 1:
            raise DimensionMismatchError("sample() is defined for 1-D fields only")
        xs = np.asarray(xs, dtype=float)
        return 0.5 * self.curvature[0, 0] * xs**2 + self.linear[0] * xs + self.constant


class CubicBarrier(ScalarField):
    """Metastable barrier V(x) = 1/2 omega^2 x^2 (1 - x/a), one dimensional.

    The well sits at x = 0, the barrier top at x = 2a/3, and V crosses zero
    again at x = a.
    """

    dim = 1

    def __init__(self, omega: float, a: float):
        if omega <= 0.0 or a <= 0.0:
            raise ValueError("CubicBarrier requires omega > 0 and a > 0")
        self.omega = float(omega)
        self.a = float(a)

    def value(self, x) -> float:
        s = as_point(x, 1)[0]
        return 0.5 * self.omega**2 * s**2 * (1.0 - s / self.a)

    def gradient(self, x) -> np.ndarray:
        s = as_point(x, 1)[0]
        return np.array([self.omega**2 * s - 1.5 * self.omega**2 / self.a * s**2])

    def hessian(self, x) -> np.ndarray:
        s = as_point(x, 1)[0]
        return np.array([[self.omega**2 - 3.0 * self.omega**2 / self.a * s]])

    def hessian_form_gradient(self, x, v) -> np.ndarray:
        vv = as_point(v, 1)[0]
        return np.array([-3.0 * self.omega**2 / self.a * vv**2])

    def sample(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return 0.5 * self.omega**2 * xs**2 * (1.0 - xs / self.a)

    def poly_coefficients(self) -> np.ndarray:
        """Ascending polynomial coefficients of V."""
        return np.array([0.0, 0.0, 0.5 * self.omega**2, -0.5 * self.omega**2 / self.a])


class Polynomial(ScalarField):
    """One-dimensional polynomial field with exact derivatives."""

    dim = 1

    def __init__(self, coefficients):
        c = np.asarray(coefficients, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        self.coefficients = c
        self._d1 = np.polynomial.polynomial.polyder(c)
        self._d2 = np.polynomial.polynomial.polyder(c, 2)
        self._d3 = np.polynomial.polynomial.polyder(c, 3)

    def value(self, x) -> float:
        s = as_point(x, 1)[0]
        return float(np.polynomial.polynomial.polyval(s, self.coefficients))

    def gradient(self, x) -> np.ndarray:
        s = as_point(x, 1)[0]
        return np.array([np.polynomial.polynomial.polyval(s, self._d1)])

    def hessian(self, x) -> np.ndarray:
        s = as_point(x, 1)[0]
        return np.array([[np.polynomial.polynomial.polyval(s, self._d2)]])

    def hessian_form_gradient(self, x, v) -> np.ndarray:
        s = as_point(x, 1)[0]
        vv = as_point(v, 1)[0]
        return np.array([vv**2 * np.polynomial.polynomial.polyval(s, self._d3)])

    def sample(self, xs: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyval(
            np.asarray(xs, dtype=float), self.coefficients
        )

    def poly_coefficients(self) -> np.ndarray:
        return self.coefficients.copy()
