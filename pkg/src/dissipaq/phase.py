"""Phase-space core: complex structure, shifted momenta, and the complex Hamiltonian.

A dissipative flow with friction force -2 Gamma(x) xdot, Gamma = Hess W,
becomes canonical in the shifted momentum ptilde = p + grad W.  The pair of
real functions

    H1 = 1/2 |ptilde|^2 + V - 1/2 |grad W|^2
    H2 = (1/omega2) [ 1/2 ptilde^T Gamma ptilde + omega2^2 W ]

together with the complex structure J (J^2 = -1) generate the motion, and
H1 + i*H2 plays the role of a complex-valued Hamiltonian.  The scalar-rate
case is W = 1/2 gamma |x|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvexityError,
    DimensionMismatchError,
    EquilibriumSearchError,
    OverdampedError,
)
from .fields import Quadratic, ScalarField, as_point


@dataclass(frozen=True)
class SystemSpec:
    """A dissipative mechanical system: potential, dissipation, action scale.

    ``dissipation`` is either a scalar rate gamma (friction -2 gamma p) or a
    convex profile W whose Hessian is the position-dependent rate tensor.
    A zero rate describes the conservative limit; a negative scalar rate is
    admitted solely to construct the time-reversed partner used by symmetry
    checks.
    """

    dim: int
    potential: ScalarField
    dissipation: float | ScalarField
    hbar: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatchError("dim must be a positive integer")
        if self.potential.dim != self.dim:
            raise DimensionMismatchError(
                f"potential dimension {self.potential.dim} != system dim {self.dim}"
            )
        if self.scalar_rate:
            g = float(self.dissipation)
            if not np.isfinite(g):
                raise ValueError("scalar dissipation rate must be finite")
        elif self.dissipation.dim != self.dim:
            raise DimensionMismatchError(
                f"dissipation profile dimension {self.dissipation.dim} != system dim {self.dim}"
            )
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")

    @property
    def scalar_rate(self) -> bool:
        return not isinstance(self.dissipation, ScalarField)

    @property
    def gamma(self) -> float:
        """Scalar rate; only meaningful for scalar-form dissipation."""
        if not self.scalar_rate:
            raise ValueError("system uses a dissipation profile W, not a scalar rate")
        return float(self.dissipation)

    def w_value(self, x) -> float:
        pt = as_point(x, self.dim)
        if self.scalar_rate:
            return 0.5 * self.gamma * float(pt @ pt)
        return self.dissipation.value(pt)

    def w_gradient(self, x) -> np.ndarray:
        pt = as_point(x, self.dim)
        if self.scalar_rate:
            return self.gamma * pt
        return self.dissipation.gradient(pt)

    def w_hessian(self, x) -> np.ndarray:
        """Rate tensor Gamma(x) = Hess W; checked symmetric PSD for profile form."""
        pt = as_point(x, self.dim)
        if self.scalar_rate:
            return self.gamma * np.eye(self.dim)
        h = self.dissipation.hessian(pt)
        if not np.allclose(h, h.T, atol=1e-12, rtol=0.0):
            raise ConvexityError(f"dissipation Hessian not symmetric at x={pt}")
        lo = float(np.linalg.eigvalsh(h).min())
        if lo < -1e-12 * max(1.0, float(np.abs(h).max())):
            raise ConvexityError(
                f"dissipation Hessian has negative eigenvalue {lo:.3e} at x={pt}"
            )
        return h

    def w_hessian_form_gradient(self, x, v) -> np.ndarray:
        """Gradient of v^T Gamma(x) v; zero in the scalar-rate case."""
        pt = as_point(x, self.dim)
        if self.scalar_rate:
            return np.zeros(self.dim)
        return self.dissipation.hessian_form_gradient(pt, as_point(v, self.dim))


@dataclass(frozen=True)
class PhaseState:
    """A point (p, x) of phase space at time t."""

    x: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if x.shape != p.shape or x.ndim != 1:
            raise DimensionMismatchError(
                f"x and p must be vectors of equal length, got {x.shape} and {p.shape}"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p)) and np.isfinite(self.t)):
            raise ValueError("phase-space entries must be finite")
        x.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class ComplexStructure:
    """Block matrix J = [[0, -omega2 I], [I/omega2, 0]] on stacked (ptilde, x).

    Satisfies J @ J = -identity exactly in exact arithmetic.
    """

    omega2: float
    dim: int = 1
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.omega2 <= 0.0 or not np.isfinite(self.omega2):
            raise ValueError("omega2 must be a positive finite frequency")
        if self.dim < 1:
            raise DimensionMismatchError("dim must be a positive integer")
        n = self.dim
        m = np.zeros((2 * n, 2 * n))
        m[:n, n:] = -self.omega2 * np.eye(n)
        m[n:, :n] = np.eye(n) / self.omega2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """J @ v for a stacked (ptilde, x) vector of length 2*dim."""
        v = np.asarray(v, dtype=float)
        if v.shape != (2 * self.dim,):
            raise DimensionMismatchError(
                f"expected a stacked vector of length {2 * self.dim}, got shape {v.shape}"
            )
        n = self.dim
        return np.concatenate([-self.omega2 * v[n:], v[:n] / self.omega2])


@dataclass(frozen=True)
class ComplexCoordinates:
    """Normal coordinates z_a = (omega2 x_a - i ptilde_a) / sqrt(2 omega2)."""

    z: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @property
    def dim(self) -> int:
        return self.z.size


@dataclass(frozen=True)
class ComplexHamiltonianValue:
    """The pair (H1, H2) evaluated at a phase point; H1 + i*H2 is the complex energy."""

    h1: float
    h2: float

    @property
    def value(self) -> complex:
        return complex(self.h1, self.h2)


def shifted_momentum(state: PhaseState, sys: SystemSpec) -> np.ndarray:
    """ptilde = p + grad W(x)  (scalar rate: p + gamma x)."""
    if state.dim != sys.dim:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != system dimension {sys.dim}"
        )
    return state.p + sys.w_gradient(state.x)


def effective_potential(x, sys: SystemSpec) -> float:
    """V1(x) = V(x) - 1/2 |grad W(x)|^2  (scalar rate: V - 1/2 gamma^2 x^2)."""
    pt = as_point(x, sys.dim)
    gw = sys.w_gradient(pt)
    return sys.potential.value(pt) - 0.5 * float(gw @ gw)


def complex_hamiltonian(
    state: PhaseState, sys: SystemSpec, J: ComplexStructure
) -> ComplexHamiltonianValue:
    """Evaluate (H1, H2) at a state whose momentum is already the shifted ptilde."""
    if state.dim != sys.dim or J.dim != sys.dim:
        raise DimensionMismatchError("state, system and complex structure dims disagree")
    ptilde = state.p
    h1 = 0.5 * float(ptilde @ ptilde) + effective_potential(state.x, sys)
    rate = sys.w_hessian(state.x)
    h2 = (
        0.5 * float(ptilde @ rate @ ptilde) + J.omega2**2 * sys.w_value(state.x)
    ) / J.omega2
    return ComplexHamiltonianValue(h1=h1, h2=h2)


def apply_complex_structure(J: ComplexStructure, v: np.ndarray) -> np.ndarray:
    """Multiply a stacked (ptilde, x) vector by J."""
    return J.apply(v)


def to_complex(state: PhaseState, sys: SystemSpec, J: ComplexStructure) -> ComplexCoordinates:
    """Normal coordinates of a state already expressed in (ptilde, x)."""
    if state.dim != sys.dim or J.dim != sys.dim:
        raise DimensionMismatchError("state, system and complex structure dims disagree")
    w2 = J.omega2
    return ComplexCoordinates(z=(w2 * state.x - 1j * state.p) / np.sqrt(2.0 * w2))


def from_complex(
    z: ComplexCoordinates | np.ndarray, sys: SystemSpec, J: ComplexStructure, t: float = 0.0
) -> PhaseState:
    """Invert to_complex; returns a state in (ptilde, x) variables."""
    zv = z.z if isinstance(z, ComplexCoordinates) else np.atleast_1d(np.asarray(z, dtype=complex))
    if zv.size != sys.dim:
        raise DimensionMismatchError(f"z has {zv.size} entries, system dim is {sys.dim}")
    w2 = J.omega2
    x = np.sqrt(2.0 / w2) * zv.real
    ptilde = -np.sqrt(2.0 * w2) * zv.imag
    return PhaseState(x=x, p=ptilde, t=t)


def natural_omega2(sys: SystemSpec, x0_guess, max_iter: int = 100) -> float:
    """Frequency sqrt(V''(x0) - gamma^2) at the equilibrium x0 nearest the guess.

    The equilibrium is located by damped Newton iteration on grad V (step
    halved whenever the residual increases) and accepted when
    |grad V| <= 1e-10.  In several dimensions the smallest Hessian eigenvalue
    of V stands in for V'' and the largest eigenvalue of the rate tensor for
    gamma, since that mode pairing is the first to go overdamped.

    Raises
    ------
    EquilibriumSearchError
        No convergence within ``max_iter`` iterations.
    OverdampedError
        gamma^2 >= V''(x0): no oscillatory mode survives at the equilibrium.
    """
    x = as_point(x0_guess, sys.dim).copy()
    g = sys.potential.gradient(x)
    res = float(np.linalg.norm(g))
    for _ in range(max_iter):
        if res <= 1e-10:
            break
        h = sys.potential.hessian(x)
        try:
            delta = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError as exc:
            raise EquilibriumSearchError(
                f"singular Hessian during equilibrium search at x={x}"
            ) from exc
        scale = 1.0
        for _ in range(60):
            trial = x + scale * delta
            gt = sys.potential.gradient(trial)
            res_t = float(np.linalg.norm(gt))
            if res_t < res:
                break
            scale *= 0.5
        else:
            raise EquilibriumSearchError(
                f"Newton step damping stalled at residual {res:.3e}"
            )
        x, g, res = trial, gt, res_t
    else:
        raise EquilibriumSearchError(
            f"no equilibrium within {max_iter} iterations, residual {res:.3e}"
        )

    curvature = float(np.linalg.eigvalsh(sys.potential.hessian(x)).min())
    if sys.scalar_rate:
        rate = sys.gamma
    else:
        rate = float(np.linalg.eigvalsh(sys.w_hessian(x)).max())
    radicand = curvature - rate**2
    if radicand <= 0.0:
        raise OverdampedError(
            f"gamma^2 = {rate**2:.6g} >= V''(x0) = {curvature:.6g}: overdamped equilibrium"
        )
    return float(np.sqrt(radicand))
