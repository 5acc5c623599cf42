"""Non-hermitian grid Hamiltonians, complex spectra, and decaying evolution.

The damped-oscillator operator

    H = (1 + i gamma/omega1) [ -hbar^2/2 d^2/dx^2 + 1/2 omega1^2 x^2 - 1/2 hbar omega1 ]

has spectrum hbar (omega1 + i gamma) n for n = 0, 1, 2, ..., so every excited
state decays while the ground state is stationary.  The general builder
produces

    H = [-hbar^2/2 D2 + V - 1/2 gamma^2 x^2]
        + i (gamma/omega2) [-hbar^2/2 D2 + 1/2 omega2^2 x^2 + c]

and the Schroedinger equation -i hbar dpsi/dt = H psi is integrated with the
A-stable implicit midpoint rule, under which eigencomponents evolve as
exp(i lambda t / hbar): positive imaginary parts decay.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatchError, NumericalFailureError, OverdampedError
from .phase import SystemSpec


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid of n nodes spanning [x_min, x_max] inclusive."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be strictly less than x_max")
        if self.n < 16:
            raise ValueError("grid needs at least 16 nodes")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex grid operator with its grid and build metadata."""

    matrix: np.ndarray
    grid: Grid
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.grid.n, self.grid.n):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match grid with n={self.grid.n}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def is_complex_symmetric(self) -> bool:
        """True when both real and imaginary parts are symmetric stencils."""
        return bool(np.array_equal(self.matrix, self.matrix.T))


@dataclass(frozen=True)
class ComplexSpectrum:
    """Eigenpairs sorted by ascending imaginary part, ties by real part.

    Eigenvector columns have unit Euclidean norm.  Eigenvectors of a
    non-normal operator are generally not orthogonal; overlaps must be taken
    by explicit inner products.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=complex))
        object.__setattr__(self, "eigenvectors", np.asarray(self.eigenvectors, dtype=complex))


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes on a grid; the boundary nodes are pinned to zero.

    Norm convention: ||psi||^2 = sum_i |psi_i|^2 * h.
    """

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        if v.shape != (self.grid.n,):
            raise DimensionMismatchError(
                f"wavefunction has {v.shape} entries, grid has n={self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("wavefunction entries must be finite")
        v[0] = 0.0
        v[-1] = 0.0
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.spacing))

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero wavefunction")
        return WaveFunction(values=self.values / n, grid=self.grid)


def second_derivative_matrix(grid: Grid) -> np.ndarray:
    """Symmetric 4th-order central difference for d^2/dx^2, Dirichlet outside.

    The truncated five-point stencil (-1, 16, -30, 16, -1)/(12 h^2) keeps the
    matrix exactly symmetric; values beyond the grid are taken as zero.
    """
    n, h = grid.n, grid.spacing
    coeff = 1.0 / (12.0 * h * h)
    d = np.diag(np.full(n, -30.0 * coeff))
    d += np.diag(np.full(n - 1, 16.0 * coeff), 1) + np.diag(np.full(n - 1, 16.0 * coeff), -1)
    d += np.diag(np.full(n - 2, -coeff), 2) + np.diag(np.full(n - 2, -coeff), -2)
    return d


def first_derivative_matrix(grid: Grid) -> np.ndarray:
    """Antisymmetric 2nd-order central difference for d/dx, Dirichlet outside."""
    n, h = grid.n, grid.spacing
    off = np.full(n - 1, 1.0 / (2.0 * h))
    return np.diag(off, 1) - np.diag(off, -1)


def build_dsho_hamiltonian(
    omega: float, gamma: float, hbar: float, grid: Grid
) -> OperatorMatrix:
    """Damped-oscillator operator with ground eigenvalue pinned at zero.

    H = (1 + i gamma/omega1) [-hbar^2/2 D2 + 1/2 omega1^2 x^2 - 1/2 hbar omega1],
    omega1 = sqrt(omega^2 - gamma^2).  A scalar multiple of a real symmetric
    matrix, hence normal, with eigenvalues approximately hbar (omega1 + i gamma) n.
    """
    if omega <= 0.0 or hbar <= 0.0:
        raise ValueError("omega and hbar must be positive")
    if abs(gamma) >= omega:
        raise OverdampedError(f"|gamma|={abs(gamma):.6g} >= omega={omega:.6g}")
    omega1 = float(np.sqrt(omega**2 - gamma**2))
    x = grid.x
    core = -0.5 * hbar**2 * second_derivative_matrix(grid) + np.diag(
        0.5 * omega1**2 * x**2 - 0.5 * hbar * omega1
    )
    mat = (1.0 + 1j * gamma / omega1) * core
    return OperatorMatrix(
        matrix=mat,
        grid=grid,
        meta={"omega": omega, "gamma": gamma, "omega1": omega1, "hbar": hbar, "form": "dsho"},
    )


def build_general_hamiltonian(
    sys: SystemSpec, omega2: float, c: float, grid: Grid
) -> OperatorMatrix:
    """Quantized complex Hamiltonian for a 1-D system with scalar rate gamma.

    H = [-hbar^2/2 D2 + V - 1/2 gamma^2 x^2]
        + i (gamma/omega2) [-hbar^2/2 D2 + 1/2 omega2^2 x^2 + c].

    The real constant c is conventionally fixed by choose_c so the eigenvalue
    of smallest imaginary part is real.
    """
    if sys.dim != 1:
        raise DimensionMismatchError("grid quantization is one-dimensional")
    if omega2 <= 0.0:
        raise ValueError("omega2 must be positive")
    gamma, hbar = sys.gamma, sys.hbar
    x = grid.x
    kin = -0.5 * hbar**2 * second_derivative_matrix(grid)
    v = sys.potential.sample(x)
    real_part = kin + np.diag(v - 0.5 * gamma**2 * x**2)
    imag_part = kin + np.diag(0.5 * omega2**2 * x**2 + c)
    mat = real_part + 1j * (gamma / omega2) * imag_part
    return OperatorMatrix(
        matrix=mat,
        grid=grid,
        meta={"gamma": gamma, "omega2": omega2, "c": c, "hbar": hbar, "form": "general"},
    )


def choose_c(operator_without_c: OperatorMatrix, gamma: float, omega2: float) -> float:
    """Constant c making the minimum-imaginary eigenvalue real after the i(gamma/omega2)c shift.

    Expects the operator built with c = 0.  Degenerate minima (two imaginary
    parts within 1e-10) are reported as a warning and the first kept.
    """
    if gamma == 0.0:
        return 0.0
    ev = np.linalg.eigvals(operator_without_c.matrix)
    order = np.lexsort((ev.real, ev.imag))
    ev = ev[order]
    if ev.size > 1 and abs(ev[1].imag - ev[0].imag) <= 1e-10:
        warnings.warn(
            "degenerate minimum-imaginary eigenvalues "
            f"({ev[0]:.6g}, {ev[1]:.6g}); keeping the first",
            stacklevel=2,
        )
    return float(-(omega2 / gamma) * ev[0].imag)


def spectrum(op: OperatorMatrix, k: int) -> ComplexSpectrum:
    """Dense eigendecomposition; the k pairs of smallest imaginary part.

    Eigenvalues sort by ascending imaginary part with real-part ties;
    eigenvectors are Euclidean-normalized.  Residuals ||H v - lambda v|| are
    required to be <= 1e-8 ||H||_F.
    """
    n = op.grid.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be between 1 and {n}")
    try:
        ev, vecs = np.linalg.eig(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"dense eigensolver failed: {exc}") from exc
    order = np.lexsort((ev.real, ev.imag))[:k]
    ev = ev[order]
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    scale = float(np.linalg.norm(op.matrix))
    res = np.linalg.norm(op.matrix @ vecs - vecs * ev, axis=0)
    if np.any(res > 1e-8 * scale):
        raise NumericalFailureError(
            f"eigenpair residual {res.max():.3e} exceeds 1e-8 * ||H|| = {1e-8 * scale:.3e}"
        )
    return ComplexSpectrum(eigenvalues=ev, eigenvectors=vecs)


def evolve(
    op: OperatorMatrix,
    psi0: WaveFunction,
    dt: float,
    horizon: float,
    stride: int = 1,
) -> list[WaveFunction]:
    """Integrate dpsi/dt = (i/hbar) H psi by the implicit midpoint rule.

    One step solves (I - i dt/(2 hbar) H) psi' = (I + i dt/(2 hbar) H) psi,
    which is unconditionally stable; eigencomponents with positive imaginary
    eigenvalue decay.  Snapshots (including the initial state) are retained
    every ``stride`` steps plus the final state.

    Raises
    ------
    NumericalFailureError
        If the factored linear system cannot be solved.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ValueError("dt and horizon must be positive")
    if stride < 1:
        raise ValueError("stride must be a positive integer")
    if psi0.grid != op.grid:
        raise DimensionMismatchError("psi0 lives on a different grid than the operator")
    hbar = float(op.meta.get("hbar", 1.0))
    n_steps = max(1, int(round(horizon / dt)))
    z = 1j * dt / (2.0 * hbar)
    eye = np.eye(op.grid.n, dtype=complex)
    plus = eye + z * op.matrix
    minus = eye - z * op.matrix
    try:
        lu = lu_factor(minus)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailureError(f"implicit-midpoint factorization failed: {exc}") from exc

    psi = psi0.values.astype(complex).copy()
    snapshots = [WaveFunction(values=psi, grid=op.grid)]
    for step_index in range(1, n_steps + 1):
        psi = lu_solve(lu, plus @ psi)
        if not np.all(np.isfinite(psi)):
            raise NumericalFailureError(
                f"evolution produced non-finite amplitudes at step {step_index}"
            )
        if step_index % stride == 0 or step_index == n_steps:
            snapshots.append(WaveFunction(values=psi, grid=op.grid))
    return snapshots


def snapshot_times(dt: float, horizon: float, stride: int) -> np.ndarray:
    """Times of the snapshots retained by evolve for the same arguments."""
    n_steps = max(1, int(round(horizon / dt)))
    kept = [0] + [k for k in range(1, n_steps + 1) if k % stride == 0 or k == n_steps]
    return dt * np.asarray(kept, dtype=float)


def momentum_operator(gamma: float, hbar: float, grid: Grid) -> OperatorMatrix:
    """Momentum with the friction correction: p = -i hbar d/dx - gamma x."""
    mat = -1j * hbar * first_derivative_matrix(grid) - np.diag(gamma * grid.x).astype(
        complex
    )
    return OperatorMatrix(
        matrix=mat, grid=grid, meta={"gamma": gamma, "hbar": hbar, "form": "momentum"}
    )
