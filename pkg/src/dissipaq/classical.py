"""Classical dissipative flows in direct and canonical-complex form.

The direct equations are

    dp/dt = -grad V - 2 Gamma(x) p,    dx/dt = p,

and the canonical form acts on (ptilde, x) with ptilde = p + grad W.  Both
vector fields are exposed, together with the exact damped-oscillator normal
mode, an RK4 integrator on the direct field, and a Strang splitting whose
dissipative half-flow is treated in closed form for quadratic W.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import BlowUpError, DimensionMismatchError, OverdampedError
from .phase import ComplexStructure, PhaseState, SystemSpec, shifted_momentum


@dataclass(frozen=True)
class Trajectory:
    """Uniform-step record of a classical flow.

    Backing storage is dense arrays; ``samples`` materializes PhaseState
    views on demand.
    """

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    step: float
    method_tag: str

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("times must be a non-empty vector")
        dt = np.diff(t)
        if t.size > 1 and (np.any(dt <= 0.0) or not np.allclose(dt, self.step, rtol=0.0, atol=1e-9 * max(1.0, abs(self.step)))):
            raise ValueError("times must increase uniformly by the declared step")
        for name in ("times", "positions", "momenta"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.times.size

    def state(self, i: int) -> PhaseState:
        return PhaseState(x=self.positions[i], p=self.momenta[i], t=float(self.times[i]))

    @property
    def samples(self) -> list[PhaseState]:
        return [self.state(i) for i in range(len(self))]


@dataclass(frozen=True)
class EnergySeries:
    """Scalar diagnostic sampled along a trajectory."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise ValueError("times and values must have equal length")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def direct_vector_field(state: PhaseState, sys: SystemSpec):
    """Right-hand side (dp/dt, dx/dt) of the frictional equations of motion."""
    if state.dim != sys.dim:
        raise DimensionMismatchError("state and system dimensions disagree")
    rate = sys.w_hessian(state.x)
    dp = -sys.potential.gradient(state.x) - 2.0 * rate @ state.p
    return dp, state.p.copy()


def canonical_vector_field(state: PhaseState, sys: SystemSpec, J: ComplexStructure):
    """Canonical field (dptilde/dt, dx/dt) from the bracket flows of (H1, H2).

    The state's momentum entry is interpreted as ptilde.  The H1 bracket
    contributes (-dH1/dx, ptilde); the H2 bracket contributes
    (-dH2/dx, dH2/dptilde) and enters twisted by J.
    """
    if state.dim != sys.dim or J.dim != sys.dim:
        raise DimensionMismatchError("state, system and complex structure dims disagree")
    ptilde, x = state.p, state.x
    w2 = J.omega2
    rate = sys.w_hessian(x)
    gw = sys.w_gradient(x)

    dh1_dx = sys.potential.gradient(x) - rate @ gw
    dh2_dp = rate @ ptilde / w2
    dh2_dx = (0.5 * sys.w_hessian_form_gradient(x, ptilde) + w2**2 * gw) / w2

    # d/dt (ptilde, x) = ({H1,.}) + J({H2,.}) with J block-acting on the pair
    dpt = -dh1_dx - w2 * dh2_dp
    dx = ptilde - dh2_dx / w2
    return dpt, dx


def dsho_exact(omega: float, gamma: float, z0: complex, t):
    """Normal-mode solution z(t) = exp((-gamma + i*omega1) t) z0, omega1 = sqrt(omega^2-gamma^2)."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    if abs(gamma) >= omega:
        raise OverdampedError(f"|gamma|={abs(gamma):.6g} >= omega={omega:.6g}")
    omega1 = np.sqrt(omega**2 - gamma**2)
    return np.exp((-gamma + 1j * omega1) * np.asarray(t)) * z0


def _rk4(sys: SystemSpec, p0, x0, t0, step, n_steps):
    ps = np.empty((n_steps + 1, p0.size))
    xs = np.empty((n_steps + 1, x0.size))
    ps[0], xs[0] = p0, x0

    def f(p, x):
        rate = sys.w_hessian(x)
        return -sys.potential.gradient(x) - 2.0 * rate @ p, p

    for k in range(n_steps):
        p, x = ps[k], xs[k]
        k1p, k1x = f(p, x)
        k2p, k2x = f(p + 0.5 * step * k1p, x + 0.5 * step * k1x)
        k3p, k3x = f(p + 0.5 * step * k2p, x + 0.5 * step * k2x)
        k4p, k4x = f(p + step * k3p, x + step * k3x)
        pn = p + step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        xn = x + step / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        if not (np.all(np.isfinite(pn)) and np.all(np.isfinite(xn))):
            raise BlowUpError(
                f"rk4 state became non-finite at t={t0 + (k + 1) * step:.6g}",
                blow_up_time=t0 + (k + 1) * step,
            )
        ps[k + 1], xs[k + 1] = pn, xn
    return ps, xs


def _split(sys: SystemSpec, p0, x0, t0, step, n_steps):
    """Strang composition: half dissipative flow, leapfrog of H1, half dissipative flow.

    Works in (ptilde, x), where the frictional equations decompose exactly
    into the conservative H1 flow and the dissipative remainder
    d/dt (ptilde, x) = (-Gamma(x) ptilde, -grad W(x)).  For constant rate
    tensors the remainder is the closed-form linear map exp(-Gamma dt) on
    both components; otherwise it is stepped by implicit midpoint.
    """
    ps = np.empty((n_steps + 1, p0.size))
    xs = np.empty((n_steps + 1, x0.size))
    ps[0], xs[0] = p0, x0

    constant_rate = sys.scalar_rate or _has_constant_hessian(sys)
    if constant_rate:
        rate = sys.w_hessian(np.zeros(sys.dim))
        if sys.dim == 1:
            decay_half = float(np.exp(-0.5 * step * rate[0, 0]))
            half = lambda pt, x: (decay_half * pt, decay_half * x)  # noqa: E731
        else:
            dh = expm(-0.5 * step * rate)
            half = lambda pt, x: (dh @ pt, dh @ x)  # noqa: E731
    else:
        half = lambda pt, x: _dissipative_midpoint(sys, pt, x, 0.5 * step)  # noqa: E731

    pt = p0 + sys.w_gradient(x0)
    x = x0.copy()
    for k in range(n_steps):
        pt, x = half(pt, x)
        # leapfrog (kick-drift-kick) for H1 = 1/2 |ptilde|^2 + V1(x)
        pt = pt - 0.5 * step * _grad_v1(sys, x)
        x = x + step * pt
        pt = pt - 0.5 * step * _grad_v1(sys, x)
        pt, x = half(pt, x)
        p = pt - sys.w_gradient(x)
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(x))):
            raise BlowUpError(
                f"split state became non-finite at t={t0 + (k + 1) * step:.6g}",
                blow_up_time=t0 + (k + 1) * step,
            )
        ps[k + 1], xs[k + 1] = p, x
    return ps, xs


def _has_constant_hessian(sys: SystemSpec) -> bool:
    from .fields import Quadratic

    return isinstance(sys.dissipation, Quadratic)


def _grad_v1(sys: SystemSpec, x):
    return sys.potential.gradient(x) - sys.w_hessian(x) @ sys.w_gradient(x)


def _dissipative_midpoint(sys: SystemSpec, pt, x, dt, tol=1e-14, max_iter=50):
    """Implicit midpoint step of d/dt (ptilde, x) = (-Gamma(x) ptilde, -grad W(x))."""

    def f(pm, xm):
        return -sys.w_hessian(xm) @ pm, -sys.w_gradient(xm)

    pm, xm = pt.copy(), x.copy()
    for _ in range(max_iter):
        fp, fx = f(pm, xm)
        pn = pt + 0.5 * dt * fp
        xn = x + 0.5 * dt * fx
        done = max(np.max(np.abs(pn - pm)), np.max(np.abs(xn - xm))) < tol
        pm, xm = pn, xn
        if done:
            break
    fp, fx = f(pm, xm)
    return pt + dt * fp, x + dt * fx


def integrate(
    sys: SystemSpec,
    state0: PhaseState,
    step: float,
    horizon: float,
    method: str = "rk4",
) -> Trajectory:
    """Integrate the dissipative flow from state0 over [t0, t0 + horizon].

    Parameters
    ----------
    step : positive time increment.
    horizon : positive total integration time; the number of steps is
        round(horizon/step).
    method : "rk4" (classical 4th order on the direct field) or "split"
        (Strang composition of the conservative leapfrog and the dissipative
        flow in shifted variables).

    Raises
    ------
    BlowUpError
        If any state entry becomes non-finite; the first bad time is reported.
    """
    if step <= 0.0 or horizon <= 0.0:
        raise ValueError("step and horizon must be positive")
    if state0.dim != sys.dim:
        raise DimensionMismatchError("initial state dimension disagrees with system")
    n_steps = max(1, int(round(horizon / step)))
    stepper = {"rk4": _rk4, "split": _split}.get(method)
    if stepper is None:
        raise ValueError(f"unknown method {method!r}; expected 'rk4' or 'split'")
    ps, xs = stepper(sys, state0.p.copy(), state0.x.copy(), state0.t, step, n_steps)
    times = state0.t + step * np.arange(n_steps + 1)
    return Trajectory(times=times, positions=xs, momenta=ps, step=step, method_tag=method)


def energy_series(traj: Trajectory, sys: SystemSpec) -> EnergySeries:
    """Physical energy H(t) = 1/2 |p|^2 + V(x) along the trajectory."""
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    kin = 0.5 * np.sum(traj.momenta**2, axis=1)
    pot = np.array([sys.potential.value(traj.positions[i]) for i in range(len(traj))])
    return EnergySeries(times=traj.times.copy(), values=kin + pot)


def dissipation_residual(traj: Trajectory, sys: SystemSpec) -> EnergySeries:
    """Centered-difference dH/dt plus the dissipation rate 2 p^T Gamma p.

    Vanishes like O(step^2) along an exact trajectory; endpoints use
    one-sided second-order stencils.
    """
    energies = energy_series(traj, sys).values
    n = energies.size
    if n < 3:
        raise ValueError("need at least 3 samples for the difference stencils")
    h = traj.step
    dhdt = np.empty(n)
    dhdt[1:-1] = (energies[2:] - energies[:-2]) / (2.0 * h)
    dhdt[0] = (-3.0 * energies[0] + 4.0 * energies[1] - energies[2]) / (2.0 * h)
    dhdt[-1] = (3.0 * energies[-1] - 4.0 * energies[-2] + energies[-3]) / (2.0 * h)
    loss = np.array(
        [
            2.0 * traj.momenta[i] @ sys.w_hessian(traj.positions[i]) @ traj.momenta[i]
            for i in range(n)
        ]
    )
    return EnergySeries(times=traj.times.copy(), values=dhdt + loss)
