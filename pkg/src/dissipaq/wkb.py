"""Dissipative WKB tunneling exponent for the cubic metastable barrier.

With psi = exp(-phi/hbar) the eikonal equation gives

    phi(x) = int_0^x sqrt[ (2 V1(s) + i gamma omega2 s^2) / (1 + i gamma/omega2) ] ds,

with V1 = V - 1/2 gamma^2 x^2, and the tunneling probability is
exp(-2 Re phi(b) / hbar) with b the escape point.  The escape point admits
three conventions differing at higher order in gamma; the complex zero of the
integrand gives the closed-form exponent

    (8/15) (a^2 omega^2 / (hbar omega)) (omega^2-gamma^2)^{3/2} (omega^2-2 gamma^2) / omega^5,

which decreases with gamma: dissipation enhances tunneling in this model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import BranchTrackingError
from .fields import CubicBarrier


@dataclass(frozen=True)
class BarrierSpec:
    """Cubic-barrier tunneling problem V(x) = 1/2 omega^2 x^2 (1 - x/a)."""

    omega: float
    a: float
    gamma: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.omega <= 0.0 or self.a <= 0.0 or self.hbar <= 0.0:
            raise ValueError("omega, a and hbar must be positive")
        if not 0.0 <= self.gamma < self.omega / np.sqrt(2.0):
            raise ValueError(
                f"gamma={self.gamma:.6g} outside [0, omega/sqrt(2)) for omega={self.omega:.6g}"
            )

    @property
    def omega1(self) -> float:
        return float(np.sqrt(self.omega**2 - self.gamma**2))

    @property
    def potential(self) -> CubicBarrier:
        return CubicBarrier(self.omega, self.a)


@dataclass(frozen=True)
class TunnelingResult:
    """Complex action at the escape point and the derived probability."""

    phi_at_b: complex
    exponent: float
    probability: float
    escape_convention: str


ESCAPE_CONVENTIONS = ("real_a", "scaled", "complex_zero")


def escape_point(barrier: BarrierSpec, convention: str = "complex_zero") -> complex:
    """Escape position b under one of the three conventions.

    "real_a" keeps b = a; "scaled" uses (omega1^2/omega^2) a; "complex_zero"
    (default) is omega1 (omega1 + i gamma) a / omega^2, the zero of the WKB
    integrand, which yields the simplest probability.
    """
    w, w1, g, a = barrier.omega, barrier.omega1, barrier.gamma, barrier.a
    if convention == "real_a":
        return complex(a)
    if convention == "scaled":
        return complex(w1**2 / w**2 * a)
    if convention == "complex_zero":
        return w1 * (w1 + 1j * g) * a / w**2
    raise ValueError(f"unknown escape convention {convention!r}; expected one of {ESCAPE_CONVENTIONS}")


def closed_form_exponent(barrier: BarrierSpec) -> float:
    """Probability exponent of the complex-zero convention, evaluated verbatim."""
    w, g, a, hbar = barrier.omega, barrier.gamma, barrier.a, barrier.hbar
    return float(
        (8.0 / 15.0)
        * (a**2 * w**2 / (hbar * w))
        * ((w**2 - g**2) ** 1.5 * (w**2 - 2.0 * g**2) / w**5)
    )


def _eikonal_radicand(barrier: BarrierSpec, omega2: float):
    """w(s) = (2 V1(s) + i gamma omega2 s^2) / (1 + i gamma/omega2) as a callable."""
    w2, g = float(omega2), barrier.gamma
    om, a = barrier.omega, barrier.a
    denom = 1.0 + 1j * g / w2

    def radicand(s: complex) -> complex:
        v1 = 0.5 * om**2 * s**2 * (1.0 - s / a) - 0.5 * g**2 * s**2
        return (2.0 * v1 + 1j * g * w2 * s**2) / denom

    return radicand


def _branch_flips(values: np.ndarray, ts: np.ndarray, radicand, endpoint_zero_ok=True):
    """Parameter locations where w(t) crosses the negative real axis.

    Between such crossings the continuously tracked square root is a fixed
    sign times the principal branch.  Crossings are bracketed on a dense
    sample and refined by bisection on Im w.
    """
    flips = []
    for i in range(len(ts) - 1):
        a_val, b_val = values[i], values[i + 1]
        if a_val.imag * b_val.imag < 0.0:
            lo, hi = ts[i], ts[i + 1]
            flo = a_val
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fmid = radicand(mid)
                if flo.imag * fmid.imag <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            crossing = radicand(0.5 * (lo + hi))
            if crossing.real < 0.0:
                flips.append(0.5 * (lo + hi))
    return flips


def phi(x_target: complex, barrier: BarrierSpec, omega2: float | None = None) -> complex:
    """Complex WKB action phi(x_target) along the straight segment from 0.

    The square-root branch is followed continuously, starting from the
    positive root at s -> 0+.  Adaptive Gauss-Kronrod quadrature integrates
    the real and imaginary parts to absolute tolerance 1e-10.

    Raises
    ------
    BranchTrackingError
        If the integrand comes within 1e-12 of its branch point at an
        interior path point (zeros at the endpoints are legitimate).
    """
    x_target = complex(x_target)
    if x_target == 0.0:
        return 0.0 + 0.0j
    if omega2 is None:
        omega2 = barrier.omega1
    radicand_of_s = _eikonal_radicand(barrier, omega2)

    def w_of_t(t: float) -> complex:
        return radicand_of_s(t * x_target)

    ts = np.linspace(0.0, 1.0, 2049)
    samples = np.array([w_of_t(t) for t in ts])
    near_zero = np.abs(samples[1:-1]) ** 0.5 <= 1e-12
    # riding the negative real axis means the path went through the branch point
    on_cut = (samples[1:-1].imag == 0.0) & (samples[1:-1].real < 0.0)
    bad = near_zero | on_cut
    if np.any(bad):
        where = ts[1:-1][bad][0]
        raise BranchTrackingError(
            f"integrand within 1e-12 of its branch point (or on the cut) at interior path point t={where:.6g}"
        )

    flips = _branch_flips(samples, ts, w_of_t)

    def tracked_sqrt(t: float) -> complex:
        sign = -1.0 if (np.searchsorted(flips, t, side="right") % 2) else 1.0
        return sign * np.sqrt(w_of_t(t))

    def real_part(t: float) -> float:
        return (tracked_sqrt(t) * x_target).real

    def imag_part(t: float) -> float:
        return (tracked_sqrt(t) * x_target).imag

    points = flips if flips else None
    re, _ = quad(real_part, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=200, points=points)
    im, _ = quad(imag_part, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=200, points=points)
    return complex(re, im)


def tunneling_probability(
    barrier: BarrierSpec,
    omega2: float | None = None,
    convention: str = "complex_zero",
) -> TunnelingResult:
    """Quadrature tunneling result: exponent 2 Re phi(b), probability exp(-exponent/hbar).

    omega2 defaults to omega1, the natural choice matching the damped
    oscillator's complex structure near the well.
    """
    if omega2 is None:
        omega2 = barrier.omega1
    b = escape_point(barrier, convention)
    phi_b = phi(b, barrier, omega2)
    exponent = 2.0 * phi_b.real
    return TunnelingResult(
        phi_at_b=phi_b,
        exponent=exponent,
        probability=float(np.exp(-exponent / barrier.hbar)),
        escape_convention=convention,
    )
