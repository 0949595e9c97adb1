"""Spectral-curve sheets, period integrals and the sector coordinate x."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .constants import BASE_POINT, DEFAULT_RADIUS, OMEGA
from .errors import SingularityError
from .numerics.paths import BranchState, circle
from .numerics.quadrature import integrate_endpoint_singular, integrate_path


@dataclass(frozen=True)
class PolarParam:
    """Base point t = cbrt_R**3 * exp(i phi) of the Hitchin base.

    ``phi`` may be any real number. The cube root tau = cbrt_R*exp(i phi/3)
    depends on phi modulo 6*pi, and the 12 sectors of x are only all reached
    when phi runs over [0, 6*pi).
    """

    cbrt_R: float
    phi: float

    def __post_init__(self):
        if not (self.cbrt_R > 0 and math.isfinite(self.cbrt_R)):
            raise ValueError(f"cbrt_R must be positive and finite, got {self.cbrt_R}")
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")

    @property
    def t(self):
        return self.cbrt_R ** 3 * cmath.exp(1j * self.phi)

    @property
    def tau(self):
        return self.cbrt_R * cmath.exp(1j * self.phi / 3)

    @property
    def rotation(self):
        return cmath.exp(1j * self.phi / 3)


@dataclass(frozen=True)
class Periods:
    pi0: complex
    pi1: complex
    r: float = DEFAULT_RADIUS

    @property
    def diff(self):
        return self.pi0 - self.pi1


@dataclass(frozen=True)
class SectorPoint:
    a: float
    b: float

    @property
    def x(self):
        return complex(self.a, self.b)

    @property
    def arg(self):
        """Argument of x in [0, 2*pi)."""
        return math.atan2(self.b, self.a) % (2 * math.pi)

    def __abs__(self):
        return math.hypot(self.a, self.b)


def sheet_kernel(z):
    """(z(1-z))^(-2/3), positive on (0, 1), cut along the real axis outside [0, 1]."""
    z = complex(z)
    w = z * (1 - z)
    if w == 0:
        raise SingularityError(f"z = {z} is a puncture")
    return w ** (-2.0 / 3.0)


def eigenform_Q(j, param, z):
    """Coefficient of dz of the j-th sheet 1-form, j in 1..3."""
    if j not in (1, 2, 3):
        raise ValueError("sheet index must be 1, 2 or 3")
    return OMEGA ** (j - 1) * param.tau * sheet_kernel(z)


def kernel_integral(a, b, tol=1e-13):
    """Integral of (t(1-t))^(-2/3) from a to b along the real line (either order)."""
    if a <= b:
        return integrate_endpoint_singular(a, b, tol=tol)
    return -integrate_endpoint_singular(b, a, tol=tol)


def compute_periods(r=DEFAULT_RADIUS, tol=1e-13):
    """Periods from the real paths puncture -> r-circle -> base point.

    Each is split at the circle radius to mirror the path sigma_P * eta_P^{-1};
    the split point must drop out of the sum.
    """
    if not 0 < r < 0.25:
        raise ValueError(f"need 0 < r < 1/4, got {r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    z0 = BASE_POINT
    left = kernel_integral(0.0, r, tol) + kernel_integral(r, z0, tol)
    right = kernel_integral(1.0, 1.0 - r, tol) + kernel_integral(1.0 - r, z0, tol)
    factor = 2 * (OMEGA - 1)
    return Periods(factor * left, factor * right, r)


def x_coordinate(periods, phi):
    x = cmath.exp(1j * phi / 3) * periods.diff
    return SectorPoint(x.real, x.imag)


def phi_for_arg(theta, periods=None):
    """Smallest phi >= 0 giving arg x = theta (phi is taken modulo 6*pi)."""
    base = cmath.phase(periods.diff) if periods is not None else 5 * math.pi / 6
    return (3 * (theta - base)) % (6 * math.pi)


@dataclass(frozen=True)
class LoopCheckReport:
    r: float
    expected: complex
    gamma0: complex
    gamma1: complex
    gamma0_negative: complex
    expected_negative: complex
    tol: float

    @property
    def errors(self):
        return {
            "gamma0": abs(self.gamma0 - self.expected),
            "gamma1": abs(self.gamma1 - self.expected),
            "gamma0_negative": abs(self.gamma0_negative - self.expected_negative),
        }

    @property
    def passed(self):
        scale = abs(self.expected)
        return all(err <= self.tol * scale for err in self.errors.values())


def local_loop_integral(center, r, orientation=1, tol=1e-13):
    """Integral of (z - center)^(-2/3) once around |z - center| = r.

    The loop starts where the local coordinate z - center is positive and the
    power takes its principal value there.
    """
    path = circle(center, r, 0.0, orientation)
    state = BranchState.principal(path.start, lambda z: z - center)
    return integrate_path(path, lambda z, st: st.power(-2.0 / 3.0), tol=tol, branch=state)


def loop_period_equality_check(r=DEFAULT_RADIUS, tol=1e-10):
    expected = 3 * r ** (1 / 3) * (OMEGA - 1)
    return LoopCheckReport(
        r=r,
        expected=expected,
        gamma0=local_loop_integral(0.0, r),
        gamma1=local_loop_integral(1.0, r),
        gamma0_negative=local_loop_integral(0.0, r, orientation=-1),
        expected_negative=3 * r ** (1 / 3) * (OMEGA.conjugate() - 1),
        tol=tol,
    )
