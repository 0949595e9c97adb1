"""Dilation spectra of parallel transport for the abelianized model connection."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_RADIUS, OMEGA
from .errors import CriticalAngleError
from .monodromy import COMPANION_SLOTS, SHEET_POWERS, UIntegrals
from .numerics.paths import PathSpec, eta0, eta1
from .numerics.quadrature import integrate_endpoint_singular, integrate_path
from .numerics.scaled import ScaledComplex, ScaledMatrix, as_scaled_matrix
from .spectral import PolarParam, local_loop_integral, sheet_kernel
from .stokes import is_critical


@dataclass(frozen=True)
class DilationSpectrum:
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(sorted((float(b) for b in self.beta), reverse=True)))


def dilation_spectrum(M):
    """Sorted log singular values of M, stable for entries like e^{+-900}.

    For 3x3 input the top value comes from the bounded residue of M, the bottom
    one from the residue of M^-1, and the middle one from log|det M|.
    """
    M = as_scaled_matrix(M)
    det = M.det()
    if det.is_zero() or not math.isfinite(det.log_abs()):
        raise ValueError("matrix is singular")
    res, shift = M.bounded()
    top = shift + math.log(np.linalg.svd(res, compute_uv=False)[0])
    if M.n == 1:
        return DilationSpectrum((top,))
    inv_res, inv_shift = M.inverse().bounded()
    bottom = -(inv_shift + math.log(np.linalg.svd(inv_res, compute_uv=False)[0]))
    if M.n == 2:
        return DilationSpectrum((top, bottom))
    if M.n == 3:
        return DilationSpectrum((top, det.log_abs() - top - bottom, bottom))
    s = np.linalg.svd(res, compute_uv=False)
    if s[-1] == 0:
        raise ValueError("dynamic range too large for a generic SVD")
    return DilationSpectrum(tuple(shift + np.log(s)))


@dataclass(frozen=True)
class AlphaExponents:
    alpha: tuple  # per unit cbrt_R, descending
    path: str
    phi: float
    sheets: tuple  # sheet index (1..3) behind each alpha


def _path_name(path):
    return path.name if isinstance(path, PathSpec) else str(path)


def segment_kernel_integral(path_name, r=DEFAULT_RADIUS):
    """Integral of the sheet kernel dz along eta0 or eta1 (real, signed by direction)."""
    if path_name == "eta0":
        return -integrate_endpoint_singular(r, 0.5)
    if path_name == "eta1":
        return integrate_endpoint_singular(0.5, 1.0 - r)
    raise ValueError(f"unknown segment {path_name!r}")


def alpha_exponents(path, phi, r=DEFAULT_RADIUS):
    name = _path_name(path)
    if is_critical(phi, "first"):
        raise CriticalAngleError(f"phi={phi} is a multiple of pi")
    k = segment_kernel_integral(name, r)
    rot = np.exp(1j * phi / 3)
    alpha = [-(rot * SHEET_POWERS[j] * k).real for j in range(3)]
    order = sorted(range(3), key=lambda j: -alpha[j])
    return AlphaExponents(tuple(alpha[j] for j in order), name, phi, tuple(j + 1 for j in order))


def permutation_T():
    T = np.zeros((3, 3), dtype=complex)
    for i, k in COMPANION_SLOTS:
        T[i, k] = 1.0
    return T


def _diag_scaled(logs):
    m = np.zeros((3, 3), dtype=complex)
    e = np.zeros((3, 3))
    for j, w in enumerate(logs):
        s = ScaledComplex.from_log(w)
        m[j, j] = s.mantissa
        e[j, j] = s.exponent
    return ScaledMatrix(m, e)


def _segment_path(name, r):
    return eta0(r) if name == "eta0" else eta1(r)


def _u_along(u, name):
    return {"eta0": u.eta0, "eta1": u.eta1, "gamma0": u.gamma0, "gamma1": u.gamma1}[name]


def model_transport(path, param, u=None, r=DEFAULT_RADIUS, tol=1e-12):
    """Transport of the diagonal model connection u_j + 2 Re(e^{j-1} Q) along a named path.

    Paths: eta0, eta1, gamma0, gamma1, each optionally reversed (suffix ^-1).
    Loops pick up the sheet permutation T; their reverses are matrix inverses.
    """
    u = u or UIntegrals.zero()
    name = _path_name(path)
    reverse = name.endswith("^-1")
    base = name[:-3] if reverse else name
    if base in ("eta0", "eta1"):
        seg = _segment_path(base, r)
        if reverse:
            seg = seg.reverse()
        k = integrate_path(seg, lambda z, _: sheet_kernel(z), tol=tol)
        sign = -1 if reverse else 1
        ui = _u_along(u, base)
        logs = [2 * param.cbrt_R * (param.rotation * SHEET_POWERS[j] * k).real + sign * ui[j]
                for j in range(3)]
        return _diag_scaled(logs)
    if base in ("gamma0", "gamma1"):
        center = 0.0 if base == "gamma0" else 1.0
        loop = local_loop_integral(center, r)
        ui = _u_along(u, base)
        logs = [2 * param.cbrt_R * (param.rotation * SHEET_POWERS[j] * loop).real + ui[j]
                for j in range(3)]
        M = ScaledMatrix.from_array(permutation_T()) @ _diag_scaled(logs)
        return M.inverse() if reverse else M
    raise ValueError(f"unknown path {name!r}")


def loop_local_factor(param, r=DEFAULT_RADIUS):
    """Diagonal entries of N for a puncture loop, from the closed form 3 r^(1/3) (e - 1)."""
    val = 3 * r ** (1 / 3) * (OMEGA - 1)
    return [math.exp(2 * param.cbrt_R * (param.rotation * SHEET_POWERS[j] * val).real) for j in range(3)]


def model_coefficient(path_name, param, u=None, r=DEFAULT_RADIUS):
    """B(s) for dY/ds = B(s) Y, the model connection pulled back along eta0 or eta1."""
    u = u or UIntegrals.zero()
    seg = _segment_path(path_name, r)
    ui = _u_along(u, path_name)

    def coefficient(s):
        q = sheet_kernel(seg.point(s)) * seg.derivative(s)
        return np.diag([2 * param.cbrt_R * (param.rotation * SHEET_POWERS[j] * q).real + ui[j]
                        for j in range(3)])

    return seg, coefficient


@dataclass(frozen=True)
class ConvergenceRow:
    cbrt_R: float
    beta: tuple
    expected: tuple
    max_abs_diff: float


@dataclass(frozen=True)
class ConvergenceTable:
    path: str
    phi: float
    rows: tuple
    alpha_route: tuple  # -2*alpha, descending: the same exponents from the alpha side
    alpha_max_diff: float

    @property
    def max_abs_diff(self):
        return max(r.max_abs_diff for r in self.rows)


def transport_exponents(path_name, phi, r=DEFAULT_RADIUS):
    """Per-unit-cbrt_R log sizes 2 Re(e^{j-1} e^{i phi/3} K) of the model transport, descending."""
    k = segment_kernel_integral(path_name, r)
    rot = np.exp(1j * phi / 3)
    return tuple(sorted((2 * (rot * SHEET_POWERS[j] * k).real for j in range(3)), reverse=True))


def wkb_convergence_check(path, phi, grid, u=None, r=DEFAULT_RADIUS):
    name = _path_name(path)
    if is_critical(phi, "first"):
        raise CriticalAngleError(f"phi={phi} is a multiple of pi")
    expected = transport_exponents(name, phi, r)
    rows = []
    for c in grid:
        M = model_transport(name, PolarParam(c, phi), u, r)
        beta = dilation_spectrum(M).beta
        diff = max(abs(b / c - e) for b, e in zip(beta, expected))
        rows.append(ConvergenceRow(float(c), beta, expected, diff))
    alpha = alpha_exponents(name, phi, r)
    alpha_route = tuple(sorted((-2 * a for a in alpha.alpha), reverse=True))
    alpha_diff = max(abs(a - e) for a, e in zip(alpha_route, expected))
    return ConvergenceTable(name, phi, tuple(rows), alpha_route, alpha_diff)
