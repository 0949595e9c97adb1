"""Fundamental matrices of dY/ds = B(s) Y on s in [0, 1]."""
from __future__ import annotations

import math

import numpy as np

from ..errors import IntegrationError
from .quadrature import adaptive_gk
from .scaled import ScaledMatrix

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])

_PROBES = (0.0, 0.1127016653792583, 0.3, 0.5, 0.7, 0.8872983346207417, 1.0)


def is_diagonal_coefficient(coefficient, probes=_PROBES):
    for s in probes:
        b = np.asarray(coefficient(s), dtype=complex)
        if np.any(b - np.diag(np.diag(b)) != 0):
            return False
    return True


def _diagonal_fundamental(coefficient, tol):
    n = np.asarray(coefficient(0.0)).shape[0]
    logs = []
    for i in range(n):
        val, _ = adaptive_gk(lambda s, i=i: complex(np.asarray(coefficient(s))[i, i]), 0.0, 1.0, tol, tol)
        logs.append(val)
    logs = np.array(logs, dtype=complex)
    m = np.zeros((n, n), dtype=complex)
    e = np.zeros((n, n))
    np.fill_diagonal(m, np.exp(1j * logs.imag))
    np.fill_diagonal(e, logs.real)
    return ScaledMatrix(m, e)


def _rk_fundamental(coefficient, tol, max_steps):
    n = np.asarray(coefficient(0.0)).shape[0]
    y = np.eye(n, dtype=complex)
    shift = 0.0
    s = 0.0
    h = 0.01
    steps = 0
    while s < 1.0:
        if steps >= max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps at s={s}")
        h = min(h, 1.0 - s)
        k = []
        for stage in range(7):
            yi = y.copy()
            for a, kj in zip(_A[stage], k):
                if a:
                    yi = yi + h * a * kj
            k.append(np.asarray(coefficient(s + _C[stage] * h), dtype=complex) @ yi)
        y5 = y + h * sum(b * kj for b, kj in zip(_B5, k))
        y4 = y + h * sum(b * kj for b, kj in zip(_B4, k))
        scale = max(np.max(np.abs(y5)), 1e-300)
        err = np.max(np.abs(y5 - y4)) / scale
        if err <= tol or h <= 1e-14:
            if err > tol:
                raise IntegrationError(f"step size underflow at s={s}")
            s += h
            y = y5
            steps += 1
            # keep the working matrix bounded; the linear ODE lets us factor out scale
            norm = np.max(np.abs(y))
            if norm > 1e100 or norm < 1e-100:
                y = y / norm
                shift += math.log(norm)
        fac = 0.9 * (tol / err) ** 0.2 if err > 0 else 5.0
        h = h * min(5.0, max(0.2, fac))
    return ScaledMatrix(y, np.full((n, n), shift))


def ode_fundamental(path, coefficient, tol=1e-11, max_steps=200000, diagonal_shortcut=True):
    """Fundamental solution Y(1) of dY/ds = B(s) Y, Y(0) = I.

    ``coefficient`` maps the path parameter s in [0, 1] to the matrix B(s)
    (already pulled back along ``path``). Diagonal coefficients are integrated
    in log space, which cannot overflow; pass ``diagonal_shortcut=False`` to
    force the Dormand-Prince stepper.
    """
    if diagonal_shortcut and is_diagonal_coefficient(coefficient):
        return _diagonal_fundamental(coefficient, min(tol, 1e-12))
    return _rk_fundamental(coefficient, tol, max_steps)
