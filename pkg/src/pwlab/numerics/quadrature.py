"""Adaptive Gauss-Kronrod quadrature along paths and on endpoint-singular intervals."""
from __future__ import annotations

import heapq

import numpy as np

from ..errors import QuadratureError
from .paths import BranchTracker

# Kronrod 15-point nodes on [-1, 1] (positive half), weights, and the embedded
# 7-point Gauss weights on the odd-indexed nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_W = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[1:7:2] = _WG[:3]
GAUSS_W[7] = _WG[3]
GAUSS_W[9:15:2] = _WG[2::-1]

MAX_INTERVALS = 4000


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.array([f(mid + half * x) for x in NODES])
    k = half * np.dot(KRONROD_W, vals)
    g = half * np.dot(GAUSS_W, vals)
    return k, abs(k - g)


def adaptive_gk(f, a=0.0, b=1.0, abs_tol=1e-12, rel_tol=1e-12, max_intervals=MAX_INTERVALS):
    """Globally adaptive G7/K15 quadrature of a scalar function on [a, b].

    Returns (value, error_estimate); raises QuadratureError on exhaustion.
    """
    if a == b:
        return 0.0, 0.0
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    count = 1
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if count >= max_intervals:
            raise QuadratureError(
                f"no convergence after {count} intervals", estimate=total, error=total_err)
        neg_err, lo, hi, v = heapq.heappop(heap)
        m = 0.5 * (lo + hi)
        if m <= lo or m >= hi:
            raise QuadratureError("interval underflow", estimate=total, error=total_err)
        v1, e1 = _gk15(f, lo, m)
        v2, e2 = _gk15(f, m, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, m, v1))
        heapq.heappush(heap, (-e2, m, hi, v2))
        count += 1
    # re-sum to shed accumulated drift from the running updates
    total = sum(item[3] for item in heap)
    total_err = sum(-item[0] for item in heap)
    return total, total_err


def integrate_path(path, integrand, tol=1e-12, branch=None, rel_tol=None):
    """Integral of integrand(z, state) dz along ``path``.

    When ``branch`` is a BranchState based at the path start, the integrand
    receives the continuously continued state at each node; otherwise None.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    tracker = BranchTracker(path, branch) if branch is not None else None

    def pulled_back(s):
        z = path.point(s)
        state = tracker.state_at(s) if tracker is not None else None
        return integrand(z, state) * path.derivative(s)

    n = len(path.pieces)
    total = 0j
    for k in range(n):
        val, _ = adaptive_gk(pulled_back, k / n, (k + 1) / n, abs_tol=tol / n,
                             rel_tol=tol if rel_tol is None else rel_tol)
        total += val
    return complex(total)


def integrate_endpoint_singular(a, b, exponent_pair=(-2.0 / 3.0, -2.0 / 3.0), tol=1e-13):
    """Integral of t^p (1-t)^q over [a, b] within [0, 1] using cubic substitutions.

    Near 0 set t = s^3, near 1 set 1 - t = s^3; the split is at 1/2.
    """
    p, q = exponent_pair
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError(f"need 0 <= a <= b <= 1, got a={a}, b={b}")
    if a == b:
        return 0.0

    def left(s):
        t = s ** 3
        return 3.0 * s ** (3.0 * p + 2.0) * (1.0 - t) ** q

    def right(s):
        t = 1.0 - s ** 3
        return 3.0 * s ** (3.0 * q + 2.0) * t ** p

    total = 0.0
    lo, hi = a, min(b, 0.5)
    if lo < hi:
        total += adaptive_gk(left, lo ** (1 / 3), hi ** (1 / 3), tol, tol)[0]
    lo, hi = max(a, 0.5), b
    if lo < hi:
        total += adaptive_gk(right, (1.0 - hi) ** (1 / 3), (1.0 - lo) ** (1 / 3), tol, tol)[0]
    return float(total)
