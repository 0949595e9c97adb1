"""WKB monodromies of the two punctures and the trace coordinates X, Y, Z."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import OMEGA
from .numerics.scaled import ScaledComplex, ScaledMatrix, as_scaled_matrix

SHEET_POWERS = (1, OMEGA, OMEGA ** 2)

# nonzero positions (row, col) of entries 1, 2, 3: the cyclic permutation pattern
COMPANION_SLOTS = ((1, 0), (2, 1), (0, 2))


@dataclass(frozen=True)
class UIntegrals:
    """Integrals of the abelian connection forms u_1, u_2, u_3 along the four paths.

    All twelve numbers are purely imaginary and every triple sums to zero.
    """

    eta0: tuple
    eta1: tuple
    gamma0: tuple
    gamma1: tuple

    def __post_init__(self):
        for name in ("eta0", "eta1", "gamma0", "gamma1"):
            triple = tuple(complex(v) for v in getattr(self, name))
            if len(triple) != 3:
                raise ValueError(f"{name} needs three entries")
            scale = max(1.0, max(abs(v) for v in triple))
            if any(abs(v.real) > 1e-15 * scale for v in triple):
                raise ValueError(f"{name} entries must be purely imaginary")
            if abs(sum(triple)) > 1e-12 * scale:
                raise ValueError(f"{name} entries must sum to zero")
            object.__setattr__(self, name, tuple(complex(0.0, v.imag) for v in triple))

    @classmethod
    def zero(cls):
        z = (0j, 0j, 0j)
        return cls(z, z, z, z)

    @classmethod
    def from_imag_parts(cls, values):
        """Twelve reals: imaginary parts for eta0, eta1, gamma0, gamma1 in that order."""
        values = [float(v) for v in values]
        if len(values) != 12:
            raise ValueError("expected 12 imaginary parts")
        trip = [tuple(1j * v for v in values[3 * k:3 * k + 3]) for k in range(4)]
        return cls(*trip)

    @classmethod
    def random(cls, rng, scale=1.0):
        """Gaussian imaginary parts projected onto zero-sum triples."""
        raw = rng.normal(0.0, scale, size=(4, 3))
        raw -= raw.mean(axis=1, keepdims=True)
        raw[:, 2] = -(raw[:, 0] + raw[:, 1])
        return cls(*[tuple(1j * float(v) for v in row) for row in raw])

    def negated(self):
        return UIntegrals(*[tuple(-v for v in getattr(self, n)) for n in ("eta0", "eta1", "gamma0", "gamma1")])

    def imag_parts(self):
        return [v.imag for n in ("eta0", "eta1", "gamma0", "gamma1") for v in getattr(self, n)]

    def eta(self, which):
        return self.eta0 if which == 0 else self.eta1

    def gamma(self, which):
        return self.gamma0 if which == 0 else self.gamma1

    def eta_diff(self):
        return tuple(a - b for a, b in zip(self.eta0, self.eta1))

    def gamma_diff(self):
        return tuple(a - b for a, b in zip(self.gamma0, self.gamma1))


def puncture_phase_terms(eta, gamma):
    """w_j = (eta_j - eta_{j+1}) + gamma_j for j = 1, 2, 3 (indices mod 3)."""
    return tuple(eta[j] - eta[(j + 1) % 3] + gamma[j] for j in range(3))


@dataclass(frozen=True)
class MonodromyMatrix:
    entries: ScaledMatrix
    shape: str  # "A" for the puncture at 0, "B" for the puncture at 1

    def __post_init__(self):
        pattern = set(self.entries.nonzero_pattern())
        if pattern != set(COMPANION_SLOTS):
            raise ValueError(f"not companion-shaped: nonzeros at {sorted(pattern)}")

    def factor(self, j):
        """Entry A_j (1-based)."""
        i, k = COMPANION_SLOTS[j - 1]
        return self.entries[i, k]

    def det(self):
        return self.entries.det()

    def trace(self):
        return self.entries.trace()

    def inverse(self):
        return self.entries.inverse()


def entry_exponents(which, param, periods, u):
    """Complex logs of the three nonzero entries of the monodromy at puncture ``which``."""
    period = periods.pi0 if which == 0 else periods.pi1
    rot = param.rotation
    phases = puncture_phase_terms(u.eta(which), u.gamma(which))
    return [param.cbrt_R * (rot * SHEET_POWERS[j] * period).real + phases[j] for j in range(3)]


def build_monodromy(which, param, periods, u):
    """Asymptotic monodromy around the puncture at 0 (which=0) or 1 (which=1)."""
    if which not in (0, 1):
        raise ValueError("which must be 0 or 1")
    logs = entry_exponents(which, param, periods, u)
    m = np.zeros((3, 3), dtype=complex)
    e = np.zeros((3, 3))
    for (i, k), w in zip(COMPANION_SLOTS, logs):
        s = ScaledComplex.from_log(w)
        m[i, k] = s.mantissa
        e[i, k] = s.exponent
    return MonodromyMatrix(ScaledMatrix(m, e), "A" if which == 0 else "B")


@dataclass(frozen=True)
class TraceCoords:
    X: ScaledComplex
    Y: ScaledComplex
    Z: ScaledComplex
    # closed-form extras: real exponents and phases per (coordinate, term)
    real_exponents: tuple = None
    phases: tuple = None

    def as_tuple(self):
        return (self.X, self.Y, self.Z)

    def log_abs(self):
        return tuple(c.log_abs() for c in self.as_tuple())


def _unwrap(M):
    if isinstance(M, MonodromyMatrix):
        return M.entries
    return as_scaled_matrix(M)


def trace_coords_matrix(A, B):
    """X = tr(A B^-1), Y = tr(A^-1 B), Z = tr(A B A^-1 B^-1) in scaled arithmetic."""
    A = _unwrap(A)
    B = _unwrap(B)
    Ai = A.inverse()
    Bi = B.inverse()
    X = (A @ Bi).trace()
    Y = (Ai @ B).trace()
    Z = (A @ B @ Ai @ Bi).trace()
    return TraceCoords(X, Y, Z)


# Coefficients c with real exponent cbrt_R * Re(c x) for each closed-form term.
TERM_COEFFS = {
    "X": (1, OMEGA, OMEGA ** 2),
    "Y": (-1, -OMEGA, -OMEGA ** 2),
    "Z": ((1 - OMEGA), (1 - OMEGA) * OMEGA, (1 - OMEGA) * OMEGA ** 2),
}


def closed_form_phases(u):
    """Imaginary parts (times i) of the nine closed-form exponents, rows X, Y, Z."""
    d = u.eta_diff()
    g = u.gamma_diff()
    x_terms = (d[2] - d[0] + g[2], d[0] - d[1] + g[0], d[1] - d[2] + g[1])
    y_terms = tuple(-v for v in x_terms)
    z_terms = (
        2 * d[2] - d[0] - d[1] + g[2] - g[1],
        2 * d[0] - d[1] - d[2] + g[0] - g[2],
        2 * d[1] - d[2] - d[0] + g[1] - g[0],
    )
    return (x_terms, y_terms, z_terms)


def closed_form_real_exponents(param, periods):
    x = param.rotation * periods.diff
    return tuple(tuple(param.cbrt_R * (c * x).real for c in TERM_COEFFS[k]) for k in "XYZ")


def trace_coords_closed_form(param, periods, u):
    """Three-term exponential sums for X, Y, Z with the per-term breakdown."""
    reals = closed_form_real_exponents(param, periods)
    phases = closed_form_phases(u)
    coords = []
    for re_row, ph_row in zip(reals, phases):
        total = ScaledComplex(0j)
        for re_, ph in zip(re_row, ph_row):
            total = total + ScaledComplex.from_log(complex(re_, ph.imag))
        coords.append(total)
    return TraceCoords(*coords, real_exponents=reals,
                       phases=tuple(tuple(p.imag for p in row) for row in phases))


def lawton_vector(A, B):
    """The nine trace coordinates x1..x9 of the pair (A, B) as ScaledComplex.

    Order: tr A, tr B, tr AB, tr A^-1, tr B^-1, tr (AB)^-1, tr AB^-1, tr A^-1 B,
    tr A B A^-1 B^-1.
    """
    A = _unwrap(A)
    B = _unwrap(B)
    Ai = A.inverse()
    Bi = B.inverse()
    AB = A @ B
    return (
        A.trace(), B.trace(), AB.trace(),
        Ai.trace(), Bi.trace(), (Bi @ Ai).trace(),
        (A @ Bi).trace(), (Ai @ B).trace(),
        (AB @ Ai @ Bi).trace(),
    )


def relative_to_scale(value, terms):
    """|value| / max |term| in log space, for residual checks."""
    top = max(t.log_abs() for t in terms)
    if value.is_zero():
        return 0.0
    if top == -math.inf:
        return math.inf
    return math.exp(value.log_abs() - top)
