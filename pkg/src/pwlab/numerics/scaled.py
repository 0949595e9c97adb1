"""Overflow-safe complex scalars and small matrices.

A value is stored as ``mantissa * exp(exponent)`` with ``1 <= |mantissa| < e``.
The kernels below work on plain Python numbers and on numpy arrays alike, so
bulk checks can be vectorized while ScaledComplex stays a light value type.
"""
from __future__ import annotations

import cmath
import math

import numpy as np


def normalize(m, e):
    """Renormalize mantissa/exponent arrays so that 1 <= |m| < e (zeros -> 0, 0)."""
    m = np.asarray(m, dtype=complex)
    e = np.asarray(e, dtype=float)
    mag = np.abs(m)
    nz = mag > 0
    with np.errstate(divide="ignore"):
        k = np.where(nz, np.floor(np.log(np.where(nz, mag, 1.0))), 0.0)
    m = np.where(nz, m * np.exp(-k), 0.0)
    # floor(log) can be off by one ulp at the boundaries
    mag = np.abs(m)
    hi = nz & (mag >= math.e)
    lo = nz & (mag < 1.0)
    m = np.where(hi, m / math.e, np.where(lo, m * math.e, m))
    k = k + hi - lo
    e = np.where(nz, e + k, 0.0)
    return m, e


def mul(m1, e1, m2, e2):
    return normalize(np.multiply(m1, m2), np.add(e1, e2))


def add(m1, e1, m2, e2):
    m1 = np.asarray(m1, dtype=complex)
    m2 = np.asarray(m2, dtype=complex)
    e1 = np.where(m1 == 0, -np.inf, e1)
    e2 = np.where(m2 == 0, -np.inf, e2)
    top = np.maximum(e1, e2)
    safe = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        s = m1 * np.exp(e1 - safe) + m2 * np.exp(e2 - safe)
    s = np.where(np.isfinite(top), s, 0.0)
    return normalize(s, safe)


def log_sum(ms, es, axis=-1):
    """Sum along ``axis`` of scaled values given as mantissa/exponent arrays."""
    ms = np.asarray(ms, dtype=complex)
    es = np.where(ms == 0, -np.inf, np.asarray(es, dtype=float))
    top = np.max(es, axis=axis, keepdims=True)
    safe = np.where(np.isfinite(top), top, 0.0)
    s = np.sum(ms * np.exp(es - safe), axis=axis)
    return normalize(s, np.squeeze(safe, axis=axis))


def _norm1(m, e):
    """Scalar fast path of normalize()."""
    if m == 0:
        return 0j, 0.0
    a = abs(m)
    if a == math.inf or a != a:
        raise OverflowError("non-finite mantissa")
    k = math.floor(math.log(a))
    m = m * math.exp(-k)
    a = abs(m)
    if a >= math.e:
        m /= math.e
        k += 1
    elif a < 1.0:
        m *= math.e
        k -= 1
    return m, e + k


class ScaledComplex:
    """Complex number ``mantissa * exp(exponent)`` that never overflows."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa=0j, exponent=0.0):
        m, e = _norm1(complex(mantissa), float(exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("ScaledComplex is immutable")

    @classmethod
    def from_complex(cls, z):
        if isinstance(z, ScaledComplex):
            return z
        return cls(complex(z), 0.0)

    @classmethod
    def from_log(cls, w):
        """exp(w) for complex ``w`` without ever forming the big number."""
        w = complex(w)
        k = math.floor(w.real)
        return cls(cmath.exp(complex(w.real - k, w.imag)), float(k))

    @classmethod
    def _raw(cls, m, e):
        obj = object.__new__(cls)
        object.__setattr__(obj, "mantissa", complex(m))
        object.__setattr__(obj, "exponent", float(e))
        return obj

    def is_zero(self):
        return self.mantissa == 0

    def log_abs(self):
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    def arg(self):
        return cmath.phase(self.mantissa)

    def log(self):
        """Principal complex logarithm."""
        if self.mantissa == 0:
            raise ValueError("log of zero")
        return complex(self.log_abs(), self.arg())

    def to_complex(self):
        if self.mantissa == 0:
            return 0j
        if self.exponent > 709:
            return complex(math.copysign(math.inf, self.mantissa.real) if self.mantissa.real else 0.0,
                           math.copysign(math.inf, self.mantissa.imag) if self.mantissa.imag else 0.0)
        return self.mantissa * math.exp(self.exponent)

    __complex__ = to_complex

    def __abs__(self):
        return ScaledComplex(abs(self.mantissa), self.exponent)

    def __neg__(self):
        return ScaledComplex._raw(-self.mantissa, self.exponent)

    def conjugate(self):
        return ScaledComplex._raw(self.mantissa.conjugate(), self.exponent)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        m, e = _norm1(self.mantissa * other.mantissa, self.exponent + other.exponent)
        return ScaledComplex._raw(m, e)

    __rmul__ = __mul__

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.mantissa == 0:
            return self
        if self.mantissa == 0:
            return other
        d = other.exponent - self.exponent
        if d > 0:
            m = other.mantissa + (self.mantissa * math.exp(-d) if d < 800 else 0)
            m, e = _norm1(m, other.exponent)
        else:
            m = self.mantissa + (other.mantissa * math.exp(d) if d > -800 else 0)
            m, e = _norm1(m, self.exponent)
        return ScaledComplex._raw(m, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def inverse(self):
        if self.mantissa == 0:
            raise ZeroDivisionError("inverse of scaled zero")
        return ScaledComplex(1.0 / self.mantissa, -self.exponent)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ScaledComplex(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.mantissa, self.exponent))

    def __repr__(self):
        return f"ScaledComplex({self.mantissa!r}, {self.exponent!r})"

    def rel_diff(self, other):
        """|self - other| / max(|self|, |other|), computed without overflow."""
        other = _coerce(other)
        top = max(self.log_abs(), other.log_abs())
        if top == -math.inf:
            return 0.0
        return math.exp((self - other).log_abs() - top)

    def to_json(self):
        return {"mantissa": [self.mantissa.real, self.mantissa.imag], "exponent": self.exponent}


def _coerce(x):
    if isinstance(x, ScaledComplex):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return ScaledComplex(complex(x), 0.0)
    return NotImplemented


SCALED_ZERO = ScaledComplex(0j)
SCALED_ONE = ScaledComplex(1.0)


class ScaledMatrix:
    """Square matrix with an independent scale per entry.

    Entries of WKB monodromies differ by factors like e^{±900}; a common
    exponent would flush the small ones to zero, so each entry keeps its own.
    """

    __slots__ = ("m", "e")

    def __init__(self, mantissas, exponents=None):
        mantissas = np.array(mantissas, dtype=complex)
        if exponents is None:
            exponents = np.zeros(mantissas.shape)
        m, e = normalize(mantissas, exponents)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("ScaledMatrix must be square")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", e)
        m.setflags(write=False)
        e.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("ScaledMatrix is immutable")

    @classmethod
    def from_entries(cls, rows):
        """Build from a nested list of ScaledComplex (or plain numbers)."""
        rows = [[ScaledComplex.from_complex(x) for x in row] for row in rows]
        m = [[x.mantissa for x in row] for row in rows]
        e = [[x.exponent for x in row] for row in rows]
        return cls(m, e)

    @classmethod
    def from_array(cls, a):
        return cls(np.asarray(a, dtype=complex))

    @classmethod
    def identity(cls, n=3):
        return cls(np.eye(n, dtype=complex))

    @property
    def n(self):
        return self.m.shape[0]

    def __getitem__(self, ij):
        i, j = ij
        return ScaledComplex._raw(self.m[i, j], self.e[i, j])

    def entries(self):
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def to_array(self):
        with np.errstate(over="ignore"):
            return self.m * np.exp(self.e)

    def max_exponent(self):
        nz = self.m != 0
        if not nz.any():
            return 0.0
        return float(np.max(self.e[nz]))

    def bounded(self):
        """Return (residue, shift) with self = residue * exp(shift) and max|residue| ~ 1."""
        shift = self.max_exponent()
        with np.errstate(under="ignore"):
            return self.m * np.exp(self.e - shift), shift

    def __matmul__(self, other):
        if not isinstance(other, ScaledMatrix):
            other = ScaledMatrix.from_array(other)
        # terms[i, k, j] = self[i, k] * other[k, j]
        tm = self.m[:, :, None] * other.m[None, :, :]
        te = self.e[:, :, None] + other.e[None, :, :]
        m, e = log_sum(tm, te, axis=1)
        return ScaledMatrix(m, e)

    def __neg__(self):
        return ScaledMatrix(-self.m, self.e)

    def scale(self, s):
        s = ScaledComplex.from_complex(s)
        return ScaledMatrix(self.m * s.mantissa, self.e + s.exponent)

    def trace(self):
        m, e = log_sum(np.diag(self.m), np.diag(self.e), axis=0)
        return ScaledComplex._raw(m, e)

    def _minor_det(self, rows, cols):
        sub = [[self[i, j] for j in cols] for i in rows]
        return _det_entries(sub)

    def det(self):
        return _det_entries(self.entries())

    def inverse(self):
        """Inverse via the adjugate, entrywise in scaled arithmetic."""
        n = self.n
        d = self.det()
        if d.is_zero() or not math.isfinite(d.log_abs()):
            raise ValueError("matrix is singular")
        inv_d = d.inverse()
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows = [k for k in range(n) if k != j]
                cols = [k for k in range(n) if k != i]
                c = self._minor_det(rows, cols) if n > 1 else SCALED_ONE
                if (i + j) % 2:
                    c = -c
                out[i][j] = c * inv_d
        return ScaledMatrix.from_entries(out)

    def nonzero_pattern(self):
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.m[i, j] != 0]

    def __repr__(self):
        return f"ScaledMatrix(m={self.m!r}, e={self.e!r})"


def _det_entries(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = SCALED_ZERO
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        sub = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * _det_entries(sub)
        total = total - term if j % 2 else total + term
    return total


def as_scaled_matrix(a):
    if isinstance(a, ScaledMatrix):
        return a
    return ScaledMatrix.from_array(a)
