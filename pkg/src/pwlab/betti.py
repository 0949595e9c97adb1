"""SL(3) character variety of the three-punctured sphere: sampling, Lawton's relation,
the compactifying divisor cubic and its singular points."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .constants import OMEGA
from .errors import DegenerateEigenvalueError, ResampleError
from .numerics.scaled import ScaledComplex


def _power_sums(triple):
    t = np.asarray(triple, dtype=complex)
    return tuple(complex(np.sum(t ** k)) for k in (1, 2, 3))


def _elementary(triple):
    a, b, c = (complex(v) for v in triple)
    return (a + b + c, a * b + b * c + c * a, a * b * c)


@dataclass(frozen=True)
class EigenvalueData:
    """Local eigenvalues: lam for A (puncture 0), mu for B (puncture 1), nu for AB."""

    lam: tuple
    mu: tuple
    nu: tuple

    def __post_init__(self):
        for name in ("lam", "mu", "nu"):
            t = tuple(complex(v) for v in getattr(self, name))
            if len(t) != 3 or any(v == 0 for v in t):
                raise ValueError(f"{name} must be three nonzero numbers")
            object.__setattr__(self, name, t)

    @classmethod
    def special(cls):
        roots = (1.0 + 0j, OMEGA, OMEGA ** 2)
        return cls(roots, roots, roots)

    def sigma(self, name):
        """Elementary symmetric values of one triple."""
        return _elementary(getattr(self, name))

    def power_sums(self, name):
        """tr M^k targets for k = 1, 2, 3 of the matrix with these eigenvalues."""
        return _power_sums(getattr(self, name))


def _check_distinct(lam, tol=0.0):
    l1, l2, l3 = lam
    if abs(l2 - l3) <= tol:
        raise DegenerateEigenvalueError("lambda_2 = lambda_3")
    if abs(l1 - l2) <= tol or abs(l1 - l3) <= tol:
        raise DegenerateEigenvalueError("coincident lambda entries")


def linear_reduction(eig):
    """Slopes and constants with b22 = s1*b11 + c1 and b33 = s2*b11 + c2."""
    l1, l2, l3 = eig.lam
    if l2 == l3:
        raise DegenerateEigenvalueError("lambda_2 = lambda_3")
    t_b = eig.power_sums("mu")[0]
    t_ab = eig.power_sums("nu")[0]
    s1 = (l3 - l1) / (l2 - l3)
    s2 = (l1 - l2) / (l2 - l3)
    c1 = (l3 * t_b - t_ab) / (l3 - l2)
    c2 = t_b - c1
    return (s1, c1), (s2, c2)


def reduce_linear(eig, b11):
    (s1, c1), (s2, c2) = linear_reduction(eig)
    return s1 * b11 + c1, s2 * b11 + c2


def _poly_matrix_b(eig, v, w):
    """B(X) with polynomial entries in X = b11, after solving for b22, b33, Y, Z."""
    l1, l2, l3 = eig.lam
    (s1, c1), (s2, c2) = linear_reduction(eig)
    X = Polynomial([0, 1])
    Q = Polynomial([c1, s1])
    P = Polynomial([c2, s2])
    p2_mu = eig.power_sums("mu")[1]
    p2_nu = eig.power_sums("nu")[1]
    # 2Y + 2Z = r1 and 2 l1 l2 Y + 2 l1 l3 Z = r2
    r1 = p2_mu - X ** 2 - Q ** 2 - P ** 2 - 2 * v * w
    r2 = p2_nu - l1 ** 2 * X ** 2 - l2 ** 2 * Q ** 2 - l3 ** 2 * P ** 2 - 2 * l2 * l3 * v * w
    det = 4 * l1 * (l3 - l2)
    Y = (2 * l1 * l3 * r1 - 2 * r2) * (1 / det)
    Z = (2 * r2 - 2 * l1 * l2 * r1) * (1 / det)
    one = Polynomial([1])
    return [[X, Y, Z], [one, Q, Polynomial([v])], [one, Polynomial([w]), P]]


def _poly_matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Polynomial([0])) for j in range(n)]
            for i in range(n)]


def b11_cubic(eig, v, w):
    """Polynomial in X whose roots complete (v, w) to a point of the Betti surface."""
    B = _poly_matrix_b(eig, v, w)
    B3 = _poly_matmul(_poly_matmul(B, B), B)
    tr3 = B3[0][0] + B3[1][1] + B3[2][2]
    return tr3 - eig.power_sums("mu")[2]


def _evaluate_b(eig, v, w, x):
    return np.array([[complex(p(x)) for p in row] for row in _poly_matrix_b(eig, v, w)])


@dataclass(frozen=True)
class SurfaceSample:
    B: np.ndarray
    A: np.ndarray
    residuals: dict
    root_index: int

    @property
    def max_residual(self):
        return max(self.residuals.values())


def trace_residuals(eig, A, B):
    AB = A @ B
    p_mu = eig.power_sums("mu")
    p_nu = eig.power_sums("nu")
    return {
        "tr B": abs(np.trace(B) - p_mu[0]),
        "tr B^2": abs(np.trace(B @ B) - p_mu[1]),
        "tr B^3": abs(np.trace(B @ B @ B) - p_mu[2]),
        "tr AB": abs(np.trace(AB) - p_nu[0]),
        "tr (AB)^2": abs(np.trace(AB @ AB) - p_nu[1]),
    }


def sample_surface_point(eig, v, w, seed=0):
    """A matrix B with A = diag(lam) realizing the eigenvalue data, for given (v, w).

    The three roots of the b11-cubic are ordered and one is picked with the seed.
    """
    _check_distinct(eig.lam)
    cubic = b11_cubic(eig, complex(v), complex(w))
    coef = cubic.coef
    scale = np.max(np.abs(coef))
    if len(coef) < 4 or abs(coef[3]) <= 1e-12 * scale:
        raise ResampleError("b11-cubic degenerates; resample (v, w)")
    roots = np.roots(coef[::-1])
    roots = sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    d = cubic.deriv()
    polished = []
    for z in roots:
        for _ in range(4):
            dz = d(z)
            if dz == 0:
                break
            z = z - cubic(z) / dz
        polished.append(complex(z))
    finite = [k for k, z in enumerate(polished) if np.isfinite(z)]
    if not finite:
        raise ResampleError("no usable root of the b11-cubic")
    k = finite[np.random.default_rng(seed).integers(len(finite))]
    B = _evaluate_b(eig, complex(v), complex(w), polished[k])
    A = np.diag(eig.lam)
    return SurfaceSample(B, A, trace_residuals(eig, A, B), k)


def _as_scaled(z):
    return z if isinstance(z, ScaledComplex) else ScaledComplex.from_complex(z)


def lawton_terms(x7, x8, x9):
    """Signed terms of x9^2 - x7 x8 x9 + 3 x9 + 9 - 6 x7 x8 + x7^3 + x8^3."""
    x7, x8, x9 = (_as_scaled(v) for v in (x7, x8, x9))
    return [x9 * x9, -(x7 * x8 * x9), 3 * x9, ScaledComplex(9.0), -(6 * (x7 * x8)),
            x7 ** 3, x8 ** 3]


def lawton_residual(x7, x8, x9):
    """Value of Lawton's relation; a plain complex for plain inputs."""
    terms = lawton_terms(x7, x8, x9)
    total = ScaledComplex(0j)
    for t in terms:
        total = total + t
    if all(not isinstance(v, ScaledComplex) for v in (x7, x8, x9)):
        return total.to_complex()
    return total


def lawton_relative_residual(x7, x8, x9):
    terms = lawton_terms(x7, x8, x9)
    total = ScaledComplex(0j)
    for t in terms:
        total = total + t
    if total.is_zero():
        return 0.0
    top = max(t.log_abs() for t in terms)
    return math.exp(total.log_abs() - top)


MONOMIALS = [m for m in itertools.product(range(4), repeat=3) if sum(m) == 3]


@dataclass(frozen=True)
class HomogeneousCubic:
    """sum c[m] * x^m[0] y^m[1] z^m[2] over the ten cubic monomials m."""

    coeffs: dict
    variables: tuple = ("x", "y", "z")

    def __post_init__(self):
        full = {m: complex(self.coeffs.get(m, 0)) for m in MONOMIALS}
        extra = set(self.coeffs) - set(MONOMIALS)
        if extra:
            raise ValueError(f"not cubic monomials: {sorted(extra)}")
        if not any(full.values()):
            raise ValueError("zero cubic")
        object.__setattr__(self, "coeffs", full)

    def normalized(self):
        s = max(abs(c) for c in self.coeffs.values())
        return HomogeneousCubic({m: c / s for m, c in self.coeffs.items()}, self.variables)

    def value(self, p):
        p = np.asarray(p, dtype=complex)
        return sum(c * np.prod(p ** np.array(m)) for m, c in self.coeffs.items())

    def gradient(self, p):
        p = np.asarray(p, dtype=complex)
        g = np.zeros(3, dtype=complex)
        for m, c in self.coeffs.items():
            if c == 0:
                continue
            for k in range(3):
                if m[k]:
                    mm = list(m)
                    mm[k] -= 1
                    g[k] += c * m[k] * np.prod(p ** np.array(mm))
        return g

    def hessian(self, p):
        p = np.asarray(p, dtype=complex)
        H = np.zeros((3, 3), dtype=complex)
        for m, c in self.coeffs.items():
            if c == 0:
                continue
            for i in range(3):
                for j in range(3):
                    mm = list(m)
                    f = mm[i]
                    mm[i] -= 1
                    if mm[i] < 0:
                        continue
                    f *= mm[j]
                    mm[j] -= 1
                    if mm[j] < 0 or f == 0:
                        continue
                    H[i, j] += c * f * np.prod(p ** np.array(mm))
        return H


def divisor_cubic(lam, single_power=False):
    """The compactifying cubic curve in variables (X, V, W) for A-eigenvalues lam.

    The X^3 coefficient carries (l1 - l2)^2, which is what eliminating Y, Z and
    b11's cubic constraint produces. ``single_power=True`` swaps in a single power
    of (l1 - l2); that variant is smooth and is kept only for comparison.
    """
    l1, l2, l3 = (complex(v) for v in lam)
    if 0 in (l1, l2, l3):
        raise DegenerateEigenvalueError("zero eigenvalue")
    _check_distinct((l1, l2, l3))
    d = l2 - l3
    x3_power = 1 if single_power else 2
    coeffs = {
        (3, 0, 0): -3 * (l1 - l2) ** x3_power * (l1 - l3) ** 2 * (l2 + l3) / (l1 * d ** 4),
        (2, 1, 0): 3 * (l1 - l3) ** 2 * (l1 * l3 - l2 ** 2) / (l1 * d ** 3),
        (2, 0, 1): 3 * (l1 - l2) ** 2 * (l3 ** 2 - l1 * l2) / (l1 * d ** 3),
        (1, 1, 1): -3 * (l1 * d ** 2 + l2 * (l1 - l3) ** 2 + l3 * (l1 - l2) ** 2) / (l1 * d ** 2),
        (0, 1, 2): 3 * l2 * (l1 - l3) / (l1 * (l3 - l2)),
        (0, 2, 1): 3 * l3 * (l1 - l2) / (l1 * d),
    }
    return HomogeneousCubic(coeffs, ("X", "V", "W"))


@dataclass(frozen=True)
class SingularPoint:
    point: tuple  # projective coordinates, largest entry scaled to 1
    kind: str  # node | cusp | other
    gradient_norm: float
    hessian_det: float


@dataclass(frozen=True)
class SingularityReport:
    points: tuple
    starts: int
    converged: int
    failed: int
    node_threshold: float = 1e-6
    notes: list = field(default_factory=list)

    @property
    def kinds(self):
        return [p.kind for p in self.points]


def _projective_normalize(p):
    p = np.asarray(p, dtype=complex)
    k = int(np.argmax(np.abs(p)))
    p = p / p[k]
    p[k] = 1.0
    return p, k


def _newton_chart(F, chart, start, max_iter=80):
    free = [i for i in range(3) if i != chart]
    y = np.array(start, dtype=complex)

    def embed(y):
        p = np.ones(3, dtype=complex)
        p[free] = y
        return p

    for _ in range(max_iter):
        p = embed(y)
        g = F.gradient(p)[free]
        J = F.hessian(p)[np.ix_(free, free)]
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError:
            return None
        y = y - step
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > 1e8:
            return None
        if np.max(np.abs(step)) <= 1e-14 * max(1.0, np.max(np.abs(y))):
            return embed(y)
    return embed(y)


def _classify(F, p, chart, threshold):
    free = [i for i in range(3) if i != chart]
    H = F.hessian(p)[np.ix_(free, free)]
    det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
    scale = max(abs(c) for c in F.coeffs.values())
    if abs(det) > threshold * scale ** 2:
        return "node", abs(det)
    if np.max(np.abs(H)) <= math.sqrt(threshold) * scale:
        return "other", abs(det)
    # rank one: look at the cubic term along the tangent direction
    _, _, vh = np.linalg.svd(H)
    t = vh[-1].conj()
    direction = np.zeros(3, dtype=complex)
    direction[free] = t
    cubic_term = F.value(direction)
    return ("cusp" if abs(cubic_term) > threshold * scale else "other"), abs(det)


def singular_points(cubic, starts_per_chart=40, seed=0, threshold=1e-6, grad_tol=1e-9):
    """All singular points of the projective cubic curve, by multistart Newton."""
    F = cubic.normalized()
    rng = np.random.default_rng(seed)
    found = []
    converged = failed = 0
    for chart in range(3):
        starts = rng.normal(size=(starts_per_chart, 2)) + 1j * rng.normal(size=(starts_per_chart, 2))
        starts = np.vstack([np.zeros((1, 2)), starts * 1.5])
        for s in starts:
            p = _newton_chart(F, chart, s)
            if p is None:
                failed += 1
                continue
            q, k = _projective_normalize(p)
            gnorm = float(np.linalg.norm(F.gradient(q)))
            if gnorm > grad_tol:
                failed += 1
                continue
            converged += 1
            if any(np.max(np.abs(q - r)) < 1e-7 for r, _ in found):
                continue
            found.append((q, k))
    points = []
    for q, k in found:
        kind, hdet = _classify(F, q, k, threshold)
        gnorm = float(np.linalg.norm(F.gradient(q)))
        points.append(SingularPoint(tuple(complex(v) for v in q), kind, gnorm, float(hdet)))
    points.sort(key=lambda sp: tuple((round(v.real, 9), round(v.imag, 9)) for v in sp.point))
    return SingularityReport(tuple(points), starts=3 * (starts_per_chart + 1),
                             converged=converged, failed=failed, node_threshold=threshold)


def random_generic_lambda(rng, spread=0.35):
    """Unit-modulus perturbation of (1, e, e^2), pairwise gaps at least 0.1."""
    while True:
        angles = 2 * math.pi * np.arange(3) / 3 + rng.uniform(-spread, spread, size=3)
        lam = tuple(complex(np.exp(1j * a)) for a in angles)
        gaps = [abs(a - b) for a, b in itertools.combinations(lam, 2)]
        if min(gaps) >= 0.1:
            return lam


def nodal_lawton_cubic():
    """Homogenized leading part x7^3 + x8^3 - x7 x8 x9 of Lawton's relation."""
    return HomogeneousCubic({(3, 0, 0): 1, (0, 3, 0): 1, (1, 1, 1): -1}, ("x7", "x8", "x9"))
