"""Blow-up charts at the node, Simpson's map to the nerve circle and the P=W winding check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ResolutionError
from .monodromy import UIntegrals, trace_coords_closed_form
from .numerics.scaled import ScaledComplex
from .parallel import parallel_map
from .spectral import PolarParam, compute_periods, x_coordinate
from .stokes import SectorId, dominance_expected, sector_midpoint_phi, sector_of

VALID_TOL = 1e-12


@dataclass(frozen=True)
class BlowupCoords:
    chart: str  # near-P1 or near-P2
    c1: ScaledComplex
    c2: ScaledComplex


def blowup_coords(tc):
    X, Y, Z = (ScaledComplex.from_complex(v) for v in (tc.X, tc.Y, tc.Z))
    if Z.is_zero():
        raise ValueError("Z = 0 has no blow-up chart")
    if Y.log_abs() <= X.log_abs():
        return BlowupCoords("near-P1", X / Z, Y / X)
    return BlowupCoords("near-P2", Y / Z, X / Y)


@dataclass(frozen=True)
class Thresholds:
    m_lo: float = 1e-4
    m_hi: float = 0.1
    u_lo: float = 0.45
    u_hi: float = 0.55

    def __post_init__(self):
        if not (0 < self.m_lo < self.m_hi and self.u_lo < self.u_hi):
            raise ValueError("need 0 < m_lo < m_hi and u_lo < u_hi")


@dataclass(frozen=True)
class NervePoint:
    phi0: float
    phi1: float
    phi2: float

    @property
    def valid(self):
        return min(self.phi0, self.phi1, self.phi2) <= VALID_TOL

    def as_tuple(self):
        return (self.phi0, self.phi1, self.phi2)


def _clamp(v):
    return min(1.0, max(0.0, v))


def simpson_map(tc, thresholds=None):
    th = thresholds or Thresholds()
    X, Y, Z = (ScaledComplex.from_complex(v) for v in (tc.X, tc.Y, tc.Z))
    lx, ly, lz = X.log_abs(), Y.log_abs(), Z.log_abs()
    log_m = max(lx, ly) - lz
    lam = _clamp((log_m - math.log(th.m_lo)) / math.log(th.m_hi / th.m_lo))
    if lx == -math.inf and ly == -math.inf:
        u = 0.5
    else:
        # |Y| / (|X| + |Y|) without forming either magnitude
        u = 1.0 / (1.0 + math.exp(min(700.0, lx - ly)))
    w = _clamp((u - th.u_lo) / (th.u_hi - th.u_lo))
    return NervePoint(lam, (1 - lam) * (1 - w), (1 - lam) * w)


def boundary_position(p):
    """Arclength coordinate in [0, 3) on the triangle boundary v0 -> v1 -> v2 -> v0."""
    if not p.valid:
        raise ValueError(f"{p} is not on the boundary of the simplex")
    if p.phi2 <= VALID_TOL:
        return p.phi1
    if p.phi0 <= VALID_TOL:
        return 1.0 + p.phi2
    return (2.0 + p.phi0) % 3.0


def winding_number(points, closed=True):
    points = list(points)
    if not points:
        return 0
    for p in points:
        if not p.valid:
            raise ValueError(f"invalid nerve point {p}")
    pos = [boundary_position(p) for p in points]
    if closed:
        pos.append(pos[0])
    total = 0.0
    for a, b in zip(pos, pos[1:]):
        step = (b - a + 1.5) % 3.0 - 1.5
        if abs(step) >= 1.0:
            raise ResolutionError("consecutive samples jump a third of the nerve circle or more")
        total += step
    return int(round(total / 3.0))


@dataclass(frozen=True)
class SampleDiagnostic:
    phi: float
    sector: str
    point: tuple
    valid: bool


@dataclass(frozen=True)
class PWReport:
    winding: int
    all_valid: bool
    samples: int
    diagnostics: tuple = field(repr=False)
    invalid_phis: tuple = ()

    @property
    def passed(self):
        return self.all_valid and self.winding is not None and abs(self.winding) == 1


def _sample(args):
    phi, cbrt_R, u, periods, th = args
    tc = trace_coords_closed_form(PolarParam(cbrt_R, phi), periods, u)
    p = simpson_map(tc, th)
    return SampleDiagnostic(phi, str(sector_of(x_coordinate(periods, phi))), p.as_tuple(), p.valid)


def pw_verify(cbrt_R, u=None, n_samples=1440, thresholds=None, periods=None):
    if n_samples < 360:
        raise ResolutionError(f"need at least 360 samples, got {n_samples}")
    u = u or UIntegrals.zero()
    periods = periods or compute_periods()
    th = thresholds or Thresholds()
    phis = [2 * math.pi * k / n_samples for k in range(n_samples)]
    diags = parallel_map(_sample, [(phi, cbrt_R, u, periods, th) for phi in phis])
    invalid = tuple(d.phi for d in diags if not d.valid)
    winding = None
    if not invalid:
        winding = winding_number([NervePoint(*d.point) for d in diags], closed=True)
    return PWReport(winding, not invalid, n_samples, tuple(diags), invalid)


# Designated affine ratios per sector: (numerator, denominator, (a, b)) meaning
# the ratio's phase should follow hol_{aA + bB}.
HOLONOMY_RATIOS = {
    2: (("Y", "X", (0, 1)), ("Y", "Z", (0, 2))),
    3: (("Y", "X", (-1, -1)), ("Y", "Z", (0, 2))),
    4: (("X", "Z", (1, 0)), ("X", "Y", (1, 1))),
    5: (("X", "Z", (1, 0)), ("X", "Y", (-1, 0))),
}

PHASE_SLACK = 1e-12


def holonomy_phases(u):
    """Phases of hol_A and hol_B built from the eta0 - eta1 and gamma0 - gamma1 differences."""
    d = u.eta_diff()
    g = u.gamma_diff()
    hol_a = (d[0] - d[1] + g[0]).imag
    hol_b = (d[1] - d[2] + g[1]).imag
    return hol_a, hol_b


def _wrap(angle):
    return (angle + math.pi) % (2 * math.pi) - math.pi


@dataclass(frozen=True)
class RatioCheck:
    ratio: str
    cycle: tuple
    measured_phase: float
    holonomy_phase: float
    discrepancy: float
    bound: float

    @property
    def passed(self):
        return self.discrepancy <= self.bound + PHASE_SLACK


@dataclass(frozen=True)
class HolonomyReport:
    sector: int
    phi: float
    cbrt_R: float
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def _subleading_bound(real_row, dominant):
    """Largest phase shift the non-dominant terms can cause: asin of their relative size."""
    top = real_row[dominant - 1]
    rho = sum(math.exp(v - top) for k, v in enumerate(real_row) if k != dominant - 1)
    return math.asin(min(1.0, rho)) if rho < 1 else math.pi


def holonomy_phase_check(sector, u, param_or_cbrt, periods=None):
    j = sector.j if isinstance(sector, SectorId) else int(sector)
    if j not in HOLONOMY_RATIOS:
        raise ValueError(f"holonomy checks are defined on S2..S5, got S{j}")
    periods = periods or compute_periods()
    cbrt_R = param_or_cbrt.cbrt_R if isinstance(param_or_cbrt, PolarParam) else float(param_or_cbrt)
    phi = sector_midpoint_phi(j, periods)
    tc = trace_coords_closed_form(PolarParam(cbrt_R, phi), periods, u)
    expected = dominance_expected(j)
    index = {"X": 0, "Y": 1, "Z": 2}
    coords = {"X": tc.X, "Y": tc.Y, "Z": tc.Z}
    hol_a, hol_b = holonomy_phases(u)
    checks = []
    for num, den, (a, b) in HOLONOMY_RATIOS[j]:
        measured = _wrap(coords[num].arg() - coords[den].arg())
        target = _wrap(a * hol_a + b * hol_b)
        bound = sum(_subleading_bound(tc.real_exponents[index[c]], expected.dominant[index[c]])
                    for c in (num, den))
        checks.append(RatioCheck(f"{num}/{den}", (a, b), measured, target,
                                 abs(_wrap(measured - target)), bound))
    return HolonomyReport(j, phi, cbrt_R, tuple(checks))
