"""The twelve sectors of x, Stokes rays, and dominance of the trace-coordinate terms."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CriticalAngleError, RayAmbiguityError
from .monodromy import TERM_COEFFS, trace_coords_closed_form
from .spectral import PolarParam, SectorPoint, phi_for_arg, x_coordinate

RAY_TOL = 1e-12
SECTOR_WIDTH = math.pi / 6


@dataclass(frozen=True)
class SectorId:
    j: int

    def __post_init__(self):
        if not 1 <= self.j <= 12:
            raise ValueError(f"sector index must be in 1..12, got {self.j}")

    @property
    def midpoint_arg(self):
        return (self.j - 0.5) * SECTOR_WIDTH

    def __str__(self):
        return f"S{self.j}"


@dataclass(frozen=True)
class StokesRay:
    """The ray arg x = j*pi/6 between S_j and S_{j+1}."""

    j: int

    def __post_init__(self):
        if not 1 <= self.j <= 12:
            raise ValueError(f"ray index must be in 1..12, got {self.j}")

    @property
    def arg(self):
        return (self.j * SECTOR_WIDTH) % (2 * math.pi)

    def __str__(self):
        return f"R{self.j}"


def sector_of(x):
    if isinstance(x, complex):
        x = SectorPoint(x.real, x.imag)
    if x.a == 0 and x.b == 0:
        raise ValueError("x = 0 has no sector")
    theta = x.arg
    k = round(theta / SECTOR_WIDTH)
    if abs(theta - k * SECTOR_WIDTH) <= RAY_TOL:
        return StokesRay(12 if k % 12 == 0 else k % 12)
    return SectorId(int(theta // SECTOR_WIDTH) + 1)


def critical_angles(kind):
    if kind == "first":
        return [0.0, math.pi, 2 * math.pi]
    if kind == "second":
        return [j * math.pi / 2 for j in range(5)]
    raise ValueError("kind must be 'first' or 'second'")


def is_critical(phi, kind, tol=1e-12):
    step = math.pi if kind == "first" else math.pi / 2
    k = round(phi / step)
    return abs(phi - k * step) <= tol


COORDS = ("X", "Y", "Z")


def term_exponents(coord, x):
    """Per-unit-cbrt_R real exponents Re(c x) of the three terms of a coordinate."""
    xc = x.x if isinstance(x, SectorPoint) else complex(x)
    return [(c * xc).real for c in TERM_COEFFS[coord]]


def max_dilation(coord, x):
    return max(term_exponents(coord, x))


@dataclass(frozen=True)
class DominanceRecord:
    sector: SectorId
    dominant: tuple  # 1-based dominant term index for X, Y, Z
    ordering: tuple  # coordinates by decreasing magnitude


# Dominant term per sector, (X, Y, Z), and the full magnitude ordering.
_TABLE = {
    1: ((1, 2, 1), "ZXY"),
    2: ((1, 2, 1), "ZYX"),
    3: ((3, 2, 1), "ZYX"),
    4: ((3, 2, 3), "ZXY"),
    5: ((3, 1, 3), "ZXY"),
    6: ((3, 1, 3), "ZYX"),
    7: ((2, 1, 3), "ZYX"),
    8: ((2, 1, 2), "ZXY"),
    9: ((2, 3, 2), "ZXY"),
    10: ((2, 3, 2), "ZYX"),
    11: ((1, 3, 2), "ZYX"),
    12: ((1, 3, 1), "ZXY"),
}


def dominance_expected(j):
    if isinstance(j, int):
        j = SectorId(j)
    dom, order = _TABLE[j.j]
    return DominanceRecord(j, dom, tuple(order))


@dataclass(frozen=True)
class GapReport:
    record: DominanceRecord
    log_abs: tuple  # log|X|, log|Y|, log|Z|
    coord_gaps: tuple  # log|second| - log|first|, log|third| - log|second|
    term_gaps: tuple  # per coordinate: runner-up term exponent - dominant exponent

    @property
    def max_log_ratio(self):
        return max(self.coord_gaps + self.term_gaps)


def sector_midpoint_phi(j, periods=None):
    """A phi in [0, 6*pi) putting x at the middle of sector j."""
    j = j.j if isinstance(j, SectorId) else j
    return phi_for_arg((j - 0.5) * SECTOR_WIDTH, periods)


def dominance_empirical(param, periods, u):
    x = x_coordinate(periods, param.phi)
    where = sector_of(x)
    if isinstance(where, StokesRay):
        raise RayAmbiguityError(
            f"phi={param.phi} lies on ray {where}; use stokes_ray_limits for ray behaviour")
    tc = trace_coords_closed_form(param, periods, u)
    dominant = []
    term_gaps = []
    for row in tc.real_exponents:
        order = sorted(range(3), key=lambda k: -row[k])
        dominant.append(order[0] + 1)
        term_gaps.append(row[order[1]] - row[order[0]])
    logs = tc.log_abs()
    ordering = sorted(range(3), key=lambda k: -logs[k])
    coord_gaps = (logs[ordering[1]] - logs[ordering[0]], logs[ordering[2]] - logs[ordering[1]])
    record = DominanceRecord(where, tuple(dominant), tuple(COORDS[k] for k in ordering))
    return GapReport(record, logs, coord_gaps, tuple(term_gaps))


_RAY_PHI = {
    # rays hit by phi = (2k-1)*pi and phi = 2k*pi in the tau-plane
    3: 5 * math.pi, 7: math.pi, 11: 3 * math.pi,
    1: 4 * math.pi, 5: 0.0, 9: 2 * math.pi,
}


@dataclass(frozen=True)
class RayLimitRow:
    cbrt_R: float
    x_over_y: float
    x_over_z: float
    y_over_z: float


@dataclass(frozen=True)
class RayLimitReport:
    ray: StokesRay
    phi: float
    rows: tuple
    formula_level: bool = True  # rests on the closed form holding on the ray itself

    def last(self):
        return self.rows[-1]

    def extrapolated(self):
        """Richardson-free estimate: the ratio values at the largest cbrt_R."""
        r = self.rows[-1]
        return {"x_over_y": r.x_over_y, "x_over_z": r.x_over_z, "y_over_z": r.y_over_z}


def _ratio(a, b):
    d = a.log_abs() - b.log_abs()
    return math.exp(d) if d < 700 else math.inf


def stokes_ray_limits(ray, cbrt_grid, u, periods):
    j = ray.j if isinstance(ray, StokesRay) else int(ray)
    if j not in _RAY_PHI:
        raise ValueError(f"ray R{j} is not tied to a first-kind critical angle")
    phi = _RAY_PHI[j]
    rows = []
    for c in cbrt_grid:
        tc = trace_coords_closed_form(PolarParam(c, phi), periods, u)
        rows.append(RayLimitRow(c, _ratio(tc.X, tc.Y), _ratio(tc.X, tc.Z), _ratio(tc.Y, tc.Z)))
    return RayLimitReport(StokesRay(j), phi, tuple(rows))


def require_noncritical(phi, kind="first"):
    if is_critical(phi, kind):
        raise CriticalAngleError(f"phi={phi} is critical of the {kind} kind")
