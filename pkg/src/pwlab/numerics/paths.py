"""Parametrized contours on the three-punctured sphere and branch tracking."""
from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..errors import SingularityError

JOIN_TOL = 1e-12


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def point(self, s):
        # exact at both endpoints
        return (1.0 - s) * self.a + s * self.b

    def derivative(self, s):
        return self.b - self.a

    def reverse(self):
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class CircleArc:
    """Arc of the circle |z - center| = radius from angle theta0 to theta1.

    The orientation is the sign of theta1 - theta0.
    """

    center: complex
    radius: float
    theta0: float
    theta1: float

    @property
    def orientation(self):
        return 1 if self.theta1 >= self.theta0 else -1

    def point(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * s
        return self.center + self.radius * cmath.exp(1j * th)

    def derivative(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * s
        return 1j * (self.theta1 - self.theta0) * self.radius * cmath.exp(1j * th)

    def reverse(self):
        return CircleArc(self.center, self.radius, self.theta1, self.theta0)


@dataclass(frozen=True)
class PathSpec:
    """A concatenation of segments and arcs, each piece run over s in [0, 1]."""

    pieces: tuple
    name: str = ""

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("empty path")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if abs(p.point(1.0) - q.point(0.0)) > JOIN_TOL:
                raise ValueError("path pieces are not endpoint-compatible")

    @property
    def kind(self):
        if len(self.pieces) > 1:
            return "concatenation"
        return "segment" if isinstance(self.pieces[0], Segment) else "circle-arc"

    @property
    def start(self):
        return self.pieces[0].point(0.0)

    @property
    def end(self):
        return self.pieces[-1].point(1.0)

    def is_closed(self):
        return abs(self.start - self.end) <= JOIN_TOL

    def reverse(self):
        name = self.name[:-3] if self.name.endswith("^-1") else (self.name + "^-1" if self.name else "")
        return PathSpec(tuple(p.reverse() for p in reversed(self.pieces)), name)

    def then(self, other):
        return PathSpec(self.pieces + other.pieces, f"{self.name}*{other.name}")

    def _locate(self, s):
        n = len(self.pieces)
        k = min(int(s * n), n - 1)
        return self.pieces[k], s * n - k, n

    def point(self, s):
        piece, local, _ = self._locate(s)
        return piece.point(local)

    def derivative(self, s):
        piece, local, n = self._locate(s)
        return piece.derivative(local) * n


def segment(a, b, name=""):
    return PathSpec((Segment(complex(a), complex(b)),), name)


def circle(center, radius, start_angle=0.0, orientation=1, turns=1, name=""):
    th1 = start_angle + orientation * 2.0 * math.pi * turns
    return PathSpec((CircleArc(complex(center), float(radius), float(start_angle), th1),), name)


def _check_radius(r):
    if not 0 < r < 0.25:
        raise ValueError(f"puncture radius must satisfy 0 < r < 1/4, got {r}")


def eta0(r):
    _check_radius(r)
    return segment(0.5, r, "eta0")


def eta1(r):
    _check_radius(r)
    return segment(0.5, 1.0 - r, "eta1")


def gamma0(r, orientation=1):
    """Circle of radius r about 0, starting where eta0 ends."""
    return circle(0.0, r, 0.0, orientation, name="gamma0")


def gamma1(r, orientation=1):
    """Circle of radius r about 1, starting where eta1 ends (at 1 - r)."""
    return circle(1.0, r, math.pi, orientation, name="gamma1")


def _identity(z):
    return z


@dataclass(frozen=True)
class BranchState:
    """Continuous lift of arg f(z) at ``point`` for a radicand ``f``.

    Fractional powers f^p are then |f|^p * exp(i p arg).
    """

    point: complex
    arg: float
    radicand: Optional[Callable] = field(default=None, compare=False)

    @classmethod
    def principal(cls, point, radicand=None):
        f = (radicand or _identity)(point)
        if f == 0:
            raise SingularityError(f"branch point at {point}")
        return cls(complex(point), cmath.phase(f), radicand)

    def value(self):
        return (self.radicand or _identity)(self.point)

    def power(self, p):
        return abs(self.value()) ** p * cmath.exp(1j * p * self.arg)

    def root(self):
        return self.power(1.0 / 3.0)

    def moved_to(self, z):
        """State at a nearby point z (the phase step must be small)."""
        f = (self.radicand or _identity)
        fz = f(z)
        if fz == 0 or not cmath.isfinite(fz):
            raise SingularityError(f"path meets a branch point at {z}")
        step = cmath.phase(fz / f(self.point))
        return BranchState(complex(z), self.arg + step, self.radicand)


MAX_PHASE_STEP = 0.5


class BranchTracker:
    """Arguments of a radicand along a path, tabulated finely enough to lift."""

    def __init__(self, path, state):
        if abs(path.start - state.point) > JOIN_TOL:
            raise ValueError("branch state is not based at the path start")
        self.path = path
        f = state.radicand or _identity
        self._f = f
        s_vals = [0.0]
        args = [state.arg]
        cur = state
        s = 0.0
        h = 1.0 / 64
        while s < 1.0:
            h = min(h, 1.0 - s)
            z = path.point(s + h)
            fz = f(z)
            if fz == 0 or not cmath.isfinite(fz):
                raise SingularityError(f"path meets a branch point at {z}")
            step = cmath.phase(fz / f(cur.point))
            if abs(step) > MAX_PHASE_STEP:
                h /= 2
                if h < 1e-14:
                    raise SingularityError("path passes through a branch point")
                continue
            cur = BranchState(complex(z), cur.arg + step, state.radicand)
            s += h
            s_vals.append(s)
            args.append(cur.arg)
            h = min(2 * h, 1.0 / 64)
        self.s_vals = s_vals
        self.args = args
        self.final = BranchState(path.end, args[-1], state.radicand)

    def state_at(self, s):
        k = max(0, bisect.bisect_right(self.s_vals, s) - 1)
        base = BranchState(self.path.point(self.s_vals[k]), self.args[k], self.final.radicand)
        return base.moved_to(self.path.point(s))


def continue_cube_root(state, path):
    """Carry a branch state along ``path``; returns the state at its end."""
    return BranchTracker(path, state).final
