import math

import numpy as np
import pytest

from pwlab.errors import RayAmbiguityError
from pwlab.monodromy import UIntegrals
from pwlab.spectral import PolarParam, SectorPoint
from pwlab.stokes import (SectorId, StokesRay, critical_angles, dominance_empirical, dominance_expected,
                          is_critical, max_dilation, sector_midpoint_phi, sector_of, stokes_ray_limits,
                          term_exponents)

OMEGA = np.exp(2j * np.pi / 3)


def _unit(theta):
    return SectorPoint(math.cos(theta), math.sin(theta))


def test_sector_of():
    assert sector_of(_unit(math.pi / 12)) == SectorId(1)
    assert sector_of(_unit(math.pi / 6)) == StokesRay(1)
    assert sector_of(_unit(0.0)) == StokesRay(12)
    assert sector_of(_unit(2 * math.pi - 0.01)) == SectorId(12)
    with pytest.raises(ValueError):
        sector_of(SectorPoint(0, 0))


def test_critical_angles():
    assert math.pi in critical_angles("first")
    assert math.pi / 2 in critical_angles("second")
    assert set(critical_angles("first")) <= set(critical_angles("second"))
    assert is_critical(3 * math.pi, "first") and not is_critical(math.pi / 2, "first")
    assert is_critical(math.pi / 2, "second")


def test_term_exponents_s1():
    x = _unit(math.pi / 12)
    assert term_exponents("X", x)[0] == pytest.approx(0.9659258, abs=1e-7)
    assert max(term_exponents("Y", x)) == pytest.approx(0.7071068, abs=1e-7)


def test_z_dominates_everywhere():
    rng = np.random.default_rng(0)
    for theta in rng.uniform(0, 2 * math.pi, 10 ** 4):
        x = _unit(theta)
        if isinstance(sector_of(x), StokesRay):
            continue
        assert max_dilation("Z", x) - max(max_dilation("X", x), max_dilation("Y", x)) > 0


def test_table_rows():
    s1 = dominance_expected(1)
    assert s1.dominant[0] == 1 and s1.ordering == ("Z", "X", "Y")
    assert dominance_expected(2).ordering == ("Z", "Y", "X")
    x = _unit(SectorId(9).midpoint_arg)
    z = term_exponents("Z", x)
    assert dominance_expected(9).dominant[2] == 2
    assert z[1] == pytest.approx(-math.sqrt(3) * x.b, abs=1e-12)


@pytest.mark.parametrize("j", range(1, 13))
def test_table_holds_across_whole_sector(j):
    # brute force: evaluate Re(c x) directly for every closed-form coefficient on a fine grid
    coeffs = {"X": [1, OMEGA, OMEGA ** 2], "Y": [-1, -OMEGA, -OMEGA ** 2],
              "Z": [(1 - OMEGA) * OMEGA ** k for k in range(3)]}
    expected = dominance_expected(j)
    thetas = np.linspace((j - 1) * math.pi / 6, j * math.pi / 6, 402)[1:-1]
    x = np.exp(1j * thetas)
    tops = {}
    for k, name in enumerate("XYZ"):
        vals = np.array([(c * x).real for c in coeffs[name]])
        assert np.all(np.argmax(vals, axis=0) + 1 == expected.dominant[k])
        tops[name] = vals.max(axis=0)
    for a, b in zip(expected.ordering, expected.ordering[1:]):
        assert np.all(tops[a] > tops[b])


@pytest.mark.parametrize("cbrt_R", [10.0, 15.0, 20.0])
def test_empirical_matches_table(periods, cbrt_R):
    for j in range(1, 13):
        rep = dominance_empirical(PolarParam(cbrt_R, sector_midpoint_phi(j, periods)), periods, UIntegrals.zero())
        assert rep.record == dominance_expected(j)
        assert rep.max_log_ratio <= -0.1 * cbrt_R


def test_empirical_ignores_u(periods):
    rng = np.random.default_rng(3)
    for j in range(1, 13):
        param = PolarParam(12.0, sector_midpoint_phi(j, periods))
        base = dominance_empirical(param, periods, UIntegrals.zero()).record
        for _ in range(3):
            assert dominance_empirical(param, periods, UIntegrals.random(rng)).record == base


def test_gaps_double_with_radius(periods):
    phi = sector_midpoint_phi(1, periods)
    a = dominance_empirical(PolarParam(10, phi), periods, UIntegrals.zero())
    b = dominance_empirical(PolarParam(20, phi), periods, UIntegrals.zero())
    for g1, g2 in zip(a.coord_gaps + a.term_gaps, b.coord_gaps + b.term_gaps):
        assert g2 / g1 == pytest.approx(2.0, rel=0.01)


def test_ray_rejected(periods):
    with pytest.raises(RayAmbiguityError):
        dominance_empirical(PolarParam(10, math.pi), periods, UIntegrals.zero())


def test_ray_limits_zero_u(periods):
    at_pi = stokes_ray_limits(StokesRay(7), [20.0], UIntegrals.zero(), periods).last()
    assert at_pi.x_over_y == pytest.approx(1.0, abs=1e-6)
    assert at_pi.x_over_z == pytest.approx(0.5, abs=1e-3)
    rows = stokes_ray_limits(5, [2.0, 4.0, 8.0], UIntegrals.zero(), periods).rows
    assert rows[0].x_over_z <= math.exp(-5)
    assert rows[1].x_over_z < rows[0].x_over_z and rows[2].y_over_z < rows[1].y_over_z
    with pytest.raises(ValueError):
        stokes_ray_limits(2, [1.0], UIntegrals.zero(), periods)


def test_ray_limit_diverges_when_z_phases_cancel(periods):
    third = math.pi / 3
    u = UIntegrals.from_imag_parts([0, 0, 0, 0, 0, 0, third, -third, 0, 0, 0, 0])
    rows = stokes_ray_limits(7, [2.0, 4.0, 8.0, 16.0], u, periods).rows
    # exact cancellation of the two leading Z terms is only resolved down to
    # float noise in their exponents, so the ratio saturates near 1e12 instead
    # of growing without bound; it is still nowhere near the u = 0 limit of 1/2
    assert all(r.x_over_z > 1e10 for r in rows)
