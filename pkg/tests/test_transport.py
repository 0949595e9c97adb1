import cmath
import math

import numpy as np
import pytest

from pwlab.constants import OMEGA
from pwlab.errors import CriticalAngleError
from pwlab.monodromy import UIntegrals
from pwlab.numerics import integrate_endpoint_singular, ode_fundamental
from pwlab.numerics.scaled import ScaledMatrix
from pwlab.spectral import PolarParam
from pwlab.transport import (alpha_exponents, dilation_spectrum, model_coefficient, model_transport,
                             permutation_T, transport_exponents, wkb_convergence_check)


def _unitary(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    return q * (np.diag(r) / abs(np.diag(r)))


def test_spectrum_basics():
    assert dilation_spectrum(np.eye(3)).beta == pytest.approx((0, 0, 0), abs=1e-15)
    d = np.diag([math.e ** 2, math.e, math.e ** -3])
    assert dilation_spectrum(d).beta == pytest.approx((2, 1, -3), abs=1e-13)
    rng = np.random.default_rng(0)
    assert dilation_spectrum(_unitary(rng)).beta == pytest.approx((0, 0, 0), abs=1e-12)
    with pytest.raises(ValueError):
        dilation_spectrum(np.zeros((3, 3)))


def test_spectrum_unitary_invariance_wide_range():
    rng = np.random.default_rng(1)
    m = np.zeros((3, 3), dtype=complex)
    e = np.zeros((3, 3))
    m[1, 0], m[2, 1], m[0, 2] = 1, 1j, -1
    e[1, 0], e[2, 1], e[0, 2] = 700.0, -300.0, -400.0
    M = ScaledMatrix(m, e)
    base = dilation_spectrum(M).beta
    assert base == pytest.approx((700, -300, -400), abs=1e-10)
    for _ in range(20):
        U = ScaledMatrix.from_array(_unitary(rng))
        assert dilation_spectrum(M @ U).beta == pytest.approx(base, abs=1e-12)


def test_alpha_exponents():
    r = 0.1
    a = alpha_exponents("eta0", math.pi / 2, r)
    assert sum(a.alpha) == pytest.approx(0, abs=1e-13)
    length = integrate_endpoint_singular(r, 0.5)
    # eta0 runs from 1/2 down to r, so sheet 1 picks up +cos(pi/6) times the real integral
    by_sheet = dict(zip(a.sheets, a.alpha))
    assert by_sheet[1] == pytest.approx(math.cos(math.pi / 6) * length, rel=1e-12)
    assert sorted(a.alpha) == pytest.approx(sorted(v * length for v in (-math.cos(math.pi / 6), 0, math.cos(math.pi / 6))), abs=1e-12)
    with pytest.raises(CriticalAngleError):
        alpha_exponents("eta0", math.pi)


def test_eta0_transport_is_exponential_of_integral():
    param = PolarParam(3.0, 0.7)
    M = model_transport("eta0", param)
    k = -integrate_endpoint_singular(0.1, 0.5)
    for j in range(3):
        expect = 2 * 3.0 * (cmath.exp(0.7j / 3) * OMEGA ** j * k).real
        assert M[j, j].log_abs() == pytest.approx(expect, abs=1e-11)


def test_gamma0_transport_matches_closed_loop_matrix():
    param = PolarParam(4.0, 1.1)
    r = 0.1
    M = model_transport("gamma0", param, r=r).to_array()
    loop = 3 * r ** (1 / 3) * (OMEGA - 1)
    N = np.diag([math.exp(2 * 4.0 * (cmath.exp(1.1j / 3) * OMEGA ** j * loop).real)
                 for j in range(3)])
    assert np.allclose(M, permutation_T() @ N, rtol=1e-10)


def test_ode_route_matches_exponential_route():
    param = PolarParam(3.0, math.pi / 2)
    seg, coef = model_coefficient("eta0", param)
    ode = ode_fundamental(seg, coef, diagonal_shortcut=False)
    direct = model_transport("eta0", param)
    for j in range(3):
        assert ode[j, j].rel_diff(direct[j, j]) <= 1e-8


@pytest.mark.parametrize("path", ["eta0", "eta1", "gamma0", "gamma1"])
def test_reverse_composes_to_identity(path):
    rng = np.random.default_rng(2)
    param = PolarParam(6.0, 2.2)
    u = UIntegrals.random(rng)
    prod = model_transport(path, param, u) @ model_transport(path + "^-1", param, u)
    assert np.allclose(prod.to_array(), np.eye(3), atol=1e-10)


def test_convergence_table():
    table = wkb_convergence_check("eta0", math.pi / 2, [2.0, 3.0, 4.0, 5.0])
    assert table.max_abs_diff <= 1e-8
    assert table.alpha_max_diff <= 1e-12
    for row in table.rows:
        assert sum(row.beta) == pytest.approx(0, abs=1e-10)


def test_random_grid_against_alpha_route():
    rng = np.random.default_rng(3)
    for _ in range(50):
        phi = rng.uniform(0.05, math.pi - 0.05) + math.pi * rng.integers(0, 6)
        c = rng.uniform(0.5, 40)
        for path in ("eta0", "eta1"):
            table = wkb_convergence_check(path, phi, [c], UIntegrals.random(rng))
            assert table.max_abs_diff <= 1e-9
            assert table.alpha_max_diff <= 1e-12


def test_u_leaves_spectrum_unchanged():
    rng = np.random.default_rng(4)
    param = PolarParam(5.0, 0.9)
    for path in ("eta0", "eta1", "gamma0", "gamma1"):
        base = dilation_spectrum(model_transport(path, param)).beta
        twisted = dilation_spectrum(model_transport(path, param, UIntegrals.random(rng))).beta
        assert twisted == pytest.approx(base, abs=1e-12)


def test_transport_exponents_sorted():
    ex = transport_exponents("eta1", 0.4)
    assert list(ex) == sorted(ex, reverse=True)
