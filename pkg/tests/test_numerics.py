import cmath
import math

import mpmath
import numpy as np
import pytest

from pwlab.constants import OMEGA
from pwlab.errors import QuadratureError, SingularityError
from pwlab.numerics import (BranchState, adaptive_gk, circle, continue_cube_root, eta0, eta1, gamma0,
                            gamma1, integrate_endpoint_singular, integrate_path, ode_fundamental, segment)
from pwlab.numerics.paths import PathSpec, Segment


def test_residue_loop():
    val = integrate_path(circle(0, 1), lambda z, _: 1 / z)
    assert abs(val - 2j * math.pi) < 1e-12


def test_gamma0_unit_loop():
    path = circle(0, 1)
    val = integrate_path(path, lambda z, st: st.power(-2 / 3), branch=BranchState.principal(path.start))
    assert abs(val - 3 * (OMEGA - 1)) < 1e-10
    assert val == pytest.approx(-4.5 + 2.5980762j, abs=1e-7)


def test_segment_length():
    assert integrate_path(segment(0.25, 0.5), lambda z, _: 1.0) == pytest.approx(0.25, abs=1e-15)


def test_reverse_cancels():
    path = segment(0.1 + 0.2j, 0.7 - 0.3j).then(segment(0.7 - 0.3j, 1.5))
    f = lambda z, _: cmath.exp(z) * z ** 2
    tol = 1e-12
    assert abs(integrate_path(path, f, tol) + integrate_path(path.reverse(), f, tol)) <= 2 * tol


def test_named_paths():
    r = 0.1
    assert eta0(r).start == 0.5 and eta0(r).end == r
    assert eta1(r).end == pytest.approx(1 - r)
    assert gamma0(r).is_closed() and gamma0(r).start == pytest.approx(r)
    assert gamma1(r).start == pytest.approx(1 - r)
    assert eta0(r).reverse().name == "eta0^-1"
    assert eta0(r).reverse().reverse().name == "eta0"
    for bad in (0.0, 0.25, -1):
        with pytest.raises(ValueError):
            eta0(bad)


def test_concatenation_must_join():
    with pytest.raises(ValueError):
        PathSpec((Segment(0j, 1 + 0j), Segment(1.1 + 0j, 2 + 0j)))
    assert segment(0, 1).then(segment(1, 2)).kind == "concatenation"


def test_cube_root_monodromy():
    root = lambda z: z
    state = BranchState.principal(0.1, root)
    once = continue_cube_root(state, gamma0(0.1))
    assert once.power(1 / 3) / state.power(1 / 3) == pytest.approx(OMEGA, abs=1e-12)
    twice = continue_cube_root(once, gamma0(0.1))
    assert twice.power(1 / 3) / state.power(1 / 3) == pytest.approx(OMEGA ** 2, abs=1e-12)


def test_contractible_loop_keeps_argument():
    path = circle(2.0, 0.5, math.pi)
    state = BranchState.principal(path.start)
    assert abs(continue_cube_root(state, path).arg - state.arg) < 1e-9


def test_branch_point_on_path():
    with pytest.raises(SingularityError):
        continue_cube_root(BranchState.principal(-1.0 + 0j), segment(-1, 1))


def test_endpoint_singular_values():
    assert integrate_endpoint_singular(0, 0.5, (-2 / 3, 0)) == pytest.approx(3 * 2 ** (-1 / 3), rel=1e-13)
    mpmath.mp.dps = 30
    beta = float(mpmath.gamma(mpmath.mpf(1) / 3) ** 2 / mpmath.gamma(mpmath.mpf(2) / 3))
    assert integrate_endpoint_singular(0, 1) == pytest.approx(beta, rel=1e-12)
    assert integrate_endpoint_singular(0, 0.5) == pytest.approx(beta / 2, rel=1e-12)
    assert integrate_endpoint_singular(0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        integrate_endpoint_singular(0.5, 0.2)


def test_quadrature_failure_carries_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_gk(lambda x: 1 / x if x else 0.0, 0.0, 1.0, max_intervals=20)
    assert info.value.estimate is not None and info.value.error > 0


def test_ode_constant_diagonal():
    coef = lambda s: np.diag([1.0, 0.0, -1.0])
    for shortcut in (True, False):
        Y = ode_fundamental(segment(0, 1), coef, diagonal_shortcut=shortcut)
        assert np.allclose(Y.to_array(), np.diag([math.e, 1, 1 / math.e]), rtol=1e-10)


def test_ode_time_dependent():
    Y = ode_fundamental(segment(0, 1), lambda s: 2 * s * np.eye(3), diagonal_shortcut=False)
    assert np.allclose(Y.to_array(), math.e * np.eye(3), rtol=1e-10)


def test_ode_non_diagonal_rotation():
    gen = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
    Y = ode_fundamental(segment(0, 1), lambda s: gen).to_array()
    c, s = math.cos(1), math.sin(1)
    assert np.allclose(Y, [[c, -s, 0], [s, c, 0], [0, 0, 1]], atol=1e-10)


def test_ode_diagonal_matches_path_integrals():
    path = segment(0.2, 0.9)
    entries = [lambda z: 40 * z ** 2, lambda z: -3 * cmath.sin(z), lambda z: 1j * z]
    coef = lambda s: np.diag([f(path.point(s)) * path.derivative(s) for f in entries])
    Y = ode_fundamental(path, coef)
    for j, f in enumerate(entries):
        expected = cmath.exp(integrate_path(path, lambda z, _: f(z)))
        assert Y[j, j].rel_diff(expected) < 1e-10


def test_ode_large_growth_stays_finite():
    Y = ode_fundamental(segment(0, 1), lambda s: np.diag([2000.0, 0.0, -2000.0]))
    assert Y[0, 0].log_abs() == pytest.approx(2000.0, rel=1e-12)
    assert Y[2, 2].log_abs() == pytest.approx(-2000.0, rel=1e-12)
