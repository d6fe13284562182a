import numpy as np
import pytest

from mixcurv.errors import UnsupportedOracleError
from mixcurv.geometry import curvature_at
from mixcurv.models import constant, mixed_bloch, pure_bloch
from mixcurv.oracle import bures_fidelity, curvature_finite_loop_pure, qfi_fidelity, sld_vec_solve
from mixcurv.sampling import random_density, random_hermitian, random_unitary_family
from mixcurv.sld import solve_sld, solve_slds
from mixcurv.states import spectral_decompose, validate_density

from conftest import HALF_PI


def test_vec_solve_pure_state():
    rho, s = solve_slds(pure_bloch(), [0.9, 0.2])
    for d in s.derivatives:
        np.testing.assert_allclose(sld_vec_solve(rho, d), 2 * d, atol=1e-10)


def test_vec_solve_zero():
    assert np.allclose(sld_vec_solve(np.eye(3) / 3, np.zeros((3, 3))), 0)


def test_vec_solve_matches_main(rng):
    rho = validate_density(random_density(rng, 5, min_eig=1e-3))
    d = random_hermitian(rng, 5, traceless=True)
    assert np.linalg.norm(sld_vec_solve(rho, d) - solve_sld(spectral_decompose(rho), d)) <= 1e-9


def test_fidelity_identical_states(rng):
    rho = random_density(rng, 4)
    assert bures_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-8)


def test_qfi_fidelity_examples():
    assert qfi_fidelity(mixed_bloch(0.5), [HALF_PI, 0], 0) == pytest.approx(0.25, rel=1e-4)
    assert qfi_fidelity(constant(np.diag([0.6, 0.4])), [0.0, 0.0], 0) == 0
    assert qfi_fidelity(mixed_bloch(1 - 1e-6), [HALF_PI, 0], 0) == pytest.approx(1.0, rel=1e-4)
    with pytest.raises(UnsupportedOracleError):
        qfi_fidelity(pure_bloch(), [HALF_PI, 0], 0)


def test_qfi_fidelity_random(rng):
    for _ in range(10):
        model, theta = random_unitary_family(rng, 3)
        rho, s = solve_slds(model, theta)
        for axis in (0, 1):
            want = rho.expect(s[axis] @ s[axis]).real
            assert qfi_fidelity(model, theta, axis) == pytest.approx(want, rel=1e-4)


def test_loop_equator():
    assert curvature_finite_loop_pure(pure_bloch(), [HALF_PI, 0]) == pytest.approx(-0.5, abs=1e-5)


def test_loop_constant_state():
    assert curvature_finite_loop_pure(constant(np.diag([1.0, 0.0])), [0.3, 0.3]) == 0


def test_loop_second_order(rng):
    theta = np.array([1.1, 0.4])
    exact = curvature_at(pure_bloch(), theta)
    e1 = curvature_finite_loop_pure(pure_bloch(), theta, eps=4e-3) - exact
    e2 = curvature_finite_loop_pure(pure_bloch(), theta, eps=2e-3) - exact
    assert 3 <= e1 / e2 <= 5


def test_loop_rejects_bad_eps():
    with pytest.raises(ValueError):
        curvature_finite_loop_pure(pure_bloch(), [1, 0], eps=0.5)
