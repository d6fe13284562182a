import warnings

import numpy as np
import pytest

from mixcurv.errors import NumericError, RegretError, ShapeMismatchError
from mixcurv.metrology import c_squared, classical_fisher, regret, tradeoff_audit
from mixcurv.models import constant, mixed_bloch, pure_bloch
from mixcurv.sampling import random_projective_povm, random_unitary_family
from mixcurv.states import projective_povm

from conftest import HALF_PI

Z_POVM = projective_povm(np.eye(2))


@pytest.mark.parametrize("theta", [[HALF_PI, 0.0], [0.4, 1.0], [2.5, 4.0]])
def test_sigma_z_fisher(theta):
    assert classical_fisher(pure_bloch(), Z_POVM, theta, 0) == pytest.approx(1.0, abs=1e-9)
    assert classical_fisher(pure_bloch(), Z_POVM, theta, 1) == 0.0


def test_constant_model_fisher():
    assert classical_fisher(constant(np.eye(2) / 2), Z_POVM, [0.1, 0.2], 0) == 0.0


def test_fisher_dim_mismatch():
    with pytest.raises(ShapeMismatchError):
        classical_fisher(pure_bloch(), projective_povm(np.eye(3)), [1.0, 0.0], 0)


def test_zero_probability_outcome_is_removable():
    # at the pole the second outcome and its derivative both vanish; the
    # floored term is dropped without a warning, so F there is 0, not the limit 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert classical_fisher(pure_bloch(), Z_POVM, [0.0, 0.0], 0) == 0.0


@pytest.mark.parametrize("qfi,cfi,want", [(1, 1, 0), (1, 0, 1), (1, 0.75, 0.25), (1, 1 + 5e-10, 0)])
def test_regret_examples(qfi, cfi, want):
    assert regret(qfi, cfi) == pytest.approx(want)


@pytest.mark.parametrize("qfi,cfi", [(0, 0), (-1, 0), (1, 1.1), (1, -0.1)])
def test_regret_errors(qfi, cfi):
    with pytest.raises(RegretError):
        regret(qfi, cfi)


def test_c_squared_examples():
    assert c_squared(0.0, 1, 2) == 0
    assert c_squared(1.0, 1.0, 1.0) == 1.0
    assert c_squared(0.125, 0.25, 0.25) == pytest.approx(0.25)
    with pytest.raises(RegretError):
        c_squared(0.1, 0.0, 1.0)
    with pytest.raises(NumericError):
        c_squared(1.1, 1.0, 1.0)


def test_pure_equator_audit_saturates():
    audit = tradeoff_audit(pure_bloch(), Z_POVM, [HALF_PI, 0.0])
    assert audit.regret[0] == pytest.approx(0.0, abs=1e-9)
    assert audit.regret[1] == pytest.approx(1.0, abs=1e-9)
    assert audit.c2 == pytest.approx(1.0, abs=1e-9)
    assert abs(audit.eq1.lhs - audit.eq1.rhs) <= 1e-9
    assert abs(audit.eq18_slack) <= 1e-9


def test_mixed_equator_c2():
    audit = tradeoff_audit(mixed_bloch(0.5), Z_POVM, [HALF_PI, 0.0])
    assert audit.c2 == pytest.approx(0.25, abs=1e-9)
    assert audit.curvature == pytest.approx(-0.0625, abs=1e-12)


def test_zero_curvature_trivial():
    audit = tradeoff_audit(mixed_bloch(0.5), Z_POVM, [1.0, 0.3], axes=(0, 0))
    assert audit.curvature == 0 and audit.eq1.rhs <= 1e-30 and audit.eq1.slack >= 0


def test_scaled_form_matches(rng):
    for _ in range(30):
        n = int(rng.integers(2, 5))
        model, theta = random_unitary_family(rng, n)
        audit = tradeoff_audit(model, random_projective_povm(rng, n), theta)
        prod = audit.qfi[0] * audit.qfi[1]
        for got, want in ((audit.eq17.lhs, audit.eq1.lhs * prod), (audit.eq17.rhs, audit.eq1.rhs * prod)):
            assert abs(got - want) <= 1e-8 * max(1.0, abs(want))
        assert audit.min_slack >= -1e-9


def test_axis_exchange_symmetry(rng):
    model, theta = random_unitary_family(rng, 3)
    povm = random_projective_povm(rng, 3)
    ab = tradeoff_audit(model, povm, theta, axes=(0, 1))
    ba = tradeoff_audit(model, povm, theta, axes=(1, 0))
    assert ba.qfi == ab.qfi[::-1] and ba.cfi == ab.cfi[::-1]
    assert ba.c2 == pytest.approx(ab.c2, abs=1e-14)
    assert ba.curvature == pytest.approx(-ab.curvature, abs=1e-14)
    for name in ("eq1", "eq17"):
        assert getattr(ba, name).slack == pytest.approx(getattr(ab, name).slack, abs=1e-12)
    assert ba.eq18_slack == pytest.approx(ab.eq18_slack, abs=1e-14)


def test_audit_json_schema():
    obj = tradeoff_audit(pure_bloch(), Z_POVM, [1.0, 0.5]).to_json()
    assert set(obj) == {"qfi", "cfi", "regret", "c2", "curvature", "eq1", "eq17", "eq18_slack"}
    assert set(obj["eq1"]) == {"lhs", "rhs", "slack"}
