"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its worst observed
error, then asserts. Run with ``pytest tests/test_acceptance.py -v``.
"""

import io

import numpy as np
import pytest

from mixcurv import oracle
from mixcurv.cli import main
from mixcurv.geometry import (
    curvature_commutator,
    curvature_spectral_lowrank,
    geometry_report,
    pure_state_curvatures,
    wilczek_zee,
)
from mixcurv.metrology import tradeoff_audit
from mixcurv.models import embedded_qubit, mixed_bloch, pure_bloch, unit_vector, unit_vector_derivative, unitary_family
from mixcurv.qubit import eigenstate_curvatures
from mixcurv.sampling import (
    random_chart_point,
    random_density,
    random_hermitian,
    random_projective_povm,
    random_unitary,
    random_unitary_family,
)
from mixcurv.sld import lyapunov_residual, solve_sld, solve_slds
from mixcurv.states import Spectrum, projective_povm, spectral_decompose, validate_density

HALF_PI = np.pi / 2


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})")
        assert ok, detail

    return emit


def seeded(k):
    return np.random.default_rng([2026, k])


def test_criterion_01_sld_residual(verdict):
    rng = seeded(1)
    worst_res = worst_oracle = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        rho = validate_density(random_density(rng, n, min_eig=1e-3))
        d = random_hermitian(rng, n, traceless=True)
        sld = solve_sld(spectral_decompose(rho), d)
        worst_res = max(worst_res, lyapunov_residual(rho.matrix, d, sld))
        worst_oracle = max(worst_oracle, float(np.linalg.norm(sld - oracle.sld_vec_solve(rho, d))))
    ok = worst_res <= 1e-10 and worst_oracle <= 1e-9
    verdict(1, "SLD residual and vectorized oracle", ok,
            f"residual {worst_res:.2e} <= 1e-10, oracle gap {worst_oracle:.2e} <= 1e-9")


def test_criterion_02_route_equivalence(verdict):
    rng = seeded(2)
    worst = 0.0
    for k in range(200):
        model, theta = random_unitary_family(rng, 2 + k % 5)
        rep = geometry_report(model, theta)
        assert rep.branch == "full"
        worst = max(worst, rep.residuals["commutator_vs_spectral"])
    verdict(2, "commutator vs full-rank spectral curvature", worst <= 1e-8, f"worst {worst:.2e} <= 1e-8")


def test_criterion_03_low_rank_route(verdict):
    rho, s = solve_slds(embedded_qubit(4, 0.5), [HALF_PI, 0.0])
    spectral = curvature_spectral_lowrank(s.spectrum, *s.derivatives)
    commutator = curvature_commutator(rho, s[0], s[1])
    err_embed = max(abs(spectral + 0.0625), abs(commutator + 0.0625))

    rng = seeded(3)
    err_rank1 = 0.0
    for _ in range(20):
        theta = random_chart_point(rng)
        _, p = solve_slds(pure_bloch(), theta)
        pure = pure_state_curvatures(p.spectrum, wilczek_zee(p.spectrum, *p.derivatives, pairs=[(0, 1)]))[0]
        err_rank1 = max(err_rank1, abs(curvature_spectral_lowrank(p.spectrum, *p.derivatives) - pure))
        # rank-one states in a larger space through a random unitary orbit
        n = int(rng.integers(3, 6))
        v = random_unitary(rng, n)[:, 0]
        model = unitary_family(np.outer(v, v.conj()), random_hermitian(rng, n), random_hermitian(rng, n))
        rho1, q = solve_slds(model, rng.uniform(-np.pi, np.pi, size=2))
        pure = pure_state_curvatures(q.spectrum, wilczek_zee(
            q.spectrum, *q.derivatives, pairs=[(0, k) for k in range(1, n)]))[0]
        err_rank1 = max(err_rank1, abs(curvature_spectral_lowrank(q.spectrum, *q.derivatives) - pure))
        err_rank1 = max(err_rank1, abs(curvature_commutator(rho1, q[0], q[1]) - pure))
    ok = err_embed <= 1e-8 and err_rank1 <= 1e-9
    verdict(3, "low-rank route and rank-one reduction", ok,
            f"embedded N=4 error {err_embed:.2e} <= 1e-8, rank-one error {err_rank1:.2e} <= 1e-9")


def test_criterion_04_qubit_closed_forms(verdict):
    rng = seeded(4)
    worst_pure = 0.0
    for _ in range(64):
        theta = random_chart_point(rng)
        worst_pure = max(worst_pure, abs(geometry_report(pure_bloch(), theta).curvature[0, 1]
                                         + 0.5 * np.sin(theta[0])))
    worst_mixed = 0.0
    for r in (0.2, 0.5, 0.9):
        for _ in range(20):
            theta = random_chart_point(rng)
            omega = geometry_report(mixed_bloch(r), theta).curvature[0, 1]
            dr = [r * unit_vector_derivative(*theta, k) for k in (0, 1)]
            psi1, _ = eigenstate_curvatures(r * unit_vector(*theta), *dr)
            worst_mixed = max(worst_mixed, abs(omega + r**3 * psi1))
    ok = worst_pure <= 1e-10 and worst_mixed <= 1e-9
    verdict(4, "qubit closed forms", ok,
            f"pure {worst_pure:.2e} <= 1e-10, mixed scaling {worst_mixed:.2e} <= 1e-9")


def _chern(*model_args):
    out = io.StringIO()
    assert main(["chern", *model_args, "--resolution", "200"], out) == 0
    return float(out.getvalue())


def test_criterion_05_chern_integration(verdict):
    pure = _chern("--model", "pure-bloch")
    half = _chern("--model", "mixed-bloch", "--model-arg", "r=0.5")
    flat = _chern("--model", "mixed-bloch", "--model-arg", "r=0")
    ok = abs(pure + 1) <= 1e-3 and abs(half + 0.125) <= 1e-3 and abs(flat) <= 1e-12
    verdict(5, "Chern integration at 200x200", ok, f"pure {pure:.6f}, r=0.5 {half:.6f}, r=0 {flat:.1e}")


def test_criterion_06_saturation(verdict):
    rng = seeded(6)
    worst_pure = 0.0
    for _ in range(50):
        rep = geometry_report(pure_bloch(), random_chart_point(rng))
        worst_pure = max(worst_pure, abs(rep.qfi[0, 0] * rep.qfi[1, 1] - 4 * rep.curvature[0, 1] ** 2))
        # generic pure qubit family: the chart need not be orthogonal, so the
        # saturated identity is det F = 4 Omega^2 (the product form plus F_ab^2)
        v = random_unitary(rng, 2)[:, 0]
        model = unitary_family(np.outer(v, v.conj()), random_hermitian(rng, 2), random_hermitian(rng, 2))
        rep = geometry_report(model, rng.uniform(-np.pi, np.pi, size=2))
        worst_pure = max(worst_pure, abs(np.linalg.det(rep.qfi) - 4 * rep.curvature[0, 1] ** 2))
    min_slack = np.inf
    max_c2 = -np.inf
    for _ in range(200):
        model, theta = random_unitary_family(rng, int(rng.integers(2, 7)))
        rep = geometry_report(model, theta)
        prod = rep.qfi[0, 0] * rep.qfi[1, 1]
        min_slack = min(min_slack, prod - 4 * rep.curvature[0, 1] ** 2)
        max_c2 = max(max_c2, 4 * rep.curvature[0, 1] ** 2 / prod)
    ok = worst_pure <= 1e-9 and min_slack >= -1e-9 and max_c2 <= 1 + 1e-9
    verdict(6, "saturation for pure qubits, bound for mixed states", ok,
            f"pure gap {worst_pure:.2e}, mixed min slack {min_slack:.2e}, max C^2 {max_c2:.6f}")


@pytest.fixture(scope="module")
def tradeoff_draws():
    rng = seeded(7)
    audits = []
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        model, theta = random_unitary_family(rng, n)
        audits.append(tradeoff_audit(model, random_projective_povm(rng, n), theta))
    return audits


def test_criterion_07_tradeoff(verdict, tradeoff_draws):
    slack1 = min(a.eq1.slack for a in tradeoff_draws)
    slack17 = min(a.eq17.slack for a in tradeoff_draws)
    sat = tradeoff_audit(pure_bloch(), projective_povm(np.eye(2)), [HALF_PI, 0.0])
    gap = abs(sat.eq1.lhs - sat.eq1.rhs)
    ok = slack1 >= -1e-9 and slack17 >= -1e-9 and gap <= 1e-9
    verdict(7, "trade-off inequalities over 1000 draws", ok,
            f"min slack regret form {slack1:.2e}, scaled form {slack17:.2e}, sigma_z saturation gap {gap:.1e}")


def test_criterion_08_fisher_monotonicity(verdict, tradeoff_draws):
    excess = max(max(a.cfi[k] - a.qfi[k] for k in (0, 1)) for a in tradeoff_draws)
    verdict(8, "classical Fisher never exceeds quantum Fisher", excess <= 1e-9, f"max F - QFI {excess:.2e} <= 1e-9")


def test_criterion_09_fidelity_oracle(verdict):
    rng = seeded(9)
    worst = 0.0
    for _ in range(100):
        model, theta = random_unitary_family(rng, int(rng.integers(2, 5)))
        axis = int(rng.integers(0, 2))
        rho, s = solve_slds(model, theta)
        qfi = rho.expect(s[axis] @ s[axis]).real
        worst = max(worst, abs(oracle.qfi_fidelity(model, theta, axis, eps=1e-4) / qfi - 1))
    verdict(9, "fidelity oracle vs Tr(rho L^2)", worst <= 1e-4, f"worst relative {worst:.2e} <= 1e-4")


def test_criterion_10_structural_identities(verdict):
    rng = seeded(10)
    anti = qgt = wz_anti = gauge = 0.0
    for _ in range(100):
        model, theta = random_unitary_family(rng, int(rng.integers(2, 7)))
        rep = geometry_report(model, theta)
        anti = max(anti, float(np.max(np.abs(rep.curvature + rep.curvature.T))))
        qgt = max(qgt, float(np.max(np.abs(rep.curvature + 2 * rep.qgt.imag))))
        _, s = solve_slds(model, theta)
        spec = s.spectrum
        a = wilczek_zee(spec, *s.derivatives)
        wz_anti = max(wz_anti, float(np.max(np.abs(a.imag + a.imag.T))))
        phases = np.exp(2j * np.pi * rng.random(spec.dim))
        b = wilczek_zee(Spectrum(spec.probabilities, spec.states * phases, spec.rank, spec.rank_tol), *s.derivatives)
        gauge = max(gauge, float(np.max(np.abs(a.entries - b.entries))))
    ok = anti <= 1e-12 and qgt <= 1e-10 and wz_anti <= 1e-10 and gauge <= 1e-10
    verdict(10, "structural identities", ok,
            f"antisymmetry {anti:.1e}, curvature+2ImQ {qgt:.1e}, I_ij+I_ji {wz_anti:.1e}, gauge {gauge:.1e}")
